//! Test support: the 15-node sample DAG used across the suite, seeded random
//! graph samplers, the synthetic hub benchmark graph, and small independent
//! oracles (matrix-squaring closure, exhaustive longest path, label
//! group-by) that implementation tests compare against.
//!
//! Everything here is deterministic under a fixed seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Dag, DirectedGraph, NodeId};
use crate::labels::{HopLabels, HopStep, Rank};

/// Edges of the 15-node sample DAG.
///
/// The graph is built so that its first three degree-ranked nodes are 0, 1
/// and 2 (in that order), the pruned ancestor and descendant sets of those
/// three hop nodes are the step sets in [`sample_steps`], and the total
/// transitive-closure size is exactly 70. All of this is re-verified from
/// scratch by the test suite.
pub const SAMPLE_EDGES: [(NodeId, NodeId); 28] = [
    (3, 0),
    (5, 0),
    (10, 0),
    (0, 1),
    (2, 1),
    (3, 1),
    (4, 1),
    (5, 1),
    (10, 1),
    (11, 1),
    (3, 2),
    (4, 2),
    (5, 2),
    (10, 2),
    (0, 6),
    (0, 8),
    (0, 9),
    (0, 12),
    (1, 9),
    (9, 12),
    (12, 14),
    (2, 7),
    (7, 6),
    (7, 8),
    (7, 13),
    (6, 14),
    (8, 14),
    (13, 14),
];

/// Transitive-closure size of the sample DAG.
pub const SAMPLE_TC_TOTAL: u64 = 70;

/// The sample DAG with its natural node ids.
pub fn sample_dag() -> Dag {
    Dag::from_edges(15, SAMPLE_EDGES.to_vec()).expect("sample graph is acyclic")
}

/// The sample DAG as edge-list text, for parser and CLI round trips.
pub fn sample_edge_list() -> String {
    let mut s = String::from("# 15-node sample graph\n");
    for (u, v) in SAMPLE_EDGES {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// The three hop steps of the sample DAG under degree ranking: per rank the
/// hop node, its pruned ancestor set and its pruned descendant set (hop node
/// first, as the BFS admits it).
pub fn sample_steps() -> Vec<HopStep> {
    vec![
        HopStep {
            rank: 1,
            hop_node: 0,
            ancestors: vec![0, 3, 5, 10],
            descendants: vec![0, 1, 6, 8, 9, 12, 14],
        },
        HopStep {
            rank: 2,
            hop_node: 1,
            ancestors: vec![1, 2, 4, 11],
            descendants: vec![1, 9, 12, 14],
        },
        HopStep {
            rank: 3,
            hop_node: 2,
            ancestors: vec![2, 3, 4, 5, 10],
            descendants: vec![2, 7, 6, 8, 13],
        },
    ]
}

/// Labels over the first `k` sample steps, rebuilt from the step sets.
pub fn sample_labels(k: usize) -> HopLabels {
    let steps = sample_steps();
    assert!(k <= steps.len());
    let mut labels = HopLabels::new(15, k as u32);
    for step in &steps[..k] {
        crate::labels::apply_step(&mut labels, step).expect("sample steps apply cleanly");
    }
    labels
}

/// A seeded random DAG: random node count up to `max_n`, a hidden random
/// topological order, and forward edges sampled at a density drawn from a
/// small sweep so both sparse and dense shapes appear.
pub fn random_dag(seed: u64, max_n: u32) -> Dag {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n.max(1));
    let densities = [0.04, 0.10, 0.20, 0.35, 0.55, 0.80];
    let p = densities[rng.gen_range(0..densities.len())];
    let mut order: Vec<NodeId> = (0..n).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut edges = Vec::new();
    for i in 0..n as usize {
        for j in (i + 1)..n as usize {
            if rng.gen_bool(p) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Dag::from_edges(n, edges).expect("forward-sampled edges are acyclic")
}

/// A seeded random directed graph, cycles and duplicates included.
pub fn random_digraph(seed: u64, max_n: u32) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n.max(1));
    let m = rng.gen_range(0..=(3 * n as usize));
    let edges = (0..m)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    DirectedGraph::from_edges(n, edges).expect("ids in range")
}

/// A synthetic benchmark DAG: a chain of `hubs` high-degree nodes, each fed
/// by its own pod of sources and feeding its own pod of sinks, plus one cap
/// node on each end of the chain (equalizing hub degrees) and optional
/// isolated filler nodes.
///
/// Every reachable pair runs through a hub, so the reachability ratio at
/// `k = hubs` is 1, and the degree ranking selects the hubs in chain order.
pub fn hub_dag(hubs: u32, sources_per_hub: u32, sinks_per_hub: u32, filler: u32) -> Dag {
    assert!(hubs >= 1);
    let sources = hubs * sources_per_hub;
    let sinks = hubs * sinks_per_hub;
    let cap_source = hubs + sources + sinks;
    let cap_sink = cap_source + 1;
    let n = cap_sink + 1 + filler;
    let mut edges = Vec::with_capacity((sources + sinks + hubs + 1) as usize);
    for h in 0..hubs.saturating_sub(1) {
        edges.push((h, h + 1));
    }
    for h in 0..hubs {
        for s in 0..sources_per_hub {
            edges.push((hubs + h * sources_per_hub + s, h));
        }
        for t in 0..sinks_per_hub {
            edges.push((h, hubs + sources + h * sinks_per_hub + t));
        }
    }
    edges.push((cap_source, 0));
    edges.push((hubs - 1, cap_sink));
    Dag::from_edges(n, edges).expect("hub graph is acyclic")
}

/// Reachability closure (including self pairs) by boolean matrix squaring.
/// Rows are bitsets; the matrix is squared until it stops changing.
pub fn closure_by_squaring(d: &Dag) -> Vec<Vec<u64>> {
    let n = d.node_count() as usize;
    let words = n.div_ceil(64).max(1);
    let mut rows = vec![vec![0u64; words]; n];
    for u in 0..n {
        rows[u][u / 64] |= 1 << (u % 64);
        for &v in d.successors(u as NodeId) {
            rows[u][v as usize / 64] |= 1 << (v as usize % 64);
        }
    }
    loop {
        let mut next = rows.clone();
        for u in 0..n {
            for w in 0..words {
                let mut bits = rows[u][w];
                while bits != 0 {
                    let j = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    for t in 0..words {
                        next[u][t] |= rows[j][t];
                    }
                }
            }
        }
        if next == rows {
            return rows;
        }
        rows = next;
    }
}

/// Bit test into a [`closure_by_squaring`] matrix.
pub fn closure_reaches(closure: &[Vec<u64>], u: NodeId, v: NodeId) -> bool {
    closure[u as usize][v as usize / 64] & (1 << (v as usize % 64)) != 0
}

/// Longest path (in nodes) by exhaustive path enumeration. Exponential;
/// only for small test graphs.
pub fn brute_force_longest_path(d: &Dag) -> u32 {
    fn dfs(d: &Dag, v: NodeId) -> u32 {
        let mut best = 1;
        for &w in d.successors(v) {
            best = best.max(1 + dfs(d, w));
        }
        best
    }
    (0..d.node_count()).map(|v| dfs(d, v)).max().unwrap_or(0)
}

/// Naive equivalence partition of `subset` by exact label value, classes
/// ordered by their label lexicographically. The independent counterpart of
/// the id-based grouping in the engine.
pub fn group_by_label(
    labels: &HopLabels,
    subset: &[NodeId],
    side: crate::oracle::Side,
) -> Vec<Vec<NodeId>> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<Vec<Rank>, Vec<NodeId>> = BTreeMap::new();
    for &v in subset {
        let label = match side {
            crate::oracle::Side::Forward => labels.out_label(v),
            crate::oracle::Side::Backward => labels.in_label(v),
        };
        groups.entry(label.to_vec()).or_default().push(v);
    }
    groups.into_values().collect()
}
