//! Equal-workload generation and the label-accelerated query engine.
//!
//! A query runs through three channels, in a fixed, documented order:
//! first the positive label cut (and, for a complete index, its exact
//! negative counterpart), then a sound negative cut over two topological
//! orders, and only then a pruned BFS fallback. The per-query answer and
//! the per-channel tallies are deterministic for a given graph, label set
//! and workload.

use std::collections::VecDeque;
use std::io::{BufRead, Write};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeId};
use crate::labels::HopLabels;

/// A reachability query with its oracle-validated answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Query {
    pub source: NodeId,
    pub target: NodeId,
    pub expected: bool,
}

/// An equal workload: exactly half reachable, half unreachable queries.
#[derive(Debug, Clone)]
pub struct Workload {
    pub queries: Vec<Query>,
    pub seed: u64,
    pub reachable: u64,
    pub unreachable: u64,
}

/// Generates `n / 2` reachable plus `n / 2` unreachable queries (`n` must be
/// even), each validated against the BFS oracle; deterministic per seed.
///
/// Reachable queries come from random sink-bound walks: pick a start node,
/// follow random out-neighbors until a node without successors, re-walk if
/// the path never left the start, then pick a random node further along the
/// path. Unreachable queries are uniform pair samples kept only when the
/// oracle rejects reachability.
pub fn gen_workload(d: &Dag, n: u64, seed: u64) -> Result<Workload> {
    if !n.is_multiple_of(2) {
        return Err(Error::Usage(format!(
            "workload size must be even to split 50/50, got {n}"
        )));
    }
    let per_class = n / 2;
    let node_count = d.node_count();
    if per_class > 0 {
        // Any DAG with at least two nodes has an unreachable ordered pair;
        // with fewer there is nothing to sample.
        if node_count < 2 {
            return Err(Error::WorkloadGeneration {
                class: "unreachable",
            });
        }
        if d.edge_count() == 0 {
            return Err(Error::WorkloadGeneration { class: "reachable" });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queries = Vec::with_capacity(n as usize);
    let max_attempts = 1_000u64.saturating_mul(per_class).saturating_add(10_000);
    // Epoch-stamped BFS so validating millions of candidates does not
    // reallocate a visited set per attempt. Same answers as oracle::reach.
    let mut probe = ReachProbe::new(node_count);

    let mut attempts = 0u64;
    let mut path: Vec<NodeId> = Vec::new();
    for _ in 0..per_class {
        loop {
            attempts += 1;
            if attempts > max_attempts {
                return Err(Error::WorkloadGeneration { class: "reachable" });
            }
            let start = rng.gen_range(0..node_count);
            path.clear();
            path.push(start);
            let mut cur = start;
            loop {
                let succ = d.successors(cur);
                if succ.is_empty() {
                    break;
                }
                cur = succ[rng.gen_range(0..succ.len())];
                path.push(cur);
            }
            if path.len() < 2 {
                continue; // the walk never left the start node
            }
            let target = path[rng.gen_range(1..path.len())];
            debug_assert!(probe.reaches(d, start, target));
            queries.push(Query {
                source: start,
                target,
                expected: true,
            });
            break;
        }
    }

    let mut attempts = 0u64;
    for _ in 0..per_class {
        loop {
            attempts += 1;
            if attempts > max_attempts {
                return Err(Error::WorkloadGeneration {
                    class: "unreachable",
                });
            }
            let u = rng.gen_range(0..node_count);
            let v = rng.gen_range(0..node_count);
            if !probe.reaches(d, u, v) {
                queries.push(Query {
                    source: u,
                    target: v,
                    expected: false,
                });
                break;
            }
        }
    }

    Ok(Workload {
        queries,
        seed,
        reachable: per_class,
        unreachable: per_class,
    })
}

struct ReachProbe {
    visit: Vec<u32>,
    epoch: u32,
    queue: VecDeque<NodeId>,
}

impl ReachProbe {
    fn new(node_count: u32) -> Self {
        Self {
            visit: vec![0; node_count as usize],
            epoch: 0,
            queue: VecDeque::new(),
        }
    }

    fn reaches(&mut self, d: &Dag, u: NodeId, v: NodeId) -> bool {
        if u == v {
            return true;
        }
        self.epoch += 1;
        if self.epoch == u32::MAX {
            self.visit.fill(0);
            self.epoch = 1;
        }
        self.visit[u as usize] = self.epoch;
        self.queue.clear();
        self.queue.push_back(u);
        while let Some(w) = self.queue.pop_front() {
            for &x in d.successors(w) {
                if x == v {
                    return true;
                }
                if self.visit[x as usize] != self.epoch {
                    self.visit[x as usize] = self.epoch;
                    self.queue.push_back(x);
                }
            }
        }
        false
    }
}

/// Two topological orders used as a sound negative cut: a node that does
/// not precede the target in both orders cannot reach it.
#[derive(Debug, Clone)]
pub struct TopoPair {
    pos_fwd: Vec<u32>,
    pos_alt: Vec<u32>,
}

impl TopoPair {
    /// The DAG's own order, plus a second one built by preferring the
    /// highest ready node id.
    pub fn new(d: &Dag) -> Self {
        let mut pos_fwd = vec![0u32; d.node_count() as usize];
        for (i, &v) in d.topo_order().iter().enumerate() {
            pos_fwd[v as usize] = i as u32;
        }

        let mut indeg: Vec<u32> = (0..d.node_count())
            .map(|v| d.in_degree(v) as u32)
            .collect();
        let mut ready: std::collections::BinaryHeap<NodeId> = (0..d.node_count())
            .filter(|&v| indeg[v as usize] == 0)
            .collect();
        let mut pos_alt = vec![0u32; d.node_count() as usize];
        let mut next = 0u32;
        while let Some(u) = ready.pop() {
            pos_alt[u as usize] = next;
            next += 1;
            for &w in d.successors(u) {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    ready.push(w);
                }
            }
        }
        debug_assert_eq!(next, d.node_count());
        Self { pos_fwd, pos_alt }
    }

    /// True when `u` cannot possibly reach `v` (`u != v` assumed).
    fn cuts(&self, u: NodeId, v: NodeId) -> bool {
        self.pos_fwd[u as usize] >= self.pos_fwd[v as usize]
            || self.pos_alt[u as usize] >= self.pos_alt[v as usize]
    }
}

/// Which machinery settled a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerChannel {
    /// Settled by the label index alone (including trivial self queries and
    /// exact negatives under a complete index).
    Labels,
    /// Rejected by the topological-order cut.
    NegativeCut,
    /// Settled by the pruned BFS fallback.
    Traversal,
}

/// Scratch buffers reused across [`answer_with_stats`] calls.
#[derive(Debug, Default)]
pub struct AnswerScratch {
    visit: Vec<u32>,
    epoch: u32,
    queue: VecDeque<NodeId>,
}

impl AnswerScratch {
    pub fn new(node_count: u32) -> Self {
        Self {
            visit: vec![0; node_count as usize],
            epoch: 0,
            queue: VecDeque::new(),
        }
    }
}

/// Answers one reachability query. See [`answer_with_stats`].
pub fn answer(d: &Dag, labels: &HopLabels, topo: &TopoPair, u: NodeId, v: NodeId) -> bool {
    let mut scratch = AnswerScratch::new(d.node_count());
    answer_with_stats(d, labels, topo, &mut scratch, u, v).0
}

/// Answers one query and reports the channel plus expanded node count.
///
/// Decision order is fixed: (1) a positive label hit answers true with zero
/// traversal; a complete index also answers false exactly; (2) `u == v` is
/// true; (3) the topological cut answers false; (4) BFS from `u`, skipping
/// nodes the cut rules out, where any visited node with a positive label
/// hit towards `v` short-circuits to true.
pub fn answer_with_stats(
    d: &Dag,
    labels: &HopLabels,
    topo: &TopoPair,
    scratch: &mut AnswerScratch,
    u: NodeId,
    v: NodeId,
) -> (bool, AnswerChannel, u64) {
    if labels.covered(u, v) {
        return (true, AnswerChannel::Labels, 0);
    }
    if u == v {
        return (true, AnswerChannel::Labels, 0);
    }
    if labels.is_complete() {
        // A complete index answers every pair; not covered means unreachable.
        return (false, AnswerChannel::Labels, 0);
    }
    if topo.cuts(u, v) {
        return (false, AnswerChannel::NegativeCut, 0);
    }

    scratch.epoch += 1;
    if scratch.epoch == u32::MAX {
        scratch.visit.fill(0);
        scratch.epoch = 1;
    }
    let epoch = scratch.epoch;
    scratch.visit[u as usize] = epoch;
    scratch.queue.clear();
    scratch.queue.push_back(u);
    let mut expanded = 0u64;
    while let Some(w) = scratch.queue.pop_front() {
        expanded += 1;
        for &x in d.successors(w) {
            if scratch.visit[x as usize] == epoch {
                continue;
            }
            scratch.visit[x as usize] = epoch;
            if x == v || labels.covered(x, v) {
                return (true, AnswerChannel::Traversal, expanded);
            }
            if !topo.cuts(x, v) {
                scratch.queue.push_back(x);
            }
        }
    }
    (false, AnswerChannel::Traversal, expanded)
}

/// Aggregate outcome of a benchmark run. The three channels partition the
/// query count.
#[derive(Debug, Clone, Default, Serialize)]
pub struct QueryStats {
    pub total: u64,
    pub answered_by_labels: u64,
    pub answered_by_negative_cut: u64,
    pub answered_by_traversal: u64,
    pub expanded_nodes_total: u64,
    pub wall_ms: f64,
}

/// Answers every workload query, aborting on any disagreement with the
/// recorded expectation.
pub fn run_bench(d: &Dag, labels: &HopLabels, workload: &Workload) -> Result<QueryStats> {
    let topo = TopoPair::new(d);
    let mut scratch = AnswerScratch::new(d.node_count());
    let mut stats = QueryStats::default();
    let t0 = Instant::now();
    for q in &workload.queries {
        d.check_node(q.source)?;
        d.check_node(q.target)?;
        let (got, channel, expanded) =
            answer_with_stats(d, labels, &topo, &mut scratch, q.source, q.target);
        if got != q.expected {
            return Err(Error::Correctness(format!(
                "query {} -> {} answered {got}, workload expects {}",
                q.source, q.target, q.expected
            )));
        }
        stats.total += 1;
        stats.expanded_nodes_total += expanded;
        match channel {
            AnswerChannel::Labels => stats.answered_by_labels += 1,
            AnswerChannel::NegativeCut => stats.answered_by_negative_cut += 1,
            AnswerChannel::Traversal => stats.answered_by_traversal += 1,
        }
    }
    stats.wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    Ok(stats)
}

/// Writes a workload as CSV with a header comment tying it to its graph.
pub fn write_workload<W: Write>(w: &Workload, graph_hash: u64, mut out: W) -> Result<()> {
    writeln!(out, "# graph_hash={graph_hash:016x} seed={}", w.seed)?;
    writeln!(out, "u,v,expected")?;
    for q in &w.queries {
        writeln!(out, "{},{},{}", q.source, q.target, q.expected)?;
    }
    Ok(())
}

/// Reads a workload CSV; returns the workload and the recorded graph hash.
pub fn read_workload<R: BufRead>(reader: R) -> Result<(Workload, u64)> {
    let mut lines = reader.lines().enumerate();
    let (graph_hash, seed) = match lines.next() {
        Some((_, line)) => parse_workload_header(&line?)?,
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "empty workload file".into(),
            })
        }
    };
    let header_ok = match lines.next() {
        Some((_, line)) => line?.trim() == "u,v,expected",
        None => false,
    };
    if !header_ok {
        return Err(Error::Parse {
            line: 2,
            msg: "expected column header \"u,v,expected\"".into(),
        });
    }
    let mut queries = Vec::new();
    let (mut reachable, mut unreachable) = (0u64, 0u64);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.split(',');
        let (u, v, e) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), Some(e), None) => (u, v, e),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected \"u,v,expected\", got {t:?}"),
                })
            }
        };
        let parse_id = |s: &str| -> Result<NodeId> {
            s.trim().parse::<NodeId>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad node id {s:?}"),
            })
        };
        let expected = match e.trim() {
            "true" => true,
            "false" => false,
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("bad expected flag {other:?}"),
                })
            }
        };
        if expected {
            reachable += 1;
        } else {
            unreachable += 1;
        }
        queries.push(Query {
            source: parse_id(u)?,
            target: parse_id(v)?,
            expected,
        });
    }
    Ok((
        Workload {
            queries,
            seed,
            reachable,
            unreachable,
        },
        graph_hash,
    ))
}

fn parse_workload_header(line: &str) -> Result<(u64, u64)> {
    let rest = line.strip_prefix('#').ok_or_else(|| Error::Parse {
        line: 1,
        msg: "missing \"# graph_hash=... seed=...\" header".into(),
    })?;
    let mut hash = None;
    let mut seed = None;
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("graph_hash=") {
            hash = u64::from_str_radix(v, 16).ok();
        } else if let Some(v) = tok.strip_prefix("seed=") {
            seed = v.parse::<u64>().ok();
        }
    }
    match (hash, seed) {
        (Some(h), Some(s)) => Ok((h, s)),
        _ => Err(Error::Parse {
            line: 1,
            msg: "malformed workload header".into(),
        }),
    }
}

#[cfg(test)]
mod tests;
