//! Graph representations: raw directed graphs, their DAG condensation,
//! degree-based node ranking and basic statistics.
//!
//! The pipeline starts from a [`DirectedGraph`] parsed out of an edge-list or
//! `.gra` file, condenses strongly connected components into a [`Dag`] and
//! ranks the DAG nodes by `(out-degree + 1) * (in-degree + 1)`. Everything
//! downstream (labels, counting engines, query benchmark) operates on the
//! condensed DAG only.

mod condense;
mod parse;

pub use parse::{parse_edge_list, write_gra, GraphFormat};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// A raw directed graph: dense node ids plus a normalized edge list.
///
/// Normalization drops duplicate edges and self loops; the drop counts are
/// kept so callers can report them.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    node_count: u32,
    edges: Vec<(NodeId, NodeId)>,
    dropped_duplicates: u64,
    dropped_self_loops: u64,
}

impl DirectedGraph {
    /// Builds a normalized graph from an arbitrary edge list.
    pub fn from_edges(node_count: u32, mut edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        for &(u, v) in &edges {
            check_node(u, node_count)?;
            check_node(v, node_count)?;
        }
        let raw = edges.len();
        let mut dropped_self_loops = 0u64;
        edges.retain(|&(u, v)| {
            if u == v {
                dropped_self_loops += 1;
                false
            } else {
                true
            }
        });
        edges.sort_unstable();
        edges.dedup();
        let dropped_duplicates = (raw - edges.len()) as u64 - dropped_self_loops;
        Ok(Self {
            node_count,
            edges,
            dropped_duplicates,
            dropped_self_loops,
        })
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Normalized (sorted, deduplicated, loop-free) edges.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn dropped_duplicates(&self) -> u64 {
        self.dropped_duplicates
    }

    pub fn dropped_self_loops(&self) -> u64 {
        self.dropped_self_loops
    }
}

fn check_node(v: NodeId, count: u32) -> Result<()> {
    if v >= count {
        return Err(Error::NodeOutOfRange {
            node: v as u64,
            count,
        });
    }
    Ok(())
}

/// Compressed sparse adjacency: neighbor slices per node, targets sorted
/// ascending within each slice.
#[derive(Debug, Clone, Default)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Adjacency {
    /// Builds the structure from (source, target) pairs; `pairs` need not be
    /// sorted.
    fn from_pairs(node_count: u32, mut pairs: Vec<(NodeId, NodeId)>) -> Self {
        pairs.sort_unstable();
        let mut offsets = Vec::with_capacity(node_count as usize + 1);
        let mut targets = Vec::with_capacity(pairs.len());
        offsets.push(0);
        let mut it = pairs.iter().peekable();
        for u in 0..node_count {
            while let Some(&&(s, t)) = it.peek() {
                if s != u {
                    break;
                }
                targets.push(t);
                it.next();
            }
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }
}

/// The condensed graph: one node per strongly connected component, forward
/// and reverse adjacency, a topological order and the raw-to-DAG node map.
///
/// Immutable after construction; shared concurrent reads are safe.
#[derive(Debug, Clone)]
pub struct Dag {
    node_count: u32,
    fwd: Adjacency,
    rev: Adjacency,
    topo_order: Vec<NodeId>,
    topo_pos: Vec<u32>,
    scc_map: Vec<NodeId>,
}

impl Dag {
    /// Builds a DAG directly from an already-acyclic edge list, keeping node
    /// ids as given. Fails with [`Error::Cycle`] otherwise.
    pub fn from_edges(node_count: u32, edges: Vec<(NodeId, NodeId)>) -> Result<Self> {
        let g = DirectedGraph::from_edges(node_count, edges)?;
        if g.dropped_self_loops() > 0 {
            return Err(Error::Cycle);
        }
        let fwd = Adjacency::from_pairs(node_count, g.edges.clone());
        let rev = Adjacency::from_pairs(node_count, g.edges.iter().map(|&(u, v)| (v, u)).collect());
        let topo_order = kahn_min_id(node_count, &fwd, &rev).ok_or(Error::Cycle)?;
        let topo_pos = positions(&topo_order);
        Ok(Self {
            node_count,
            fwd,
            rev,
            topo_order,
            topo_pos,
            scc_map: (0..node_count).collect(),
        })
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.fwd.edge_count()
    }

    pub fn successors(&self, u: NodeId) -> &[NodeId] {
        self.fwd.neighbors(u)
    }

    pub fn predecessors(&self, u: NodeId) -> &[NodeId] {
        self.rev.neighbors(u)
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.fwd.degree(u)
    }

    pub fn in_degree(&self, u: NodeId) -> usize {
        self.rev.degree(u)
    }

    /// A valid topological order over DAG nodes (sources first).
    pub fn topo_order(&self) -> &[NodeId] {
        &self.topo_order
    }

    /// Position of `u` within [`Self::topo_order`].
    pub fn topo_position(&self, u: NodeId) -> u32 {
        self.topo_pos[u as usize]
    }

    /// Raw-graph node id to DAG node id; total over the raw graph.
    pub fn scc_map(&self) -> &[NodeId] {
        &self.scc_map
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        check_node(v, self.node_count)
    }

    /// A stable structural fingerprint (FNV-1a over the adjacency stream),
    /// used to tie workload files to the graph they were generated for.
    pub fn structural_hash(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        eat(self.node_count as u64);
        for u in 0..self.node_count {
            eat(u as u64);
            for &v in self.successors(u) {
                eat(v as u64);
            }
        }
        h
    }
}

/// Coalesces every strongly connected component of `g` into a single node.
///
/// DAG node ids are assigned so that every edge goes from a lower id to a
/// higher id; the identity permutation is therefore a valid topological
/// order, and condensing a graph that is already a DAG with topologically
/// sorted ids (such as a chain) returns it unchanged. Runs in
/// `O(|V| + |E|)`.
pub fn condense(g: &DirectedGraph) -> Dag {
    condense::condense(g)
}

/// The outcome of sorting DAG nodes by rank value.
#[derive(Debug, Clone)]
pub struct RankedOrder {
    /// Nodes sorted by descending score; ties broken by ascending node id.
    pub order: Vec<NodeId>,
    /// Score per node id.
    pub score: Vec<u64>,
}

/// Ranks nodes by `(|out(v)| + 1) * (|in(v)| + 1)`, descending, with ties
/// broken by ascending node id so the result is deterministic.
pub fn rank_nodes(d: &Dag) -> RankedOrder {
    let score: Vec<u64> = (0..d.node_count)
        .map(|v| (d.out_degree(v) as u64 + 1) * (d.in_degree(v) as u64 + 1))
        .collect();
    let mut order: Vec<NodeId> = (0..d.node_count).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(score[v as usize]), v));
    RankedOrder { order, score }
}

/// Basic size and shape statistics of a DAG.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GraphStats {
    pub node_count: u32,
    pub edge_count: u64,
    /// `2|E| / |V|`; zero for the empty graph.
    pub avg_degree: f64,
    /// Number of nodes on a longest path (topological levels).
    pub topo_levels: u32,
    /// Mean `|TC(u)|`; filled on demand from a transitive-closure summary.
    pub avg_reach: Option<f64>,
}

impl GraphStats {
    /// Fills the mean reach from an oracle summary; everything else in the
    /// stats is cheap, this one is quadratic and therefore opt-in.
    pub fn with_avg_reach(mut self, tc: &crate::oracle::TcSummary) -> Self {
        self.avg_reach = Some(tc.avg_reach());
        self
    }
}

/// Computes statistics; `topo_levels` comes from a longest-path DP over the
/// topological order.
pub fn compute_stats(d: &Dag) -> GraphStats {
    let n = d.node_count;
    let e = d.edge_count() as u64;
    let avg_degree = if n == 0 { 0.0 } else { 2.0 * e as f64 / n as f64 };
    let mut levels = vec![0u32; n as usize];
    let mut topo_levels = 0u32;
    for &v in &d.topo_order {
        let mut lv = 1;
        for &p in d.predecessors(v) {
            lv = lv.max(levels[p as usize] + 1);
        }
        levels[v as usize] = lv;
        topo_levels = topo_levels.max(lv);
    }
    GraphStats {
        node_count: n,
        edge_count: e,
        avg_degree,
        topo_levels,
        avg_reach: None,
    }
}

/// Kahn's algorithm preferring the smallest ready node id; `None` on cycles.
fn kahn_min_id(node_count: u32, fwd: &Adjacency, rev: &Adjacency) -> Option<Vec<NodeId>> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let mut indeg: Vec<usize> = (0..node_count).map(|v| rev.degree(v)).collect();
    let mut ready: BinaryHeap<Reverse<NodeId>> = (0..node_count)
        .filter(|&v| indeg[v as usize] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(node_count as usize);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for &w in fwd.neighbors(u) {
            indeg[w as usize] -= 1;
            if indeg[w as usize] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    (order.len() == node_count as usize).then_some(order)
}

fn positions(order: &[NodeId]) -> Vec<u32> {
    let mut pos = vec![0u32; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i as u32;
    }
    pos
}

pub(crate) fn dag_from_parts(
    node_count: u32,
    edges: Vec<(NodeId, NodeId)>,
    topo_order: Vec<NodeId>,
    scc_map: Vec<NodeId>,
) -> Dag {
    let fwd = Adjacency::from_pairs(node_count, edges.clone());
    let rev = Adjacency::from_pairs(node_count, edges.into_iter().map(|(u, v)| (v, u)).collect());
    let topo_pos = positions(&topo_order);
    Dag {
        node_count,
        fwd,
        rev,
        topo_order,
        topo_pos,
        scc_map,
    }
}

#[cfg(test)]
mod tests;
