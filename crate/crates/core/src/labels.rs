//! Partial 2-hop labels: per-node sorted lists of hop ranks plus the pruned
//! BFS that admits each hop node's ancestor and descendant sets.
//!
//! Labels store the processing order of hop nodes (ranks `1..=k`) rather
//! than node ids, so every label list is sorted for free and a pair query is
//! a merge scan of two sorted lists. While the number of hop nodes stays at
//! or below [`BITSET_RANK_LIMIT`] a fixed-width bitset mirror is kept in
//! sync and the scan collapses to a single `AND`.
//!
//! Construction is strictly sequential in the rank: admitting hop node
//! `v_i` consults the labels of the previous `i - 1` ranks, both to prune
//! the two BFS sweeps and (in the counting engines) to attribute newly
//! covered pairs to the right step. [`collect_step`] therefore never touches
//! the label store; [`apply_step`] performs the deferred update.

use std::collections::VecDeque;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeId};

/// Widest hop-node count for which the bitset mirror is maintained.
pub const BITSET_RANK_LIMIT: u32 = 128;

/// Hop rank: position of a hop node in processing order, starting at 1.
pub type Rank = u32;

#[derive(Debug, Clone)]
struct LabelBits {
    out: Vec<u128>,
    inc: Vec<u128>,
}

/// The partial 2-hop index over the first `k` ranked hop nodes.
#[derive(Debug, Clone)]
pub struct HopLabels {
    node_count: u32,
    hop_nodes: Vec<NodeId>,
    /// Rank of a node if it is a hop node, 0 otherwise.
    hop_rank: Vec<Rank>,
    out_ranks: Vec<Vec<Rank>>,
    in_ranks: Vec<Vec<Rank>>,
    bits: Option<LabelBits>,
}

impl HopLabels {
    /// An empty label store. `planned_k` picks the representation: at most
    /// [`BITSET_RANK_LIMIT`] hop nodes activate the bitset mirror.
    pub fn new(node_count: u32, planned_k: u32) -> Self {
        let n = node_count as usize;
        let bits = (planned_k <= BITSET_RANK_LIMIT).then(|| LabelBits {
            out: vec![0; n],
            inc: vec![0; n],
        });
        Self {
            node_count,
            hop_nodes: Vec::new(),
            hop_rank: vec![0; n],
            out_ranks: vec![Vec::new(); n],
            in_ranks: vec![Vec::new(); n],
            bits,
        }
    }

    /// An empty label store pinned to the sorted-list representation, no
    /// matter how many hop nodes are planned.
    pub fn new_list_only(node_count: u32) -> Self {
        let mut labels = Self::new(node_count, 0);
        labels.bits = None;
        labels
    }

    /// Rebuilds a label store from explicit rank lists. Lists must be
    /// strictly increasing, stay within `1..=k`, and every hop node must
    /// carry its own rank on both sides.
    pub fn from_rank_lists(
        node_count: u32,
        hop_nodes: Vec<NodeId>,
        out_ranks: Vec<Vec<Rank>>,
        in_ranks: Vec<Vec<Rank>>,
    ) -> Result<Self> {
        let n = node_count as usize;
        let k = hop_nodes.len() as u32;
        if out_ranks.len() != n || in_ranks.len() != n {
            return Err(Error::Inconsistency(
                "label list length differs from node count".into(),
            ));
        }
        for lists in [&out_ranks, &in_ranks] {
            for list in lists.iter() {
                let increasing = list.windows(2).all(|w| w[0] < w[1]);
                if !increasing || list.iter().any(|&r| r == 0 || r > k) {
                    return Err(Error::Inconsistency(format!(
                        "malformed rank list {list:?} for k = {k}"
                    )));
                }
            }
        }
        let mut hop_rank = vec![0; n];
        for (i, &v) in hop_nodes.iter().enumerate() {
            if v >= node_count {
                return Err(Error::NodeOutOfRange {
                    node: v as u64,
                    count: node_count,
                });
            }
            let rank = i as Rank + 1;
            if hop_rank[v as usize] != 0 {
                return Err(Error::AlreadyProcessed(v));
            }
            hop_rank[v as usize] = rank;
            let carries = out_ranks[v as usize].binary_search(&rank).is_ok()
                && in_ranks[v as usize].binary_search(&rank).is_ok();
            if !carries {
                return Err(Error::Inconsistency(format!(
                    "hop node {v} does not carry its own rank {rank}"
                )));
            }
        }
        let mut labels = Self {
            node_count,
            hop_nodes,
            hop_rank,
            out_ranks,
            in_ranks,
            bits: None,
        };
        if k <= BITSET_RANK_LIMIT {
            let mut bits = LabelBits {
                out: vec![0; n],
                inc: vec![0; n],
            };
            for v in 0..n {
                for &r in &labels.out_ranks[v] {
                    bits.out[v] |= 1u128 << (r - 1);
                }
                for &r in &labels.in_ranks[v] {
                    bits.inc[v] |= 1u128 << (r - 1);
                }
            }
            labels.bits = Some(bits);
        }
        Ok(labels)
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    /// Number of processed hop nodes.
    pub fn k(&self) -> u32 {
        self.hop_nodes.len() as u32
    }

    /// Hop nodes in processing order; index `i` holds the node of rank
    /// `i + 1`.
    pub fn hop_nodes(&self) -> &[NodeId] {
        &self.hop_nodes
    }

    /// Rank of `v` if it is a hop node.
    pub fn rank_of(&self, v: NodeId) -> Option<Rank> {
        match self.hop_rank[v as usize] {
            0 => None,
            r => Some(r),
        }
    }

    pub fn out_label(&self, v: NodeId) -> &[Rank] {
        &self.out_ranks[v as usize]
    }

    pub fn in_label(&self, v: NodeId) -> &[Rank] {
        &self.in_ranks[v as usize]
    }

    /// Whether the bitset mirror is currently active.
    pub fn uses_bitset(&self) -> bool {
        self.bits.is_some()
    }

    /// Labels over all nodes answer every query exactly.
    pub fn is_complete(&self) -> bool {
        self.k() == self.node_count
    }

    /// Whether `u -> v` is answerable by the current labels: true iff the
    /// out label of `u` intersects the in label of `v`.
    pub fn covered(&self, u: NodeId, v: NodeId) -> bool {
        if let Some(bits) = &self.bits {
            return bits.out[u as usize] & bits.inc[v as usize] != 0;
        }
        intersects(&self.out_ranks[u as usize], &self.in_ranks[v as usize])
    }

    /// Same decision as [`Self::covered`], forced through the sorted-list
    /// representation; exists so tests can compare the two paths.
    pub fn covered_by_lists(&self, u: NodeId, v: NodeId) -> bool {
        intersects(&self.out_ranks[u as usize], &self.in_ranks[v as usize])
    }

    /// Total number of label entries across all nodes and both sides.
    pub fn index_size(&self) -> u64 {
        self.out_ranks
            .iter()
            .chain(self.in_ranks.iter())
            .map(|l| l.len() as u64)
            .sum()
    }
}

fn intersects(a: &[Rank], b: &[Rank]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Ratio of a partial index size over the full (`k = |V|`) index size.
/// Defined as 1.0 when the full index is empty (the empty graph).
pub fn isr(partial: &HopLabels, full: &HopLabels) -> f64 {
    let denom = full.index_size();
    if denom == 0 {
        return 1.0;
    }
    partial.index_size() as f64 / denom as f64
}

/// One construction step: the hop node, its rank and the two admitted sets
/// (each contains the hop node itself, in BFS visit order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopStep {
    pub rank: Rank,
    pub hop_node: NodeId,
    pub ancestors: Vec<NodeId>,
    pub descendants: Vec<NodeId>,
}

/// Reusable BFS state with epoch-stamped visit marks, so per-step clears are
/// O(1) no matter the graph size.
#[derive(Debug, Default)]
pub struct BfsScratch {
    visit: Vec<u32>,
    admit: Vec<u32>,
    epoch: u32,
    queue: VecDeque<NodeId>,
}

impl BfsScratch {
    pub fn new(node_count: u32) -> Self {
        Self {
            visit: vec![0; node_count as usize],
            admit: vec![0; node_count as usize],
            epoch: 0,
            queue: VecDeque::new(),
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch += 1;
        if self.epoch == u32::MAX {
            self.visit.fill(0);
            self.admit.fill(0);
            self.epoch = 1;
        }
        self.epoch
    }
}

/// Runs the pruned forward and backward BFS for the next hop node `v`
/// against the current labels, without updating them.
///
/// A visited node joins the descendant set (and keeps expanding) only while
/// the pair `v -> w` is not yet answerable by the labels; symmetrically for
/// the ancestor side. The sweep over successors and predecessors is FIFO
/// with neighbors in ascending node id, so results are deterministic.
pub fn collect_step(
    dag: &Dag,
    labels: &HopLabels,
    scratch: &mut BfsScratch,
    v: NodeId,
) -> Result<HopStep> {
    dag.check_node(v)?;
    if labels.rank_of(v).is_some() {
        return Err(Error::AlreadyProcessed(v));
    }
    if labels.node_count != dag.node_count() {
        return Err(Error::Inconsistency(
            "labels were built for a different graph".into(),
        ));
    }
    let rank = labels.k() + 1;

    // Forward sweep: descendants of v.
    let fwd_epoch = scratch.next_epoch();
    let mut descendants = Vec::new();
    scratch.visit[v as usize] = fwd_epoch;
    if labels.covered(v, v) {
        return Err(Error::Inconsistency(format!(
            "self query for {v} already covered; the graph cannot be acyclic"
        )));
    }
    scratch.admit[v as usize] = fwd_epoch;
    descendants.push(v);
    scratch.queue.clear();
    scratch.queue.push_back(v);
    while let Some(w) = scratch.queue.pop_front() {
        for &x in dag.successors(w) {
            if scratch.visit[x as usize] == fwd_epoch {
                continue;
            }
            scratch.visit[x as usize] = fwd_epoch;
            if labels.covered(v, x) {
                continue; // answerable by the previous labels: stop expansion
            }
            scratch.admit[x as usize] = fwd_epoch;
            descendants.push(x);
            scratch.queue.push_back(x);
        }
    }

    // Backward sweep: ancestors of v.
    let bwd_epoch = scratch.next_epoch();
    let mut ancestors = Vec::new();
    let mut overlap = 0u32;
    scratch.visit[v as usize] = bwd_epoch;
    ancestors.push(v);
    overlap += 1; // v itself was admitted forward as well
    scratch.queue.clear();
    scratch.queue.push_back(v);
    while let Some(w) = scratch.queue.pop_front() {
        for &x in dag.predecessors(w) {
            if scratch.visit[x as usize] == bwd_epoch {
                continue;
            }
            scratch.visit[x as usize] = bwd_epoch;
            if labels.covered(x, v) {
                continue;
            }
            if scratch.admit[x as usize] == fwd_epoch {
                overlap += 1;
            }
            ancestors.push(x);
            scratch.queue.push_back(x);
        }
    }
    if overlap != 1 {
        return Err(Error::Inconsistency(format!(
            "ancestor and descendant sets of {v} share {overlap} nodes; \
             the graph cannot be acyclic"
        )));
    }

    Ok(HopStep {
        rank,
        hop_node: v,
        ancestors,
        descendants,
    })
}

/// Appends the step's rank to the out label of every ancestor and the in
/// label of every descendant, turning the store from `L^(i-1)` into `L^i`.
pub fn apply_step(labels: &mut HopLabels, step: &HopStep) -> Result<()> {
    if step.rank != labels.k() + 1 {
        return Err(Error::Inconsistency(format!(
            "step rank {} applied to labels at k = {}",
            step.rank,
            labels.k()
        )));
    }
    if labels.rank_of(step.hop_node).is_some() {
        return Err(Error::AlreadyProcessed(step.hop_node));
    }
    if !step.ancestors.contains(&step.hop_node) || !step.descendants.contains(&step.hop_node) {
        return Err(Error::Inconsistency(format!(
            "hop node {} missing from its own step sets",
            step.hop_node
        )));
    }
    // The hop node must be the only shared member; anything else would mean
    // a cycle, and it would also break the step-increment accounting.
    let anc: std::collections::HashSet<NodeId> = step.ancestors.iter().copied().collect();
    let overlap = step.descendants.iter().filter(|d| anc.contains(d)).count();
    if overlap != 1 {
        return Err(Error::Inconsistency(format!(
            "step sets of {} share {overlap} nodes",
            step.hop_node
        )));
    }
    if step.rank > BITSET_RANK_LIMIT {
        labels.bits = None;
    }
    let bit = 1u128 << ((step.rank - 1) & 127);
    for &a in &step.ancestors {
        if a >= labels.node_count {
            return Err(Error::NodeOutOfRange {
                node: a as u64,
                count: labels.node_count,
            });
        }
        if labels.out_ranks[a as usize].last() == Some(&step.rank) {
            return Err(Error::Inconsistency(format!(
                "node {a} listed twice in step {}",
                step.rank
            )));
        }
        labels.out_ranks[a as usize].push(step.rank);
        if let Some(bits) = &mut labels.bits {
            bits.out[a as usize] |= bit;
        }
    }
    for &d in &step.descendants {
        if d >= labels.node_count {
            return Err(Error::NodeOutOfRange {
                node: d as u64,
                count: labels.node_count,
            });
        }
        if labels.in_ranks[d as usize].last() == Some(&step.rank) {
            return Err(Error::Inconsistency(format!(
                "node {d} listed twice in step {}",
                step.rank
            )));
        }
        labels.in_ranks[d as usize].push(step.rank);
        if let Some(bits) = &mut labels.bits {
            bits.inc[d as usize] |= bit;
        }
    }
    labels.hop_nodes.push(step.hop_node);
    labels.hop_rank[step.hop_node as usize] = step.rank;
    Ok(())
}

/// Admits the next hop node and updates the labels in one call.
pub fn process_hop_node(
    dag: &Dag,
    labels: &mut HopLabels,
    scratch: &mut BfsScratch,
    v: NodeId,
) -> Result<HopStep> {
    let step = collect_step(dag, labels, scratch, v)?;
    apply_step(labels, &step)?;
    Ok(step)
}

/// Builds `L^k` over the first `k` nodes of `order` (clamped to the node
/// count) and returns the label store with the per-step sets.
pub fn build_labels(dag: &Dag, order: &[NodeId], k: u32) -> Result<(HopLabels, Vec<HopStep>)> {
    let k = k.min(dag.node_count()).min(order.len() as u32);
    let mut labels = HopLabels::new(dag.node_count(), k);
    let mut scratch = BfsScratch::new(dag.node_count());
    let mut steps = Vec::with_capacity(k as usize);
    for &v in &order[..k as usize] {
        steps.push(process_hop_node(dag, &mut labels, &mut scratch, v)?);
    }
    Ok((labels, steps))
}

const SNAPSHOT_MAGIC: &[u8; 4] = b"RRL1";

/// Serializes the labels: magic, node count, k, hop nodes, then per-node out
/// and in rank lists, all little-endian u32.
pub fn save_labels<W: Write>(labels: &HopLabels, mut w: W) -> Result<()> {
    w.write_all(SNAPSHOT_MAGIC)?;
    let put = |w: &mut W, x: u32| w.write_all(&x.to_le_bytes());
    put(&mut w, labels.node_count)?;
    put(&mut w, labels.k())?;
    for &h in &labels.hop_nodes {
        put(&mut w, h)?;
    }
    for lists in [&labels.out_ranks, &labels.in_ranks] {
        for list in lists.iter() {
            put(&mut w, list.len() as u32)?;
            for &r in list {
                put(&mut w, r)?;
            }
        }
    }
    Ok(())
}

/// Loads a snapshot written by [`save_labels`], re-validating every list.
pub fn load_labels<R: Read>(mut r: R) -> Result<HopLabels> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let get = |r: &mut R| -> Result<u32> {
        let mut b = [0u8; 4];
        r.read_exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    };
    let node_count = get(&mut r)?;
    let k = get(&mut r)?;
    if k > node_count {
        return Err(Error::Snapshot(format!(
            "k = {k} exceeds node count {node_count}"
        )));
    }
    let mut hop_nodes = Vec::with_capacity(k as usize);
    for _ in 0..k {
        hop_nodes.push(get(&mut r)?);
    }
    let read_side = |r: &mut R| -> Result<Vec<Vec<Rank>>> {
        let mut side = Vec::with_capacity(node_count as usize);
        for _ in 0..node_count {
            let len = get(r)?;
            if len as u64 > k as u64 {
                return Err(Error::Snapshot(format!("label of length {len} with k = {k}")));
            }
            let mut list = Vec::with_capacity(len as usize);
            for _ in 0..len {
                list.push(get(r)?);
            }
            side.push(list);
        }
        Ok(side)
    };
    let out_ranks = read_side(&mut r)?;
    let in_ranks = read_side(&mut r)?;
    HopLabels::from_rank_lists(node_count, hop_nodes, out_ranks, in_ranks)
        .map_err(|e| Error::Snapshot(e.to_string()))
}
