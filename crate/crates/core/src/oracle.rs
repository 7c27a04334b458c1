//! Brute-force ground truth: pairwise reachability, transitive-closure size,
//! exhaustive coverage counting and partition verification.
//!
//! Everything here is deliberately simple (per-node BFS, full pair
//! enumeration) and serves as the reference the counting engines are checked
//! against. The per-node sweeps of [`tc_size`] may be spread over worker
//! threads (capped by `REACH_RATIO_THREADS`); results are concatenated in
//! node order, so the outcome is bit-identical to a sequential run.

use serde::Serialize;

use crate::error::Result;
use crate::graph::{Dag, NodeId};
use crate::labels::HopLabels;
use crate::workers;

/// Per-node and total transitive-closure sizes. Self pairs are excluded:
/// `per_node_reach[u] = |out*(u)| - 1`.
#[derive(Debug, Clone, Serialize)]
pub struct TcSummary {
    pub per_node_reach: Vec<u32>,
    pub total: u64,
}

impl TcSummary {
    /// Mean `|TC(u)|` over all nodes; zero for the empty graph.
    pub fn avg_reach(&self) -> f64 {
        if self.per_node_reach.is_empty() {
            0.0
        } else {
            self.total as f64 / self.per_node_reach.len() as f64
        }
    }
}

/// Whether `v` is in `out*(u)`; `reach(u, u)` is true by definition.
pub fn reach(d: &Dag, u: NodeId, v: NodeId) -> Result<bool> {
    d.check_node(u)?;
    d.check_node(v)?;
    if u == v {
        return Ok(true);
    }
    let mut visited = vec![false; d.node_count() as usize];
    let mut queue = std::collections::VecDeque::new();
    visited[u as usize] = true;
    queue.push_back(u);
    while let Some(w) = queue.pop_front() {
        for &x in d.successors(w) {
            if x == v {
                return Ok(true);
            }
            if !visited[x as usize] {
                visited[x as usize] = true;
                queue.push_back(x);
            }
        }
    }
    Ok(false)
}

/// Transitive-closure size by forward BFS from every node.
pub fn tc_size(d: &Dag) -> TcSummary {
    let n = d.node_count();
    let ranges = workers::split(n);
    let sweep = |range: std::ops::Range<u32>| -> Vec<u32> {
        let mut visited = vec![0u32; n as usize];
        let mut epoch = 0u32;
        let mut queue = std::collections::VecDeque::new();
        let mut out = Vec::with_capacity(range.len());
        for u in range {
            epoch += 1;
            let mut count = 0u32;
            visited[u as usize] = epoch;
            queue.clear();
            queue.push_back(u);
            while let Some(w) = queue.pop_front() {
                for &x in d.successors(w) {
                    if visited[x as usize] != epoch {
                        visited[x as usize] = epoch;
                        count += 1;
                        queue.push_back(x);
                    }
                }
            }
            out.push(count);
        }
        out
    };
    let per_node_reach = workers::map_ranges(ranges, sweep);
    let total = per_node_reach.iter().map(|&c| c as u64).sum();
    TcSummary {
        per_node_reach,
        total,
    }
}

/// Exact number of ordered pairs `(a, d)`, `a != d`, answerable by the
/// labels, counted by exhaustive enumeration over all node pairs.
///
/// Enumerating `V x V` rather than the engines' ancestor/descendant unions
/// keeps this an independent check on their set construction.
pub fn coverage_count(d: &Dag, labels: &HopLabels) -> u64 {
    let n = d.node_count();
    let mut count = 0u64;
    for a in 0..n {
        if labels.out_label(a).is_empty() {
            continue;
        }
        for b in 0..n {
            if a != b && labels.covered(a, b) {
                count += 1;
            }
        }
    }
    count
}

/// Which label side a partition claims to be homogeneous on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Classes of equal out labels.
    Forward,
    /// Classes of equal in labels.
    Backward,
}

/// Checks that `classes` is exactly the equivalence partition of `subset`
/// under label equality on the given side: classes must be disjoint, cover
/// the subset, be label-homogeneous, and no two classes may share a label
/// (otherwise they should have been merged).
pub fn verify_partition(
    labels: &HopLabels,
    subset: &[NodeId],
    side: Side,
    classes: &[Vec<NodeId>],
) -> bool {
    let label_of = |v: NodeId| match side {
        Side::Forward => labels.out_label(v),
        Side::Backward => labels.in_label(v),
    };

    let mut members: Vec<NodeId> = classes.iter().flatten().copied().collect();
    members.sort_unstable();
    if members.windows(2).any(|w| w[0] == w[1]) {
        return false; // overlap between classes
    }
    let mut expected: Vec<NodeId> = subset.to_vec();
    expected.sort_unstable();
    expected.dedup();
    if members != expected {
        return false; // not a cover of the subset
    }

    let mut signatures: Vec<&[crate::labels::Rank]> = Vec::with_capacity(classes.len());
    for class in classes {
        let first = match class.first() {
            Some(&v) => v,
            None => return false, // empty class
        };
        let sig = label_of(first);
        if class.iter().any(|&v| label_of(v) != sig) {
            return false; // class not homogeneous
        }
        signatures.push(sig);
    }
    signatures.sort_unstable();
    signatures.windows(2).all(|w| w[0] != w[1]) // mergeable classes remain?
}

#[cfg(test)]
mod tests;
