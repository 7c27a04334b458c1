//! Equivalence-class bookkeeping for the incremental-partition engine.
//!
//! Every node carries two set ids: nodes share `id_anc` exactly when their
//! out labels are equal, and `id_desc` exactly when their in labels are
//! equal. Both start at 0 (all labels empty, one global class per side).
//! When a hop step admits its ancestor and descendant sets, each set is
//! grouped by the members' current ids — which, by construction, equals
//! grouping by the full label — and every class receives a fresh id drawn
//! from a per-side counter that is never reset, so an id is never reused
//! across steps and the global partitions only ever refine.

use std::collections::HashMap;

use crate::graph::NodeId;
use crate::labels::HopLabels;

/// Per-node set ids plus the two fresh-id counters.
#[derive(Debug, Clone)]
pub struct PartitionState {
    id_anc: Vec<u64>,
    id_desc: Vec<u64>,
    next_anc_id: u64,
    next_desc_id: u64,
}

impl PartitionState {
    pub fn new(node_count: u32) -> Self {
        Self {
            id_anc: vec![0; node_count as usize],
            id_desc: vec![0; node_count as usize],
            next_anc_id: 0,
            next_desc_id: 0,
        }
    }

    /// Current forward-equivalence set id of `v`.
    pub fn id_anc(&self, v: NodeId) -> u64 {
        self.id_anc[v as usize]
    }

    /// Current backward-equivalence set id of `v`.
    pub fn id_desc(&self, v: NodeId) -> u64 {
        self.id_desc[v as usize]
    }
}

/// One equivalence class inside a step's ancestor or descendant set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEntry {
    /// The members' set id before this step.
    pub old_id: u64,
    /// The fresh set id now shared by all members.
    pub new_id: u64,
    /// First member encountered in scan order; stands in for the whole
    /// class in label tests.
    pub representative: NodeId,
    pub size: u64,
}

/// The classes of one step set, in first-encounter order.
#[derive(Debug, Clone, Default)]
pub struct ClassMap {
    pub entries: Vec<ClassEntry>,
}

impl ClassMap {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_size(&self) -> u64 {
        self.entries.iter().map(|e| e.size).sum()
    }

    /// Expands the map back into explicit member lists, in entry order.
    /// Members are matched through the rewritten ids in `lookup`.
    pub fn materialize(&self, members: &[NodeId], lookup: impl Fn(NodeId) -> u64) -> Vec<Vec<NodeId>> {
        self.entries
            .iter()
            .map(|e| {
                members
                    .iter()
                    .copied()
                    .filter(|&v| lookup(v) == e.new_id)
                    .collect()
            })
            .collect()
    }
}

fn group(members: &[NodeId], ids: &mut [u64], next_id: &mut u64) -> ClassMap {
    let mut index: HashMap<u64, usize> = HashMap::with_capacity(members.len().min(16));
    let mut entries: Vec<ClassEntry> = Vec::new();
    for &v in members {
        let old = ids[v as usize];
        let slot = *index.entry(old).or_insert_with(|| {
            *next_id += 1;
            entries.push(ClassEntry {
                old_id: old,
                new_id: *next_id,
                representative: v,
                size: 0,
            });
            entries.len() - 1
        });
        entries[slot].size += 1;
        ids[v as usize] = entries[slot].new_id;
    }
    ClassMap { entries }
}

/// Groups a step's ancestor set by `id_anc` and its descendant set by
/// `id_desc`, rewriting every member's id to its class's fresh id.
/// Linear in `|ancestors| + |descendants|`.
pub fn partition_step(
    state: &mut PartitionState,
    ancestors: &[NodeId],
    descendants: &[NodeId],
) -> (ClassMap, ClassMap) {
    let h_anc = group(ancestors, &mut state.id_anc, &mut state.next_anc_id);
    let h_desc = group(descendants, &mut state.id_desc, &mut state.next_desc_id);
    debug_assert_eq!(h_anc.total_size(), ancestors.len() as u64);
    debug_assert_eq!(h_desc.total_size(), descendants.len() as u64);
    (h_anc, h_desc)
}

/// Counts the pairs already answerable by `labels_prev` with one label test
/// per class pair: a covered representative pair accounts for
/// `|class_a| * |class_d|` covered pairs. Returns `(lambda, tested)` where
/// `tested` is the number of class pairs.
pub fn lambda_partitioned(
    labels_prev: &HopLabels,
    h_anc: &ClassMap,
    h_desc: &ClassMap,
) -> (u64, u64) {
    let mut lambda = 0u64;
    for a in &h_anc.entries {
        for d in &h_desc.entries {
            if labels_prev.covered(a.representative, d.representative) {
                lambda += a.size * d.size;
            }
        }
    }
    let tested = h_anc.entries.len() as u64 * h_desc.entries.len() as u64;
    (lambda, tested)
}
