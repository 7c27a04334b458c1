//! The three reachability-ratio engines over one shared counting core.
//!
//! All engines consume a [`StepSource`]: a supplier of per-hop-node ancestor
//! and descendant sets. [`TraversalSource`] runs the pruned BFS against the
//! evolving labels; [`ReplaySource`] feeds pre-recorded sets, which lets the
//! counting core run from recorded step data without any graph edges.
//!
//! Per step the ordering is strict: (1) obtain the sets, (2) count against
//! the labels of the previous step, (3) report, (4) apply the label update.
//! The baseline engine skips (2) entirely and counts once at the end over
//! the accumulated set unions.

mod partition;
mod report;

pub use partition::{lambda_partitioned, partition_step, ClassEntry, ClassMap, PartitionState};
pub use report::{write_csv, write_csv_header, write_csv_rows};

use std::ops::ControlFlow;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dag, NodeId};
use crate::labels::{apply_step, collect_step, BfsScratch, HopLabels, HopStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Algorithm {
    #[serde(rename = "blRR")]
    Baseline,
    #[serde(rename = "incRR")]
    Incremental,
    #[serde(rename = "incRR+")]
    IncrementalPartition,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::Baseline => "blRR",
            Algorithm::Incremental => "incRR",
            Algorithm::IncrementalPartition => "incRR+",
        })
    }
}

/// Label representation for an engine run. `Auto` mirrors labels into
/// fixed-width bitsets while the hop-node count allows it; `SortedLists`
/// pins the run to the merge-scan path so the two representations' timings
/// can be compared on the same work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelRepr {
    #[default]
    Auto,
    SortedLists,
}

fn new_labels(node_count: u32, planned_k: u32, repr: LabelRepr) -> HopLabels {
    match repr {
        LabelRepr::Auto => HopLabels::new(node_count, planned_k),
        LabelRepr::SortedLists => HopLabels::new_list_only(node_count),
    }
}

/// Coverage gained by one hop node: `|A_i| * |D_i| - 1 - lambda`.
///
/// The `- 1` removes the hop node's own self pair, the only element of
/// `A_i x D_i` with equal endpoints in a DAG. `lambda` must leave the
/// result non-negative; anything else is a counting bug upstream.
pub fn step_increment(a_size: u64, d_size: u64, lambda: u64) -> Result<u64> {
    let pairs = a_size
        .checked_mul(d_size)
        .filter(|&p| p >= 1)
        .ok_or_else(|| {
            Error::Inconsistency(format!("step increment over degenerate sets {a_size}x{d_size}"))
        })?;
    if lambda > pairs - 1 {
        return Err(Error::Inconsistency(format!(
            "lambda {lambda} exceeds |A||D| - 1 = {}",
            pairs - 1
        )));
    }
    Ok(pairs - 1 - lambda)
}

/// Counts pairs `(a, d)`, `a != d`, already answerable by `labels_prev`, by
/// testing every pair. Returns `(lambda, tested)`; the tested counter is the
/// full product `|A| * |D|`.
pub fn lambda_pairwise(
    labels_prev: &HopLabels,
    ancestors: &[NodeId],
    descendants: &[NodeId],
) -> (u64, u64) {
    let mut lambda = 0u64;
    for &a in ancestors {
        for &d in descendants {
            if a != d && labels_prev.covered(a, d) {
                lambda += 1;
            }
        }
    }
    (lambda, ancestors.len() as u64 * descendants.len() as u64)
}

/// Supplies hop steps to an engine, one per call, in rank order.
pub trait StepSource {
    fn node_count(&self) -> u32;

    /// Produces the next step's sets, or `None` when exhausted. `labels`
    /// holds `L^(i-1)` and drives pruning for traversal-backed sources.
    fn next_step(&mut self, labels: &HopLabels) -> Result<Option<HopStep>>;
}

/// Pruned-BFS step supply over a DAG and a hop-node order.
pub struct TraversalSource<'a> {
    dag: &'a Dag,
    order: &'a [NodeId],
    next: usize,
    scratch: BfsScratch,
}

impl<'a> TraversalSource<'a> {
    pub fn new(dag: &'a Dag, order: &'a [NodeId]) -> Self {
        Self {
            dag,
            order,
            next: 0,
            scratch: BfsScratch::new(dag.node_count()),
        }
    }
}

impl StepSource for TraversalSource<'_> {
    fn node_count(&self) -> u32 {
        self.dag.node_count()
    }

    fn next_step(&mut self, labels: &HopLabels) -> Result<Option<HopStep>> {
        let Some(&v) = self.order.get(self.next) else {
            return Ok(None);
        };
        self.next += 1;
        collect_step(self.dag, labels, &mut self.scratch, v).map(Some)
    }
}

/// Replays pre-recorded steps; the labels are rebuilt from the sets alone.
pub struct ReplaySource {
    node_count: u32,
    steps: std::vec::IntoIter<HopStep>,
}

impl ReplaySource {
    pub fn new(node_count: u32, steps: Vec<HopStep>) -> Self {
        Self {
            node_count,
            steps: steps.into_iter(),
        }
    }
}

impl StepSource for ReplaySource {
    fn node_count(&self) -> u32 {
        self.node_count
    }

    fn next_step(&mut self, _labels: &HopLabels) -> Result<Option<HopStep>> {
        Ok(self.steps.next())
    }
}

/// Per-step facts reported by the engines.
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    /// Rank of the step's hop node.
    pub i: u32,
    pub hop_node: NodeId,
    pub a_size: u64,
    pub d_size: u64,
    /// Newly covered pairs attributed to this step.
    pub n_i: u64,
    /// Pairs already answerable by the previous labels.
    pub lambda: u64,
    /// Label tests charged to this step.
    pub tested: u64,
    /// Ancestor-side classes (incremental-partition only).
    pub classes_a: u64,
    /// Descendant-side classes (incremental-partition only).
    pub classes_d: u64,
    /// Cumulative coverage `N_i`.
    pub n_cum: u64,
    /// `N_i / TC(G)`.
    pub alpha: f64,
    pub step1_ms: f64,
    pub step2_ms: f64,
}

/// Final outcome of one engine run.
#[derive(Debug, Clone, Serialize)]
pub struct RRReport {
    pub algorithm: Algorithm,
    /// Hop nodes actually processed.
    pub k: u32,
    pub tc_total: u64,
    /// Covered reachable pairs `N_k`.
    pub coverage: u64,
    /// Reachability ratio `N_k / TC(G)`; 0 when the closure is empty.
    pub alpha: f64,
    /// Total label tests across all steps.
    pub tested_total: u64,
    /// Size of the accumulated ancestor-set union (baseline only).
    pub a_union_size: u64,
    /// Size of the accumulated descendant-set union (baseline only).
    pub d_union_size: u64,
    pub index_size: u64,
    pub step1_ms: f64,
    pub step2_ms: f64,
    pub steps: Vec<StepRecord>,
}

fn ratio(coverage: u64, tc_total: u64) -> f64 {
    if tc_total == 0 {
        0.0
    } else {
        coverage as f64 / tc_total as f64
    }
}

fn ms(from: Instant) -> f64 {
    from.elapsed().as_secs_f64() * 1e3
}

/// Baseline: build `L^k`, keep only the running unions of the ancestor and
/// descendant sets, then count covered pairs over the union product with
/// the finished labels.
pub fn blrr<S: StepSource>(source: &mut S, k: u32, tc_total: u64) -> Result<RRReport> {
    blrr_with_repr(source, k, tc_total, LabelRepr::Auto)
}

/// [`blrr`] with an explicit label representation.
pub fn blrr_with_repr<S: StepSource>(
    source: &mut S,
    k: u32,
    tc_total: u64,
    repr: LabelRepr,
) -> Result<RRReport> {
    let n = source.node_count();
    let k = k.min(n);
    let mut labels = new_labels(n, k, repr);
    let mut in_a = vec![false; n as usize];
    let mut in_d = vec![false; n as usize];
    let mut a_union: Vec<NodeId> = Vec::new();
    let mut d_union: Vec<NodeId> = Vec::new();
    let mut steps = Vec::new();
    let mut step1_total = 0.0;

    for i in 1..=k {
        let t0 = Instant::now();
        let Some(step) = source.next_step(&labels)? else {
            break;
        };
        apply_step(&mut labels, &step)?;
        for &a in &step.ancestors {
            if !in_a[a as usize] {
                in_a[a as usize] = true;
                a_union.push(a);
            }
        }
        for &d in &step.descendants {
            if !in_d[d as usize] {
                in_d[d as usize] = true;
                d_union.push(d);
            }
        }
        let step1_ms = ms(t0);
        step1_total += step1_ms;
        steps.push(StepRecord {
            i,
            hop_node: step.hop_node,
            a_size: step.ancestors.len() as u64,
            d_size: step.descendants.len() as u64,
            n_i: 0,
            lambda: 0,
            tested: 0,
            classes_a: 0,
            classes_d: 0,
            n_cum: 0,
            alpha: 0.0,
            step1_ms,
            step2_ms: 0.0,
        });
    }

    let t1 = Instant::now();
    let mut coverage = 0u64;
    for &a in &a_union {
        for &d in &d_union {
            if a != d && labels.covered(a, d) {
                coverage += 1;
            }
        }
    }
    let step2_total = ms(t1);
    let tested_total = a_union.len() as u64 * d_union.len() as u64;
    let alpha = ratio(coverage, tc_total);
    if let Some(last) = steps.last_mut() {
        last.n_cum = coverage;
        last.alpha = alpha;
        last.tested = tested_total;
        last.step2_ms = step2_total;
    }
    Ok(RRReport {
        algorithm: Algorithm::Baseline,
        k: steps.len() as u32,
        tc_total,
        coverage,
        alpha,
        tested_total,
        a_union_size: a_union.len() as u64,
        d_union_size: d_union.len() as u64,
        index_size: labels.index_size(),
        step1_ms: step1_total,
        step2_ms: step2_total,
        steps,
    })
}

/// Incremental: attribute `n_i = |A_i||D_i| - 1 - lambda_i` to each step,
/// with `lambda_i` from pairwise tests against `L^(i-1)`. The first step
/// needs no tests at all. `on_step` sees each record before the label
/// update and may stop the sweep early.
pub fn incrr<S, F>(source: &mut S, k: u32, tc_total: u64, on_step: F) -> Result<RRReport>
where
    S: StepSource,
    F: FnMut(&StepRecord) -> ControlFlow<()>,
{
    run_incremental(source, k, tc_total, on_step, Algorithm::Incremental, LabelRepr::Auto)
}

/// Incremental-partition: like [`incrr`], but `lambda_i` comes from one
/// label test per equivalence-class pair, scaled by the class sizes.
pub fn incrr_plus<S, F>(source: &mut S, k: u32, tc_total: u64, on_step: F) -> Result<RRReport>
where
    S: StepSource,
    F: FnMut(&StepRecord) -> ControlFlow<()>,
{
    run_incremental(
        source,
        k,
        tc_total,
        on_step,
        Algorithm::IncrementalPartition,
        LabelRepr::Auto,
    )
}

fn run_incremental<S, F>(
    source: &mut S,
    k: u32,
    tc_total: u64,
    mut on_step: F,
    algorithm: Algorithm,
    repr: LabelRepr,
) -> Result<RRReport>
where
    S: StepSource,
    F: FnMut(&StepRecord) -> ControlFlow<()>,
{
    let n = source.node_count();
    let k = k.min(n);
    let mut labels = new_labels(n, k, repr);
    let mut partitions = match algorithm {
        Algorithm::IncrementalPartition => Some(PartitionState::new(n)),
        _ => None,
    };
    let mut steps: Vec<StepRecord> = Vec::new();
    let mut n_cum = 0u64;
    let mut tested_total = 0u64;
    let mut step1_total = 0.0;
    let mut step2_total = 0.0;

    for i in 1..=k {
        let t0 = Instant::now();
        let Some(step) = source.next_step(&labels)? else {
            break;
        };
        let collect_ms = ms(t0);

        // Partition bookkeeping runs every step (the global partitions must
        // refine even when no test is needed); it is billed to step 1
        // alongside the BFS, matching its linear cost.
        let t1 = Instant::now();
        let maps = partitions
            .as_mut()
            .map(|state| partition_step(state, &step.ancestors, &step.descendants));
        let partition_ms = ms(t1);

        let t2 = Instant::now();
        let (lambda, tested, classes_a, classes_d) = if i == 1 {
            let c = maps.as_ref().map_or((0, 0), |(a, d)| (a.len() as u64, d.len() as u64));
            (0, 0, c.0, c.1)
        } else {
            match &maps {
                Some((h_anc, h_desc)) => {
                    let (lambda, tested) = lambda_partitioned(&labels, h_anc, h_desc);
                    (lambda, tested, h_anc.len() as u64, h_desc.len() as u64)
                }
                None => {
                    let (lambda, tested) =
                        lambda_pairwise(&labels, &step.ancestors, &step.descendants);
                    (lambda, tested, 0, 0)
                }
            }
        };
        let n_i = step_increment(step.ancestors.len() as u64, step.descendants.len() as u64, lambda)?;
        n_cum += n_i;
        tested_total += tested;
        let step2_ms = ms(t2);
        step2_total += step2_ms;

        let record = StepRecord {
            i,
            hop_node: step.hop_node,
            a_size: step.ancestors.len() as u64,
            d_size: step.descendants.len() as u64,
            n_i,
            lambda,
            tested,
            classes_a,
            classes_d,
            n_cum,
            alpha: ratio(n_cum, tc_total),
            step1_ms: collect_ms + partition_ms,
            step2_ms,
        };
        let control = on_step(&record);
        steps.push(record);

        let t3 = Instant::now();
        apply_step(&mut labels, &step)?;
        let apply_ms = ms(t3);
        step1_total += collect_ms + partition_ms + apply_ms;
        if let Some(last) = steps.last_mut() {
            last.step1_ms += apply_ms;
        }
        if control.is_break() {
            break;
        }
    }

    Ok(RRReport {
        algorithm,
        k: steps.len() as u32,
        tc_total,
        coverage: n_cum,
        alpha: ratio(n_cum, tc_total),
        tested_total,
        a_union_size: 0,
        d_union_size: 0,
        index_size: labels.index_size(),
        step1_ms: step1_total,
        step2_ms: step2_total,
        steps,
    })
}

/// Runs one engine over a DAG with the given hop-node order.
pub fn run_algorithm(
    dag: &Dag,
    order: &[NodeId],
    algorithm: Algorithm,
    k: u32,
    tc_total: u64,
    alpha_stop: Option<f64>,
) -> Result<RRReport> {
    run_algorithm_with_repr(dag, order, algorithm, k, tc_total, alpha_stop, LabelRepr::Auto)
}

/// [`run_algorithm`] with an explicit label representation.
#[allow(clippy::too_many_arguments)]
pub fn run_algorithm_with_repr(
    dag: &Dag,
    order: &[NodeId],
    algorithm: Algorithm,
    k: u32,
    tc_total: u64,
    alpha_stop: Option<f64>,
    repr: LabelRepr,
) -> Result<RRReport> {
    let mut source = TraversalSource::new(dag, order);
    let stop = |record: &StepRecord| -> ControlFlow<()> {
        match alpha_stop {
            Some(t) if record.alpha >= t => ControlFlow::Break(()),
            _ => ControlFlow::Continue(()),
        }
    };
    match algorithm {
        Algorithm::Baseline => blrr_with_repr(&mut source, k, tc_total, repr),
        Algorithm::Incremental => {
            run_incremental(&mut source, k, tc_total, stop, Algorithm::Incremental, repr)
        }
        Algorithm::IncrementalPartition => run_incremental(
            &mut source,
            k,
            tc_total,
            stop,
            Algorithm::IncrementalPartition,
            repr,
        ),
    }
}
