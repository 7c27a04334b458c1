//! Command implementations behind the `reach-ratio` binary.
//!
//! Data goes to standard output or the requested files; progress and timing
//! notes go to standard error. With a fixed configuration and seed every
//! output file is byte-identical across runs; wall-clock columns are
//! zeroed unless `--timings` asks for them.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use reach_ratio::bench;
use reach_ratio::engine::{self, Algorithm, LabelRepr, RRReport, StepRecord};
use reach_ratio::graph::{self, Dag, GraphFormat};
use reach_ratio::labels;
use reach_ratio::oracle;
use reach_ratio::{Error, Result};

/// Largest graph for which the transitive-closure size is computed by the
/// oracle when no explicit value is supplied.
pub const TC_ORACLE_NODE_LIMIT: u32 = 200_000;

/// Process exit code for an error: correctness failures are distinguished
/// from usage and I/O problems.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Correctness(_) | Error::Inconsistency(_) => 1,
        _ => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatChoice {
    Auto,
    EdgeList,
    Gra,
}

impl FormatChoice {
    fn resolve(self, path: &Path) -> GraphFormat {
        match self {
            FormatChoice::EdgeList => GraphFormat::EdgeList,
            FormatChoice::Gra => GraphFormat::Gra,
            FormatChoice::Auto => match path.extension().and_then(|e| e.to_str()) {
                Some("gra") => GraphFormat::Gra,
                _ => GraphFormat::EdgeList,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgoChoice {
    Baseline,
    Incremental,
    IncrementalPartition,
    All,
}

impl AlgoChoice {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgoChoice::Baseline => vec![Algorithm::Baseline],
            AlgoChoice::Incremental => vec![Algorithm::Incremental],
            AlgoChoice::IncrementalPartition => vec![Algorithm::IncrementalPartition],
            AlgoChoice::All => vec![
                Algorithm::Baseline,
                Algorithm::Incremental,
                Algorithm::IncrementalPartition,
            ],
        }
    }
}

/// Where the total transitive-closure size comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TcSource {
    Oracle,
    Value(u64),
    File(PathBuf),
}

/// Configuration of the `rr` command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: FormatChoice,
    pub algo: AlgoChoice,
    /// Explicit k values; empty means "use the doubling sweep".
    pub k_list: Vec<u32>,
    /// Upper bound of the doubling sweep 1, 2, 4, ... when `k_list` is empty.
    pub k_doubling: Option<u32>,
    pub tc_source: TcSource,
    pub alpha_stop: Option<f64>,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
    pub out_table: Option<PathBuf>,
    pub save_labels: Option<PathBuf>,
    pub timings: bool,
    /// Pin the engines to the sorted-list label representation (for timing
    /// comparisons against the default bitset mirror).
    pub list_repr: bool,
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    algorithm: Algorithm,
    k: u32,
    coverage: u64,
    alpha: f64,
    isr: f64,
    tested: u64,
    step1_ms: f64,
    step2_ms: f64,
}

#[derive(Debug, Serialize)]
struct RrSummary {
    input: String,
    node_count: u32,
    edge_count: u64,
    tc_total: u64,
    index_size_full: u64,
    rows: Vec<SummaryRow>,
}

fn open_input(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn load_dag(path: &Path, format: FormatChoice) -> Result<Dag> {
    let fmt = format.resolve(path);
    let g = graph::parse_edge_list(open_input(path)?, fmt)?;
    if g.dropped_duplicates() > 0 || g.dropped_self_loops() > 0 {
        eprintln!(
            "normalized input: dropped {} duplicate edge(s), {} self loop(s)",
            g.dropped_duplicates(),
            g.dropped_self_loops()
        );
    }
    let d = graph::condense(&g);
    eprintln!(
        "parsed {} nodes / {} edges; condensed DAG: {} nodes / {} edges",
        g.node_count(),
        g.edge_count(),
        d.node_count(),
        d.edge_count()
    );
    Ok(d)
}

fn resolve_tc(d: &Dag, source: &TcSource) -> Result<u64> {
    match source {
        TcSource::Value(v) => Ok(*v),
        TcSource::File(path) => {
            let mut text = String::new();
            File::open(path)?.read_to_string(&mut text)?;
            text.trim().parse::<u64>().map_err(|_| {
                Error::Usage(format!("tc file {} does not hold an integer", path.display()))
            })
        }
        TcSource::Oracle => {
            if d.node_count() > TC_ORACLE_NODE_LIMIT {
                return Err(Error::Usage(format!(
                    "graph has {} nodes; pass --tc or --tc-file instead of the oracle \
                     (limit {TC_ORACLE_NODE_LIMIT})",
                    d.node_count()
                )));
            }
            let t0 = std::time::Instant::now();
            let tc = oracle::tc_size(d);
            let stats = graph::compute_stats(d).with_avg_reach(&tc);
            eprintln!(
                "oracle TC size: {} ({:.1} ms); avg degree {:.2}, {} topo levels, avg reach {:.1}",
                tc.total,
                t0.elapsed().as_secs_f64() * 1e3,
                stats.avg_degree,
                stats.topo_levels,
                stats.avg_reach.unwrap_or(0.0)
            );
            Ok(tc.total)
        }
    }
}

fn resolve_k_list(config: &RunConfig, node_count: u32) -> Result<Vec<u32>> {
    let mut ks = if !config.k_list.is_empty() {
        config.k_list.clone()
    } else {
        // Doubling sweep 1, 2, 4, ... ending at the bound itself.
        let max = config.k_doubling.unwrap_or(node_count).min(node_count);
        let mut ks = Vec::new();
        let mut k = 1u32;
        while k < max {
            ks.push(k);
            k = k.saturating_mul(2);
        }
        if max > 0 {
            ks.push(max);
        }
        ks
    };
    ks.sort_unstable();
    ks.dedup();
    for k in ks.iter_mut() {
        *k = (*k).min(node_count);
    }
    ks.dedup();
    if ks.is_empty() {
        return Err(Error::Usage("no k values to compute".into()));
    }
    Ok(ks)
}

fn zero_timings(report: &mut RRReport) {
    report.step1_ms = 0.0;
    report.step2_ms = 0.0;
    for s in &mut report.steps {
        s.step1_ms = 0.0;
        s.step2_ms = 0.0;
    }
}

/// Cumulative index size after each step (the label entries added by step i
/// are exactly `|A_i| + |D_i|`).
fn cumulative_index_sizes(steps: &[StepRecord]) -> Vec<u64> {
    let mut acc = 0u64;
    steps
        .iter()
        .map(|s| {
            acc += s.a_size + s.d_size;
            acc
        })
        .collect()
}

/// Runs the `rr` command: ranks the DAG, sweeps the requested k values with
/// the selected engines and writes the per-step CSV, summary JSON and
/// RR/ISR table.
pub fn cmd_rr(config: &RunConfig) -> Result<()> {
    if let Some(a) = config.alpha_stop {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::Usage(format!(
                "--alpha-stop must lie in (0, 1], got {a}"
            )));
        }
    }
    let dag = load_dag(&config.input, config.format)?;
    let ranked = graph::rank_nodes(&dag);
    let tc_total = resolve_tc(&dag, &config.tc_source)?;
    let k_list = resolve_k_list(config, dag.node_count())?;
    let k_max = *k_list.last().expect("k list is non-empty");
    // k = 0 is a degenerate but valid request: nothing is covered.
    let has_zero = k_list[0] == 0;
    let engine_ks: Vec<u32> = k_list.iter().copied().filter(|&k| k > 0).collect();

    // Full labels for the index-size-ratio denominator.
    let t0 = std::time::Instant::now();
    let (full_labels, _) = labels::build_labels(&dag, &ranked.order, dag.node_count())?;
    let index_size_full = full_labels.index_size();
    eprintln!(
        "full index: {} entries ({:.1} ms)",
        index_size_full,
        t0.elapsed().as_secs_f64() * 1e3
    );
    drop(full_labels);

    let repr = if config.list_repr {
        LabelRepr::SortedLists
    } else {
        LabelRepr::Auto
    };
    let mut reports: Vec<RRReport> = Vec::new();
    let mut rows: Vec<SummaryRow> = Vec::new();
    for algorithm in config.algo.algorithms() {
        if has_zero {
            rows.push(SummaryRow {
                algorithm,
                k: 0,
                coverage: 0,
                alpha: 0.0,
                isr: ratio_or_one(0, index_size_full),
                tested: 0,
                step1_ms: 0.0,
                step2_ms: 0.0,
            });
        }
        if engine_ks.is_empty() {
            continue;
        }
        match algorithm {
            Algorithm::Baseline => {
                // The baseline recounts from scratch for every k.
                for &k in &engine_ks {
                    let report = engine::run_algorithm_with_repr(
                        &dag,
                        &ranked.order,
                        algorithm,
                        k,
                        tc_total,
                        None,
                        repr,
                    )?;
                    rows.push(SummaryRow {
                        algorithm,
                        k: report.k,
                        coverage: report.coverage,
                        alpha: report.alpha,
                        isr: ratio_or_one(report.index_size, index_size_full),
                        tested: report.tested_total,
                        step1_ms: report.step1_ms,
                        step2_ms: report.step2_ms,
                    });
                    reports.push(report);
                }
            }
            Algorithm::Incremental | Algorithm::IncrementalPartition => {
                // One ascending pass covers every requested k.
                let report = engine::run_algorithm_with_repr(
                    &dag,
                    &ranked.order,
                    algorithm,
                    k_max,
                    tc_total,
                    config.alpha_stop,
                    repr,
                )?;
                let sizes = cumulative_index_sizes(&report.steps);
                let mut tested_cum = 0u64;
                let mut step1_cum = 0.0;
                let mut step2_cum = 0.0;
                let mut at = engine_ks.iter().peekable();
                for (idx, s) in report.steps.iter().enumerate() {
                    tested_cum += s.tested;
                    step1_cum += s.step1_ms;
                    step2_cum += s.step2_ms;
                    if at.peek() == Some(&&s.i) {
                        at.next();
                        rows.push(SummaryRow {
                            algorithm,
                            k: s.i,
                            coverage: s.n_cum,
                            alpha: s.alpha,
                            isr: ratio_or_one(sizes[idx], index_size_full),
                            tested: tested_cum,
                            step1_ms: step1_cum,
                            step2_ms: step2_cum,
                        });
                    }
                }
                if report.k < k_max {
                    eprintln!(
                        "{algorithm}: stopped early at k = {} (alpha {:.4})",
                        report.k, report.alpha
                    );
                }
                reports.push(report);
            }
        }
    }

    // With every engine selected, their counts must agree at every k.
    if config.algo == AlgoChoice::All {
        for &k in &k_list {
            let counts: Vec<u64> = rows
                .iter()
                .filter(|r| r.k == k)
                .map(|r| r.coverage)
                .collect();
            if counts.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Correctness(format!(
                    "engines disagree at k = {k}: {counts:?}"
                )));
            }
        }
    }

    if !config.timings {
        for report in &mut reports {
            zero_timings(report);
        }
        for row in &mut rows {
            row.step1_ms = 0.0;
            row.step2_ms = 0.0;
        }
    }
    rows.sort_by_key(|r| (r.k, algo_order(r.algorithm)));

    if let Some(path) = &config.out_csv {
        let mut w = BufWriter::new(File::create(path)?);
        engine::write_csv_header(&mut w)?;
        for report in &reports {
            engine::write_csv_rows(report, &mut w)?;
        }
    }

    if let Some(path) = &config.out_table {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "# k rr isr")?;
        for &k in &k_list {
            if let Some(row) = rows.iter().find(|r| r.k == k) {
                writeln!(w, "{} {:.6} {:.6}", k, row.alpha, row.isr)?;
            }
        }
    }

    let summary = RrSummary {
        input: config.input.display().to_string(),
        node_count: dag.node_count(),
        edge_count: dag.edge_count() as u64,
        tc_total,
        index_size_full,
        rows,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    match &config.out_json {
        Some(path) => {
            writeln!(BufWriter::new(File::create(path)?), "{json}")?;
        }
        None => println!("{json}"),
    }

    if let Some(path) = &config.save_labels {
        let (snapshot, _) = labels::build_labels(&dag, &ranked.order, k_max)?;
        labels::save_labels(&snapshot, &mut BufWriter::new(File::create(path)?))?;
        eprintln!("labels at k = {k_max} saved to {}", path.display());
    }
    Ok(())
}

fn ratio_or_one(partial: u64, full: u64) -> f64 {
    if full == 0 {
        1.0
    } else {
        partial as f64 / full as f64
    }
}

fn algo_order(a: Algorithm) -> u8 {
    match a {
        Algorithm::Baseline => 0,
        Algorithm::Incremental => 1,
        Algorithm::IncrementalPartition => 2,
    }
}

/// `tc-size`: prints the total to standard output; optionally writes the
/// per-node counts as CSV.
pub fn cmd_tc(input: &Path, format: FormatChoice, per_node: Option<&Path>) -> Result<()> {
    let dag = load_dag(input, format)?;
    let tc = oracle::tc_size(&dag);
    if let Some(path) = per_node {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "node,reach")?;
        for (v, c) in tc.per_node_reach.iter().enumerate() {
            writeln!(w, "{v},{c}")?;
        }
    }
    println!("{}", tc.total);
    Ok(())
}

/// `condense`: writes the condensed DAG in gra format.
pub fn cmd_condense(input: &Path, format: FormatChoice, output: Option<&Path>) -> Result<()> {
    let dag = load_dag(input, format)?;
    match output {
        Some(path) => graph::write_gra(&dag, BufWriter::new(File::create(path)?))?,
        None => graph::write_gra(&dag, std::io::stdout().lock())?,
    }
    Ok(())
}

/// `workload`: generates an equal workload and writes it as CSV.
pub fn cmd_workload(
    input: &Path,
    format: FormatChoice,
    n: u64,
    seed: u64,
    output: Option<&Path>,
) -> Result<()> {
    let dag = load_dag(input, format)?;
    let workload = bench::gen_workload(&dag, n, seed)?;
    let hash = dag.structural_hash();
    match output {
        Some(path) => bench::write_workload(&workload, hash, BufWriter::new(File::create(path)?))?,
        None => bench::write_workload(&workload, hash, std::io::stdout().lock())?,
    }
    eprintln!(
        "workload: {} reachable + {} unreachable queries (seed {seed})",
        workload.reachable, workload.unreachable
    );
    Ok(())
}

/// `bench`: answers a workload with a label snapshot over the graph and
/// emits the per-channel statistics as JSON.
pub fn cmd_bench(
    input: &Path,
    format: FormatChoice,
    labels_path: &Path,
    workload_path: &Path,
    json_out: Option<&Path>,
) -> Result<()> {
    let dag = load_dag(input, format)?;
    let labels = labels::load_labels(BufReader::new(File::open(labels_path)?))?;
    if labels.node_count() != dag.node_count() {
        return Err(Error::Usage(format!(
            "label snapshot covers {} nodes but the condensed graph has {}",
            labels.node_count(),
            dag.node_count()
        )));
    }
    let (workload, recorded_hash) = bench::read_workload(open_input(workload_path)?)?;
    let actual_hash = dag.structural_hash();
    if recorded_hash != actual_hash {
        return Err(Error::Usage(format!(
            "workload was generated for graph {recorded_hash:016x}, \
             but the input condenses to {actual_hash:016x}"
        )));
    }
    let mut stats = bench::run_bench(&dag, &labels, &workload)?;
    eprintln!(
        "bench: {} queries in {:.1} ms",
        stats.total, stats.wall_ms
    );
    stats.wall_ms = 0.0; // keep file output reproducible; timing goes to stderr
    let json = serde_json::to_string_pretty(&stats).expect("stats serialize");
    match json_out {
        Some(path) => writeln!(BufWriter::new(File::create(path)?), "{json}")?,
        None => println!("{json}"),
    }
    Ok(())
}
