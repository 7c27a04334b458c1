use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use reach_ratio_cli::{
    cmd_bench, cmd_condense, cmd_rr, cmd_tc, cmd_workload, exit_code, AlgoChoice, FormatChoice,
    RunConfig, TcSource,
};

#[derive(Parser)]
#[command(
    name = "reach-ratio",
    about = "Partial 2-hop labels over a DAG: reachability-ratio computation and query benchmarking",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Auto,
    EdgeList,
    Gra,
}

impl From<FormatArg> for FormatChoice {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Auto => FormatChoice::Auto,
            FormatArg::EdgeList => FormatChoice::EdgeList,
            FormatArg::Gra => FormatChoice::Gra,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReprArg {
    Auto,
    Lists,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Blrr,
    Incrr,
    Incrrplus,
    All,
}

impl From<AlgoArg> for AlgoChoice {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Blrr => AlgoChoice::Baseline,
            AlgoArg::Incrr => AlgoChoice::Incremental,
            AlgoArg::Incrrplus => AlgoChoice::IncrementalPartition,
            AlgoArg::All => AlgoChoice::All,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Input graph file.
    #[arg(long)]
    input: PathBuf,
    /// Input format; `auto` picks gra for a .gra extension.
    #[arg(long, value_enum, default_value = "auto")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Compute reachability ratios over a sweep of hop-node counts.
    Rr {
        #[command(flatten)]
        input: InputArgs,
        /// Algorithm selection.
        #[arg(long, value_enum, default_value = "all")]
        algo: AlgoArg,
        /// Comma-separated list of k values (e.g. "1,2,4,8").
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
        /// Doubling sweep 1,2,4,... up to this bound (used when --k is absent;
        /// defaults to the node count).
        #[arg(long)]
        k_doubling: Option<u32>,
        /// Known transitive-closure size (skips the oracle).
        #[arg(long, conflicts_with = "tc_file")]
        tc: Option<u64>,
        /// File holding the transitive-closure size as an integer.
        #[arg(long)]
        tc_file: Option<PathBuf>,
        /// Stop the incremental sweeps once alpha reaches this threshold.
        #[arg(long)]
        alpha_stop: Option<f64>,
        /// Write the per-step CSV here.
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Write the summary JSON here (default: standard output).
        #[arg(long)]
        out_json: Option<PathBuf>,
        /// Write a plot-friendly "k rr isr" table here.
        #[arg(long)]
        out_table: Option<PathBuf>,
        /// Save the label snapshot at the largest k here.
        #[arg(long)]
        save_labels: Option<PathBuf>,
        /// Keep wall-clock columns in file outputs (off keeps outputs
        /// byte-identical across runs).
        #[arg(long)]
        timings: bool,
        /// Label representation: `auto` mirrors into bitsets when k <= 128,
        /// `lists` forces the sorted-list merge scan.
        #[arg(long, value_enum, default_value = "auto")]
        repr: ReprArg,
    },
    /// Print the transitive-closure size of the condensed input.
    #[command(name = "tc-size", alias = "tc")]
    TcSize {
        #[command(flatten)]
        input: InputArgs,
        /// Also write per-node reach counts as CSV.
        #[arg(long)]
        per_node: Option<PathBuf>,
    },
    /// Condense the input graph and write it in gra format.
    Condense {
        #[command(flatten)]
        input: InputArgs,
        /// Output path (default: standard output).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate an equal (50/50) reachability workload.
    Workload {
        #[command(flatten)]
        input: InputArgs,
        /// Number of queries (must be even).
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (default: standard output).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Answer a workload using a label snapshot plus graph traversal.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        /// Label snapshot produced by `rr --save-labels`.
        #[arg(long)]
        labels: PathBuf,
        /// Workload CSV produced by `workload`.
        #[arg(long)]
        workload: PathBuf,
        /// Write the stats JSON here (default: standard output).
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> reach_ratio::Result<()> {
    match cli.command {
        Command::Rr {
            input,
            algo,
            k,
            k_doubling,
            tc,
            tc_file,
            alpha_stop,
            out_csv,
            out_json,
            out_table,
            save_labels,
            timings,
            repr,
        } => {
            let tc_source = match (tc, tc_file) {
                (Some(v), _) => TcSource::Value(v),
                (None, Some(path)) => TcSource::File(path),
                (None, None) => TcSource::Oracle,
            };
            cmd_rr(&RunConfig {
                input: input.input,
                format: input.format.into(),
                algo: algo.into(),
                k_list: k,
                k_doubling,
                tc_source,
                alpha_stop,
                out_csv,
                out_json,
                out_table,
                save_labels,
                timings,
                list_repr: matches!(repr, ReprArg::Lists),
            })
        }
        Command::TcSize { input, per_node } => {
            cmd_tc(&input.input, input.format.into(), per_node.as_deref())
        }
        Command::Condense { input, output } => {
            cmd_condense(&input.input, input.format.into(), output.as_deref())
        }
        Command::Workload {
            input,
            n,
            seed,
            output,
        } => cmd_workload(&input.input, input.format.into(), n, seed, output.as_deref()),
        Command::Bench {
            input,
            labels,
            workload,
            json,
        } => cmd_bench(
            &input.input,
            input.format.into(),
            &labels,
            &workload,
            json.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
