mod bench;
mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Fuzzy-constrained strong simulation matching over attributed graphs.
#[derive(Parser, Debug)]
#[command(name = "mfcss", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw an attribute sidecar for an edge-list graph.
    Synth(SynthArgs),
    /// Run a pattern query and write canonical results.
    Match(MatchArgs),
    /// Run the randomized engine-versus-oracle campaign.
    Oracle(OracleArgs),
    /// Time every (dataset, pattern, variant) combination.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// SNAP-style edge list.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Size of the label alphabet.
    #[arg(long, default_value_t = 3)]
    labels: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct MatchArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Attribute sidecar; drawn from --seed and --labels when absent.
    #[arg(long)]
    attrs: Option<PathBuf>,
    #[arg(long)]
    pattern: PathBuf,
    /// ntss, ntss-inv, ntss-edgc or ntss-inv-edgc.
    #[arg(long, default_value = "ntss")]
    variant: String,
    /// Canonical result file.
    #[arg(long)]
    output: PathBuf,
    /// Progress CSV of elapsed time against cumulative results.
    #[arg(long)]
    progress: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    labels: u32,
    #[arg(long, hide = true)]
    skip_in_edge_check: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest data graph the oracle accepts.
    #[arg(long, default_value_t = mfcss::oracle::DEFAULT_SIZE_LIMIT)]
    size_limit: usize,
    /// Per-instance report; the summary line is always printed.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, hide = true)]
    skip_in_edge_check: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Edge-list dataset as NAME=EDGES or NAME=EDGES,ATTRS. Repeatable.
    #[arg(long = "dataset", value_name = "SPEC")]
    datasets: Vec<String>,
    /// Generated dataset as NAME=NODES,EDGES. Repeatable.
    #[arg(long = "synthetic", value_name = "SPEC")]
    synthetic: Vec<String>,
    /// Pattern as NAME=PATH. Repeatable.
    #[arg(long = "pattern", value_name = "SPEC")]
    patterns: Vec<String>,
    /// Variant to time. Repeatable; all four when omitted.
    #[arg(long = "variant")]
    variants: Vec<String>,
    /// Seed for attributes and generated topologies.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    labels: u32,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Timing CSV; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Plain-over-variant time ratios; stdout when absent.
    #[arg(long)]
    ratio_out: Option<PathBuf>,
}

/// 1 for invalid input or a failed check, 2 for filesystem failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<mfcss::Error>() {
            return if e.is_io() { 2 } else { 1 };
        }
        if cause.is::<std::io::Error>() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Synth(a) => commands::synth(&a),
        Command::Match(a) => commands::run_match(&a),
        Command::Oracle(a) => commands::oracle(&a),
        Command::Bench(a) => bench::run(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
