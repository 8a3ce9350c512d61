//! `glt`: sparsify graphs, measure backbones, and run degree sweeps.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use glt_core::Error;

#[derive(Parser)]
#[command(name = "glt", version, about = "Spanning-tree graph sparsification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sparsify a graph to a target edge budget.
    Sparsify(SparsifyArgs),
    /// Structural metrics and curvature aggregates of one graph.
    Metrics(MetricsArgs),
    /// Sample a planted-partition graph and its labels.
    GenSbm(GenSbmArgs),
    /// Sparsify over a grid of average degrees and seeds, and evaluate each backbone.
    Sweep(SweepArgs),
    /// Write a graph in DOT format, optionally with a bold backbone.
    ExportDot(ExportDotArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["avg_degree", "edges"]))]
struct SparsifyArgs {
    /// Edge list path, or `builtin:<name>` (karate, path:N, ring:N, complete:N, star:N, barbell:N).
    #[arg(long)]
    input: String,
    #[arg(long)]
    method: String,
    /// Target average degree d; the budget is round(d·n/2), halves away from zero.
    #[arg(long)]
    avg_degree: Option<f64>,
    /// Exact number of edges to keep.
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Slq,
}

#[derive(Args)]
struct SlqArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Number of SLQ probe vectors.
    #[arg(long, default_value_t = 100)]
    probes: usize,
    /// Lanczos steps per probe.
    #[arg(long, default_value_t = 10)]
    steps: usize,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    input: String,
    #[command(flatten)]
    slq: SlqArgs,
    /// Seed for SLQ probes.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Triangle weight in the augmented Forman curvature.
    #[arg(long, default_value_t = glt_core::curvature::DEFAULT_GAMMA)]
    gamma: f64,
    /// Output TSV; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenSbmArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    snr: f64,
    #[arg(long)]
    avg_degree: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Writes `<prefix>.edges` and `<prefix>.labels`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhatArg {
    Metrics,
    Clustering,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    input: String,
    /// One label per line; required for `--what clustering`.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Comma-separated methods; all methods when omitted.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,
    /// Comma-separated average degrees; defaults to 1.1,1.5,2,3,4,5,7,10.
    #[arg(long, value_delimiter = ',')]
    degrees: Vec<f64>,
    /// Number of seeds per cell (seeds 0..count).
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, value_enum, default_value_t = WhatArg::Metrics)]
    what: WhatArg,
    #[command(flatten)]
    slq: SlqArgs,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct ExportDotArgs {
    #[arg(long)]
    input: String,
    /// Edge list whose edges are drawn bold; must be a subset of the input.
    #[arg(long)]
    highlight: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Infeasible(_) => 3,
        Error::Numerical(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sparsify(args) => commands::sparsify(args),
        Command::Metrics(args) => commands::metrics(args),
        Command::GenSbm(args) => commands::gen_sbm(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::ExportDot(args) => commands::export_dot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("glt: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
