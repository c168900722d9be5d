//! Command-line front end.
//!
//! Every command writes `run.txt` into its output directory with the verbatim
//! argument list, the seeds and the file format versions in effect.

mod bench;
mod dataset;
mod export;
mod gen;
mod setup;
mod solve;

use std::path::Path;

use clap::{Args, Parser, Subcommand};

pub use bench::{cmd_bench, summarize, BenchArgs, BenchRow, SUMMARY_CSV_HEADER};
pub use dataset::{read_dataset, write_dataset, DatasetEntry, DATASET_FILE};
pub use export::{cmd_export_train, ExportArgs};
pub use gen::{cmd_gen, GenArgs};
pub use setup::{cmd_setup, timed_setup, AblationArgs, SetupArgs, SetupTiming};
pub use solve::{cmd_solve, consistent_rhs, run_solve, SolveArgs};

use crate::error::{Error, Result};
use crate::gnn::WEIGHT_FORMAT_VERSION;
use crate::manifest::Manifest;
use crate::sparse::{read_binary, read_matrix_market, SparseMatrix};
use crate::train::SAMPLE_FORMAT_VERSION;

#[derive(Debug, Parser)]
#[command(
    name = "rapnet",
    version,
    about = "Aggregation AMG with learned operator corrections"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; all cores when omitted.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Relative residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Iteration cap.
    #[arg(long, global = true, default_value_t = 1000)]
    pub max_iters: usize,
}

impl Default for GlobalArgs {
    fn default() -> Self {
        Self {
            seed: 0,
            threads: None,
            tol: 1e-6,
            max_iters: 1000,
        }
    }
}

impl GlobalArgs {
    pub fn stop(&self) -> crate::solve::StopCriteria {
        crate::solve::StopCriteria {
            tol: self.tol,
            max_iters: self.max_iters,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate problem instances and a dataset manifest.
    Gen(GenArgs),
    /// Build a hierarchy and dump it.
    Setup(SetupArgs),
    /// Solve with a dumped hierarchy.
    Solve(SolveArgs),
    /// Run variants and modes over a dataset and aggregate.
    Bench(BenchArgs),
    /// Write training samples for every dataset instance.
    ExportTrain(ExportArgs),
}

/// Runs a parsed command line. `argv` is echoed into the run manifest.
pub fn run(cli: Cli, argv: &[String]) -> Result<()> {
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        // A second initialisation in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    if cli.global.tol.is_nan() || cli.global.tol < 0.0 {
        return Err(Error::Usage(format!(
            "--tol must be nonnegative, got {}",
            cli.global.tol
        )));
    }
    let g = &cli.global;
    match &cli.command {
        Command::Gen(a) => cmd_gen(a, g, argv),
        Command::Setup(a) => cmd_setup(a, g, argv),
        Command::Solve(a) => cmd_solve(a, g, argv),
        Command::Bench(a) => cmd_bench(a, g, argv).map(|_| ()),
        Command::ExportTrain(a) => cmd_export_train(a, g, argv),
    }
}

pub(crate) fn run_manifest(command: &str, g: &GlobalArgs, argv: &[String]) -> Manifest {
    let mut m = Manifest::new();
    m.push("command", command)
        .push("argv", argv.join(" "))
        .push("crate_version", env!("CARGO_PKG_VERSION"))
        .push("seed", g.seed)
        .push(
            "threads",
            g.threads.map_or("auto".to_string(), |t| t.to_string()),
        )
        .push("tol", g.tol)
        .push("max_iters", g.max_iters)
        .push("weight_format_version", WEIGHT_FORMAT_VERSION)
        .push("sample_format_version", SAMPLE_FORMAT_VERSION);
    m
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Reads `.mtx` as Matrix Market and anything else as the binary dump.
pub fn load_matrix(path: &Path) -> Result<SparseMatrix> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("mtx") => read_matrix_market(path),
        _ => read_binary(path),
    }
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Comma-separated list flag parsed element by element.
pub(crate) fn parse_list<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}
