use std::path::{Path, PathBuf};

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{create_dir, load_matrix, run_manifest, GlobalArgs};
use crate::amg::{load_hierarchy, CoarseSolver, Hierarchy};
use crate::error::{Error, Result};
use crate::solve::{
    fgmres, solve_standalone, CycleConfig, RunLabel, SolveMode, SolveReport, StopCriteria, VCycle,
    GMRES_RESTART, REPORT_CSV_HEADER,
};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Hierarchy dump, or a `setup` output directory containing one.
    #[arg(long)]
    pub hierarchy: PathBuf,
    /// Optional check that the dump was built from this matrix.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// standalone or gmres.
    #[arg(long, default_value = "standalone")]
    pub mode: String,
    /// random (b = A x with standard normal x), zero, or a text file of values.
    #[arg(long, default_value = "random")]
    pub rhs: String,
    /// Pre- and post-smoothing sweeps.
    #[arg(long, default_value_t = 1)]
    pub sweeps: usize,
    /// Override the coarse solver recorded in the dump: lu or jacobi:K.
    #[arg(long)]
    pub coarse_solver: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

/// `b = A x` with `x` standard normal drawn from `seed`.
pub fn consistent_rhs(a: &SparseMatrix, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..a.n_cols())
        .map(|_| rng.sample(StandardNormal))
        .collect();
    a.spmv(&x)
}

fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| {
                Error::format("vector", format!("bad number `{t}` in {}", path.display()))
            })
        })
        .collect()
}

/// Runs one solve from a zero initial guess.
pub fn run_solve(
    h: &Hierarchy,
    mode: SolveMode,
    cycle: CycleConfig,
    b: &[f64],
    stop: StopCriteria,
) -> Result<(Vec<f64>, SolveReport)> {
    let x0 = vec![0.0; b.len()];
    match mode {
        SolveMode::Standalone => solve_standalone(h, b, &x0, &cycle, stop),
        SolveMode::Gmres => {
            let vc = VCycle::new(h, cycle)?;
            fgmres(
                h.finest(),
                b,
                &x0,
                &vc,
                GMRES_RESTART,
                stop,
                h.operator_complexity(),
            )
        }
    }
}

/// Writes `report.csv`, `history.csv`, `solution.txt` and `run.txt`.
pub fn cmd_solve(args: &SolveArgs, g: &GlobalArgs, argv: &[String]) -> Result<()> {
    let mode: SolveMode = args.mode.parse()?;
    let nested = args.hierarchy.join("hierarchy");
    let dir = if nested.join("manifest.txt").exists() {
        nested
    } else {
        args.hierarchy.clone()
    };
    let mut h = load_hierarchy(&dir)?;
    if let Some(m) = &args.matrix {
        if &load_matrix(m)? != h.finest() {
            return Err(Error::Usage(format!(
                "{} is not the finest operator of the hierarchy",
                m.display()
            )));
        }
    }
    if let Some(cs) = &args.coarse_solver {
        h.coarse_solver = cs.parse::<CoarseSolver>()?;
    }
    let a = h.finest();
    let b = match args.rhs.as_str() {
        "random" => consistent_rhs(a, g.seed)?,
        "zero" => vec![0.0; a.n_rows()],
        file => read_vector(Path::new(file))?,
    };
    if b.len() != a.n_rows() {
        return Err(Error::Usage(format!(
            "right-hand side has {} entries, operator has {} rows",
            b.len(),
            a.n_rows()
        )));
    }
    let cycle = CycleConfig::for_hierarchy(&h, args.sweeps);
    cycle.validate()?;
    let (x, report) = run_solve(&h, mode, cycle, &b, g.stop())?;

    create_dir(&args.out)?;
    let id = args
        .matrix
        .as_deref()
        .and_then(Path::file_stem)
        .map_or("problem".to_string(), |s| s.to_string_lossy().into_owned());
    let variant = h.variant.to_string();
    let label = RunLabel {
        problem_id: &id,
        variant: &variant,
        mode,
        n: a.n_rows(),
        nnz: a.nnz(),
    };
    let csv = format!("{REPORT_CSV_HEADER}\n{}\n", report.csv_row(&label));
    let report_path = args.out.join("report.csv");
    std::fs::write(&report_path, csv).map_err(|e| Error::io(&report_path, e))?;
    let hist_path = args.out.join("history.csv");
    let mut hist = Vec::new();
    report
        .write_history_csv(&mut hist)
        .expect("writing to memory");
    std::fs::write(&hist_path, hist).map_err(|e| Error::io(&hist_path, e))?;
    let sol_path = args.out.join("solution.txt");
    let sol: String = x.iter().map(|v| format!("{v:e}\n")).collect();
    std::fs::write(&sol_path, sol).map_err(|e| Error::io(&sol_path, e))?;
    let mut m = run_manifest("solve", g, argv);
    m.push("mode", mode)
        .push("sweeps", args.sweeps)
        .push("coarse_solver", h.coarse_solver);
    m.write(&args.out.join("run.txt"))
}
