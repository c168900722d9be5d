use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;

use super::solve::{consistent_rhs, run_solve};
use super::{
    create_dir, load_matrix, parse_list, read_dataset, run_manifest, timed_setup, AblationArgs,
    GlobalArgs,
};
use crate::amg::{CoarseSolver, SetupConfig, Variant};
use crate::error::{Error, Result};
use crate::gnn::load_weights;
use crate::problems::{generate, Family};
use crate::solve::{CycleConfig, RunLabel, SolveMode, SolveReport, REPORT_CSV_HEADER};

pub const SUMMARY_CSV_HEADER: &str = "family,variant,mode,instances,iterations_mean,iterations_std,failures,\
setup_seconds_mean,setup_seconds_std,forward_seconds_mean,transfer_seconds,op_complexity_mean,rate_mean";

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Dataset manifest written by `gen`.
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value = "agg,sa,spsa")]
    pub variants: String,
    #[arg(long, default_value = "standalone,gmres")]
    pub modes: String,
    /// Weight directory; required when the variants include rapnet.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[command(flatten)]
    pub ablation: AblationArgs,
    /// Smoothing sweeps; the family's evaluation default when omitted.
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Levels; the family's evaluation depth when omitted.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub min_coarse: usize,
    /// One coarse solver for every variant (lu or jacobi:K) instead of the per-variant default.
    #[arg(long)]
    pub coarse_solver: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

/// One solve of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: Family,
    pub problem_id: String,
    pub variant: Variant,
    pub mode: SolveMode,
    pub n: usize,
    pub nnz: usize,
    pub forward_seconds: f64,
    pub report: SolveReport,
}

impl BenchRow {
    pub fn csv_row(&self) -> String {
        let variant = self.variant.to_string();
        self.report.csv_row(&RunLabel {
            problem_id: &self.problem_id,
            variant: &variant,
            mode: self.mode,
            n: self.n,
            nnz: self.nnz,
        })
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Aggregates rows per (family, variant, mode); non-converged runs count as `max_iters`.
pub fn summarize(rows: &[BenchRow], max_iters: usize) -> Vec<String> {
    let mut groups: BTreeMap<(String, String, String), Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((
                r.family.to_string(),
                r.variant.to_string(),
                r.mode.to_string(),
            ))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((family, variant, mode), rs)| {
            let iters: Vec<f64> = rs
                .iter()
                .map(|r| if r.report.converged { r.report.iterations } else { max_iters } as f64)
                .collect();
            let setup: Vec<f64> = rs.iter().map(|r| r.report.setup_seconds).collect();
            let forward: Vec<f64> = rs.iter().map(|r| r.forward_seconds).collect();
            let oc: Vec<f64> = rs.iter().map(|r| r.report.operator_complexity).collect();
            let rate: Vec<f64> = rs.iter().map(|r| r.report.convergence_rate).collect();
            let failures = rs.iter().filter(|r| !r.report.converged).count();
            let (im, is) = mean_std(&iters);
            let (sm, ss) = mean_std(&setup);
            format!(
                "{family},{variant},{mode},{},{im:.3},{is:.3},{failures},{sm:.6},{ss:.6},{:.6},0,{:.6},{:.6}",
                rs.len(),
                mean_std(&forward).0,
                mean_std(&oc).0,
                mean_std(&rate).0
            )
        })
        .collect()
}

/// Writes `reports.csv`, `summary.csv` and `run.txt`; returns the per-solve rows.
pub fn cmd_bench(args: &BenchArgs, g: &GlobalArgs, argv: &[String]) -> Result<Vec<BenchRow>> {
    let variants: Vec<Variant> = parse_list(&args.variants)?;
    let modes: Vec<SolveMode> = parse_list(&args.modes)?;
    if variants.is_empty() || modes.is_empty() {
        return Err(Error::Usage(
            "at least one variant and one mode are required".into(),
        ));
    }
    if variants.contains(&Variant::RapNet) && args.weights.is_none() {
        return Err(Error::Usage("the rapnet variant needs --weights".into()));
    }
    let coarse_override = args
        .coarse_solver
        .as_deref()
        .map(str::parse::<CoarseSolver>)
        .transpose()?;
    let weights = args.weights.as_deref().map(load_weights).transpose()?;
    let entries = read_dataset(&args.dataset)?;
    let opts = args.ablation.options();
    let stop = g.stop();

    let per_instance: Vec<Vec<BenchRow>> = entries
        .par_iter()
        .map(|entry| -> Result<Vec<BenchRow>> {
            let family = entry.spec.family;
            let a = if entry.path.exists() {
                load_matrix(&entry.path)?
            } else {
                generate(&entry.spec)?.a
            };
            let b = consistent_rhs(&a, g.seed.wrapping_add(entry.spec.seed))?;
            let config = SetupConfig {
                max_levels: args.depth.unwrap_or(family.config().depth_eval),
                min_coarse_size: args.min_coarse,
                ..SetupConfig::default()
            };
            let sweeps = args.sweeps.unwrap_or(family.config().sweeps_eval);
            let mut rows = Vec::new();
            for &variant in &variants {
                let (h, timing) =
                    timed_setup(&a, variant, &config, g.seed, weights.as_ref(), &opts)?;
                let coarse = coarse_override.unwrap_or_else(|| family.coarse_solver(variant));
                for &mode in &modes {
                    let (_, mut report) =
                        run_solve(&h, mode, CycleConfig::new(sweeps, coarse), &b, stop)?;
                    report.setup_seconds = timing.total();
                    rows.push(BenchRow {
                        family,
                        problem_id: entry.id(),
                        variant,
                        mode,
                        n: a.n_rows(),
                        nnz: a.nnz(),
                        forward_seconds: timing.forward_seconds,
                        report,
                    });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<BenchRow> = per_instance.into_iter().flatten().collect();

    create_dir(&args.out)?;
    let mut reports = format!("{REPORT_CSV_HEADER}\n");
    for r in &rows {
        reports += &r.csv_row();
        reports.push('\n');
    }
    super::write_text(&args.out.join("reports.csv"), &reports)?;
    let mut summary = format!("{SUMMARY_CSV_HEADER}\n");
    for line in summarize(&rows, g.max_iters) {
        summary += &line;
        summary.push('\n');
    }
    super::write_text(&args.out.join("summary.csv"), &summary)?;
    let mut m = run_manifest("bench", g, argv);
    m.push("instances", entries.len())
        .push("variants", &args.variants)
        .push("modes", &args.modes);
    m.write(&args.out.join("run.txt"))?;
    Ok(rows)
}
