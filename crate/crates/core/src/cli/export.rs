use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;

use super::{create_dir, load_matrix, read_dataset, run_manifest, DatasetEntry, GlobalArgs};
use crate::error::{Error, Result};
use crate::manifest::Manifest;
use crate::problems::{generate, GeneratedProblem};
use crate::train::{build_training_sample_with_depth, export_training_sample, DEFAULT_BATCH_SIZE};

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    /// Dataset manifest written by `gen`.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Error/residual pairs per instance.
    #[arg(long, default_value_t = DEFAULT_BATCH_SIZE)]
    pub n_b: usize,
    /// Levels; the family's training depth when omitted.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

fn load_problem(entry: &DatasetEntry) -> Result<GeneratedProblem> {
    if !entry.path.exists() {
        return generate(&entry.spec);
    }
    let a = load_matrix(&entry.path)?;
    let meta_path = entry.path.with_extension("meta.txt");
    let meta = if meta_path.exists() {
        Manifest::read(&meta_path)?
    } else {
        let mut m = Manifest::new();
        m.push("family", entry.spec.family)
            .push("seed", entry.spec.seed)
            .push("n", a.n_rows())
            .push("nnz", a.nnz());
        m
    };
    Ok(GeneratedProblem { a, meta })
}

/// Writes `sample_<i>/` per dataset instance and `run.txt`.
pub fn cmd_export_train(args: &ExportArgs, g: &GlobalArgs, argv: &[String]) -> Result<()> {
    if args.n_b == 0 {
        return Err(Error::Usage("--n-b must be at least 1".into()));
    }
    if args.depth == Some(0) {
        return Err(Error::Usage("--depth must be at least 1".into()));
    }
    let entries = read_dataset(&args.dataset)?;
    create_dir(&args.out)?;
    entries.par_iter().enumerate().try_for_each(|(i, entry)| {
        let problem = load_problem(entry)?;
        let family = entry.spec.family;
        let depth = args.depth.unwrap_or(family.config().depth_train);
        let seed = g.seed.wrapping_add(entry.spec.seed);
        let sample = build_training_sample_with_depth(&problem, family, args.n_b, depth, seed)?;
        export_training_sample(&sample, &args.out.join(format!("sample_{i}")))
    })?;
    let mut m = run_manifest("export-train", g, argv);
    m.push("instances", entries.len()).push("n_b", args.n_b);
    m.write(&args.out.join("run.txt"))
}
