use std::path::PathBuf;
use std::time::Instant;

use clap::Args;

use super::{create_dir, load_matrix, run_manifest, GlobalArgs};
use crate::amg::{build_hierarchy, save_hierarchy, CoarseSolver, Hierarchy, SetupConfig, Variant};
use crate::error::{Error, Result};
use crate::gnn::{augment_hierarchy, load_weights, AugmentOptions, GnnWeights};
use crate::sparse::SparseMatrix;

/// Switches that remove parts of the learned correction.
#[derive(Debug, Clone, Copy, Default, Args)]
pub struct AblationArgs {
    /// Keep the transfer operators uncorrected.
    #[arg(long)]
    pub no_dpdr: bool,
    /// Keep the coarse operators uncorrected.
    #[arg(long)]
    pub no_da: bool,
    /// Do not carry latents between level pairs.
    #[arg(long)]
    pub no_mix: bool,
}

impl AblationArgs {
    pub fn options(&self) -> AugmentOptions {
        AugmentOptions {
            apply_transfer: !self.no_dpdr,
            apply_coarse: !self.no_da,
            mix: !self.no_mix,
            ..AugmentOptions::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SetupArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// agg, sa, spsa or rapnet.
    #[arg(long)]
    pub variant: String,
    /// Weight directory; required for rapnet.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub max_levels: usize,
    #[arg(long, default_value_t = 64)]
    pub min_coarse: usize,
    /// Coarsest-level solver recorded in the dump: lu or jacobi:K.
    #[arg(long)]
    pub coarse_solver: Option<String>,
    #[command(flatten)]
    pub ablation: AblationArgs,
    #[arg(long)]
    pub out: PathBuf,
}

/// Wall-clock split of one setup.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SetupTiming {
    /// Aggregation and Galerkin products (and smoothing for SA/SpSA).
    pub hierarchy_seconds: f64,
    /// Network inference and correction; zero for non-learned variants.
    pub forward_seconds: f64,
}

impl SetupTiming {
    pub fn total(&self) -> f64 {
        self.hierarchy_seconds + self.forward_seconds
    }
}

/// Builds `variant` on `a` and times both phases.
pub fn timed_setup(
    a: &SparseMatrix,
    variant: Variant,
    config: &SetupConfig,
    seed: u64,
    weights: Option<&GnnWeights>,
    opts: &AugmentOptions,
) -> Result<(Hierarchy, SetupTiming)> {
    let start = Instant::now();
    let base = build_hierarchy(a, variant, config, seed)?;
    let hierarchy_seconds = start.elapsed().as_secs_f64();
    if variant != Variant::RapNet {
        return Ok((
            base,
            SetupTiming {
                hierarchy_seconds,
                forward_seconds: 0.0,
            },
        ));
    }
    let w = weights.ok_or_else(|| Error::Usage("the rapnet variant needs --weights".into()))?;
    let start = Instant::now();
    let h = augment_hierarchy(&base, w, opts)?;
    Ok((
        h,
        SetupTiming {
            hierarchy_seconds,
            forward_seconds: start.elapsed().as_secs_f64(),
        },
    ))
}

/// Writes the hierarchy dump to `<out>/hierarchy`, timings to `<out>/setup.txt` and `run.txt`.
pub fn cmd_setup(args: &SetupArgs, g: &GlobalArgs, argv: &[String]) -> Result<()> {
    let variant: Variant = args.variant.parse()?;
    if variant == Variant::RapNet && args.weights.is_none() {
        return Err(Error::Usage("the rapnet variant needs --weights".into()));
    }
    let weights = args.weights.as_deref().map(load_weights).transpose()?;
    let a = load_matrix(&args.matrix)?;
    let config = SetupConfig {
        max_levels: args.max_levels,
        min_coarse_size: args.min_coarse,
        ..SetupConfig::default()
    };
    let (mut h, timing) = timed_setup(
        &a,
        variant,
        &config,
        g.seed,
        weights.as_ref(),
        &args.ablation.options(),
    )?;
    if let Some(cs) = &args.coarse_solver {
        h.coarse_solver = cs.parse::<CoarseSolver>()?;
    }
    create_dir(&args.out)?;
    save_hierarchy(&h, &args.out.join("hierarchy"))?;
    let mut s = run_manifest("setup", g, argv);
    s.push("variant", variant)
        .push("depth", h.depth())
        .push("operator_complexity", h.operator_complexity())
        .push("hierarchy_seconds", timing.hierarchy_seconds)
        .push("forward_seconds", timing.forward_seconds)
        .push("transfer_seconds", 0)
        .push("setup_seconds", timing.total());
    s.write(&args.out.join("setup.txt"))?;
    run_manifest("setup", g, argv).write(&args.out.join("run.txt"))
}
