use std::path::PathBuf;

use clap::Args;

use super::{create_dir, run_manifest, write_dataset, DatasetEntry, GlobalArgs, DATASET_FILE};
use crate::error::{Error, Result};
use crate::problems::{generate, Family, ProblemSpec};
use crate::sparse::write_matrix_market;

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// Problem family (poisson2d, geometric2d, geometric3d, ws, ba, social_hub, aniso2d, aniso3d, advdiff2d, advdiff3d).
    #[arg(long)]
    pub family: String,
    /// Family size argument: grid cells per axis, points or nodes.
    #[arg(long)]
    pub n: Option<usize>,
    /// Target number of unknowns; alternative to `--n`.
    #[arg(long, conflicts_with = "n")]
    pub unknowns: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub hubs: Option<usize>,
    /// Override the family's default diagonal normalisation.
    #[arg(long)]
    pub normalize: Option<bool>,
    /// Keep a BFS subgraph with this many nodes.
    #[arg(long)]
    pub subgraph: Option<usize>,
    /// Instances with seeds `seed, seed+1, …`.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub out: PathBuf,
}

impl GenArgs {
    pub fn spec(&self, seed: u64) -> Result<ProblemSpec> {
        let family: Family = self.family.parse()?;
        let mut spec = match (self.n, self.unknowns) {
            (Some(n), _) => ProblemSpec::new(family, n, seed),
            (None, Some(u)) => ProblemSpec::with_unknowns(family, u, seed),
            (None, None) => {
                return Err(Error::Usage("one of --n or --unknowns is required".into()))
            }
        };
        if let Some(k) = self.k {
            spec.params.ws_k = k;
        }
        if let Some(p) = self.p {
            spec.params.ws_p = p;
        }
        if let Some(m) = self.m {
            spec.params.ba_m = m;
        }
        if let Some(l) = self.layers {
            spec.params.layers = l;
        }
        if let Some(h) = self.hubs {
            spec.params.hubs = h;
        }
        if let Some(norm) = self.normalize {
            spec.normalize = norm;
        }
        if self.subgraph.is_some() {
            spec.subgraph = self.subgraph;
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Writes `<family>_<seed>.mtx` and `<family>_<seed>.meta.txt` per instance, `dataset.txt` and `run.txt`.
pub fn cmd_gen(args: &GenArgs, g: &GlobalArgs, argv: &[String]) -> Result<()> {
    if args.count == 0 {
        return Err(Error::Usage("--count must be at least 1".into()));
    }
    create_dir(&args.out)?;
    let mut entries = Vec::with_capacity(args.count);
    for i in 0..args.count as u64 {
        let spec = args.spec(g.seed + i)?;
        let problem = generate(&spec)?;
        let stem = format!("{}_{}", spec.family, spec.seed);
        let path = args.out.join(format!("{stem}.mtx"));
        write_matrix_market(&problem.a, &path)?;
        problem
            .meta
            .write(&args.out.join(format!("{stem}.meta.txt")))?;
        entries.push(DatasetEntry { spec, path });
    }
    write_dataset(&args.out.join(DATASET_FILE), &entries)?;
    let mut m = run_manifest("gen", g, argv);
    m.push("instances", args.count);
    m.write(&args.out.join("run.txt"))
}
