//! Self-supervised training pairs and their on-disk form.
//!
//! A batch holds error/residual pairs `(e, r)` with `A e = r`, where `e` is what
//! is left of a random error after a random number of plain V-cycles.

mod sample;

pub use sample::{
    build_training_sample, build_training_sample_with_depth, export_training_sample,
    import_training_sample, TrainingSample, SAMPLE_FORMAT_VERSION,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::amg::{CoarseSolver, Hierarchy};
use crate::error::{Error, Result};
use crate::solve::{CycleConfig, VCycle};

/// Right-hand sides per training sample.
pub const DEFAULT_BATCH_SIZE: usize = 64;
/// Most V-cycles applied before a pair is emitted.
pub const MAX_CYCLES: usize = 30;
/// Coarse solve used while generating and training.
pub const TRAIN_COARSE_SOLVER: CoarseSolver = CoarseSolver::Jacobi(2);
/// Attempts per pair before giving up on a diverging hierarchy.
const MAX_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct BatchConfig {
    pub n_b: usize,
    /// Inclusive range of cycle counts, drawn uniformly per pair.
    pub min_cycles: usize,
    pub max_cycles: usize,
    /// Pre- and post-smoothing sweeps per cycle.
    pub sweeps: usize,
}

impl BatchConfig {
    pub fn new(n_b: usize, sweeps: usize) -> Self {
        Self {
            n_b,
            min_cycles: 1,
            max_cycles: MAX_CYCLES,
            sweeps,
        }
    }

    /// Every pair gets exactly `k` cycles.
    pub fn with_fixed_cycles(mut self, k: usize) -> Self {
        self.min_cycles = k;
        self.max_cycles = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_b == 0 {
            return Err(Error::Usage("batch size must be at least 1".into()));
        }
        if self.min_cycles > self.max_cycles {
            return Err(Error::Usage(format!(
                "cycle range {}..={} is empty",
                self.min_cycles, self.max_cycles
            )));
        }
        if self.sweeps == 0 {
            return Err(Error::Usage(
                "at least one smoothing sweep is required".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualBatch {
    pub residuals: Vec<Vec<f32>>,
    pub errors: Vec<Vec<f32>>,
    pub cycles: Vec<usize>,
    /// Pairs that diverged and were redrawn.
    pub resampled: usize,
}

impl ResidualBatch {
    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn n(&self) -> usize {
        self.errors.first().map_or(0, Vec::len)
    }

    /// Largest `‖A e − r‖ / ‖r‖` over the batch.
    pub fn max_identity_error(&self, h: &Hierarchy) -> Result<f64> {
        let a = h.finest();
        let mut worst = 0f64;
        for (e, r) in self.errors.iter().zip(&self.residuals) {
            let e: Vec<f64> = e.iter().map(|&v| v as f64).collect();
            let ae = a.spmv(&e)?;
            let diff: f64 = ae
                .iter()
                .zip(r)
                .map(|(x, &y)| (x - y as f64).powi(2))
                .sum::<f64>()
                .sqrt();
            let norm: f64 = r.iter().map(|&v| (v as f64).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(if norm > 0.0 { diff / norm } else { diff });
        }
        Ok(worst)
    }
}

fn pair_seed(seed: u64, index: usize, attempt: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
        ^ (attempt as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

fn standard_normal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Error, residual and cycle count of one pair.
type Pair = (Vec<f32>, Vec<f32>, usize);

/// One pair, or `None` if the cycles produced a non-finite iterate.
fn draw_pair(vc: &VCycle<'_>, cfg: &BatchConfig, seed: u64) -> Result<Option<Pair>> {
    let a = vc.hierarchy().finest();
    let n = a.n_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(cfg.min_cycles..=cfg.max_cycles);
    let x_true = standard_normal(&mut rng, n);
    let mut x = standard_normal(&mut rng, n);
    let b = a.spmv(&x_true)?;
    for _ in 0..k {
        x = vc.apply(&b, &x)?;
        if !x.iter().all(|v| v.is_finite()) {
            return Ok(None);
        }
    }
    let e: Vec<f32> = x_true
        .iter()
        .zip(&x)
        .map(|(t, xi)| (t - xi) as f32)
        .collect();
    let e64: Vec<f64> = e.iter().map(|&v| v as f64).collect();
    let r: Vec<f32> = a.spmv(&e64)?.into_iter().map(|v| v as f32).collect();
    Ok(Some((e, r, k)))
}

/// Draws `cfg.n_b` error/residual pairs on the finest level of `h`.
///
/// Cycles use damped Jacobi smoothing and a two-sweep Jacobi coarse solve,
/// independently of the coarse solver recorded in `h`.
pub fn gen_residual_batch(h: &Hierarchy, cfg: &BatchConfig, seed: u64) -> Result<ResidualBatch> {
    cfg.validate()?;
    let vc = VCycle::new(h, CycleConfig::new(cfg.sweeps, TRAIN_COARSE_SOLVER))?;
    let pairs: Vec<(Vec<f32>, Vec<f32>, usize, usize)> = (0..cfg.n_b)
        .into_par_iter()
        .map(|i| {
            for attempt in 0..MAX_ATTEMPTS {
                if let Some((e, r, k)) = draw_pair(&vc, cfg, pair_seed(seed, i, attempt))? {
                    return Ok((e, r, k, attempt));
                }
            }
            Err(Error::Solver(format!(
                "training pair {i} diverged in {MAX_ATTEMPTS} attempts"
            )))
        })
        .collect::<Result<_>>()?;
    let mut batch = ResidualBatch {
        residuals: Vec::with_capacity(cfg.n_b),
        errors: Vec::with_capacity(cfg.n_b),
        cycles: Vec::with_capacity(cfg.n_b),
        resampled: 0,
    };
    for (e, r, k, attempts) in pairs {
        batch.errors.push(e);
        batch.residuals.push(r);
        batch.cycles.push(k);
        batch.resampled += attempts;
    }
    Ok(batch)
}

/// Mean squared relative error `‖ê − e‖² / (‖e‖² + 1e-12)` over a batch.
pub fn reference_loss(predicted: &[Vec<f32>], target: &[Vec<f32>]) -> Result<f64> {
    if predicted.is_empty() || predicted.len() != target.len() {
        return Err(Error::dim(
            "reference_loss",
            format!(
                "{} predictions for {} targets",
                predicted.len(),
                target.len()
            ),
        ));
    }
    let mut total = 0.0;
    for (p, t) in predicted.iter().zip(target) {
        if p.len() != t.len() {
            return Err(Error::dim(
                "reference_loss",
                format!("vector lengths {} and {}", p.len(), t.len()),
            ));
        }
        let diff: f64 = p
            .iter()
            .zip(t)
            .map(|(&a, &b)| (a as f64 - b as f64).powi(2))
            .sum();
        let norm: f64 = t.iter().map(|&b| (b as f64).powi(2)).sum();
        total += diff / (norm + 1e-12);
    }
    Ok(total / predicted.len() as f64)
}
