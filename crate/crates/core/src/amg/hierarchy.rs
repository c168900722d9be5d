use super::{
    aggregate, smooth_prolongation, smooth_restriction, spsa_coarse, strength_graph,
    tentative_prolongation, CoarseSolver, SetupConfig, Variant,
};
use crate::error::{Error, Result};
use crate::sparse::{triple_product, SparseMatrix};

/// One fine level with its transfer operators to the next coarser level.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub a: SparseMatrix,
    pub p: SparseMatrix,
    pub r: SparseMatrix,
}

/// Levels from finest to coarsest. `levels[l+1].a` (or `coarsest` for the
/// last level) is the coarse operator produced at level `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    pub levels: Vec<Level>,
    pub coarsest: SparseMatrix,
    pub coarse_solver: CoarseSolver,
    pub variant: Variant,
    pub seed: u64,
    pub config: SetupConfig,
}

impl Hierarchy {
    /// Number of levels including the finest and the coarsest.
    pub fn depth(&self) -> usize {
        self.levels.len() + 1
    }

    /// Operator on level `l` (`0` is the finest).
    pub fn operator(&self, l: usize) -> &SparseMatrix {
        if l < self.levels.len() {
            &self.levels[l].a
        } else {
            &self.coarsest
        }
    }

    pub fn operators(&self) -> impl Iterator<Item = &SparseMatrix> {
        self.levels
            .iter()
            .map(|lvl| &lvl.a)
            .chain(std::iter::once(&self.coarsest))
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.operators().map(SparseMatrix::n_rows).collect()
    }

    pub fn nnz_per_level(&self) -> Vec<usize> {
        self.operators().map(SparseMatrix::nnz).collect()
    }

    pub fn finest(&self) -> &SparseMatrix {
        self.operator(0)
    }

    pub fn operator_complexity(&self) -> f64 {
        operator_complexity(self)
    }

    /// Replace the coarse operator below level `l`.
    pub(crate) fn set_operator(&mut self, l: usize, a: SparseMatrix) {
        if l < self.levels.len() {
            self.levels[l].a = a;
        } else {
            self.coarsest = a;
        }
    }
}

/// `Σ_l nnz(A_l) / nnz(A_0)`.
pub fn operator_complexity(h: &Hierarchy) -> f64 {
    let nnz = h.nnz_per_level();
    nnz.iter().sum::<usize>() as f64 / nnz[0] as f64
}

/// Aggregation seed used at `level` for a setup seeded with `seed`.
pub fn level_seed(seed: u64, level: usize) -> u64 {
    seed ^ (level as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Builds an AGG, SA or SpSA hierarchy.
///
/// `Variant::RapNet` yields the unsmoothed hierarchy it is derived from
/// (labelled AGG); corrections are applied by `gnn::augment_hierarchy`.
/// Strength is recomputed at every level from the coarse operator the
/// variant produced.
pub fn build_hierarchy(
    a: &SparseMatrix,
    variant: Variant,
    config: &SetupConfig,
    seed: u64,
) -> Result<Hierarchy> {
    config.validate()?;
    if !a.is_square() {
        return Err(Error::dim(
            "build_hierarchy",
            "system matrix must be square",
        ));
    }
    let variant = if variant == Variant::RapNet {
        Variant::Agg
    } else {
        variant
    };
    let mut levels = Vec::new();
    let mut current = a.clone();
    while levels.len() + 1 < config.max_levels && current.n_rows() > config.min_coarse_size {
        let l = levels.len();
        let strength = strength_graph(&current, config.eps_soc)?;
        let agg = aggregate(&strength, level_seed(seed, l));
        if agg.n_aggregates() >= current.n_rows() {
            return Err(Error::Setup(format!(
                "aggregation did not coarsen level {l} ({} rows)",
                current.n_rows()
            )));
        }
        let p_tent = tentative_prolongation(&agg);
        let r_tent = p_tent.transpose();
        let (p, r, next) = match variant {
            Variant::Agg | Variant::RapNet => {
                let next = triple_product(&r_tent, &current, &p_tent)?;
                (p_tent, r_tent, next)
            }
            Variant::Sa | Variant::SpSa => {
                let p_s = smooth_prolongation(&current, &p_tent, config)?;
                let r_s = smooth_restriction(&current, &p_tent, &p_s, config)?;
                let next = if variant == Variant::Sa {
                    triple_product(&r_s, &current, &p_s)?
                } else {
                    let pattern = triple_product(&r_tent, &current, &p_tent)?;
                    spsa_coarse(&current, &p_s, &r_s, &pattern)?
                };
                (p_s, r_s, next)
            }
        };
        // A component collapsed to a single zero row cannot be relaxed.
        if next.diag().contains(&0.0) {
            break;
        }
        levels.push(Level { a: current, p, r });
        current = next;
    }
    Ok(Hierarchy {
        levels,
        coarsest: current,
        coarse_solver: variant.default_coarse_solver(),
        variant,
        seed,
        config: config.clone(),
    })
}
