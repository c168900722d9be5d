use super::{inverse_diagonal, jacobi_sweeps, CycleConfig, DenseLu, Preconditioner};
use crate::amg::{CoarseSolver, Hierarchy};
use crate::error::{Error, Result};

enum CoarseStep {
    Lu(DenseLu),
    Jacobi { inv_diag: Vec<f64>, sweeps: usize },
}

/// A V-cycle bound to one hierarchy, with diagonals and the coarse factorisation precomputed.
pub struct VCycle<'h> {
    hierarchy: &'h Hierarchy,
    config: CycleConfig,
    inv_diags: Vec<Vec<f64>>,
    coarse: CoarseStep,
}

impl<'h> VCycle<'h> {
    pub fn new(hierarchy: &'h Hierarchy, config: CycleConfig) -> Result<Self> {
        config.validate()?;
        let inv_diags = hierarchy
            .levels
            .iter()
            .map(|lvl| inverse_diagonal(&lvl.a))
            .collect::<Result<Vec<_>>>()?;
        let coarse = match config.coarse_solver {
            CoarseSolver::DenseLu => CoarseStep::Lu(DenseLu::factor(&hierarchy.coarsest)),
            CoarseSolver::Jacobi(sweeps) => CoarseStep::Jacobi {
                inv_diag: inverse_diagonal(&hierarchy.coarsest)?,
                sweeps,
            },
        };
        Ok(Self {
            hierarchy,
            config,
            inv_diags,
            coarse,
        })
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        self.hierarchy
    }

    pub fn config(&self) -> &CycleConfig {
        &self.config
    }

    /// One V-cycle on `A_0 x = b` starting from `x`.
    pub fn apply(&self, b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let n = self.hierarchy.finest().n_rows();
        if b.len() != n || x.len() != n {
            return Err(Error::dim(
                "v_cycle",
                format!("vectors must have length {n}"),
            ));
        }
        let mut x = x.to_vec();
        self.cycle(0, b, &mut x);
        Ok(x)
    }

    fn cycle(&self, l: usize, b: &[f64], x: &mut [f64]) {
        let h = self.hierarchy;
        if l == h.levels.len() {
            match &self.coarse {
                CoarseStep::Lu(lu) => x.copy_from_slice(&lu.solve(b)),
                CoarseStep::Jacobi { inv_diag, sweeps } => {
                    jacobi_sweeps(&h.coarsest, inv_diag, b, x, self.config.omega, *sweeps)
                }
            }
            return;
        }
        let level = &h.levels[l];
        let inv_diag = &self.inv_diags[l];
        jacobi_sweeps(
            &level.a,
            inv_diag,
            b,
            x,
            self.config.omega,
            self.config.nu_pre,
        );
        let r = level.a.residual(b, x).expect("level shapes are consistent");
        let r_coarse = level.r.spmv(&r).expect("level shapes are consistent");
        let mut e_coarse = vec![0f64; r_coarse.len()];
        self.cycle(l + 1, &r_coarse, &mut e_coarse);
        let correction = level
            .p
            .spmv(&e_coarse)
            .expect("level shapes are consistent");
        for (xi, ci) in x.iter_mut().zip(&correction) {
            *xi += ci;
        }
        jacobi_sweeps(
            &level.a,
            inv_diag,
            b,
            x,
            self.config.omega,
            self.config.nu_post,
        );
    }
}

impl Preconditioner for VCycle<'_> {
    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        VCycle::apply(self, r, &vec![0.0; r.len()])
    }
}

/// One V-cycle; prepares the cycle on every call, so prefer [`VCycle`] in loops.
pub fn v_cycle(h: &Hierarchy, b: &[f64], x: &[f64], cfg: &CycleConfig) -> Result<Vec<f64>> {
    VCycle::new(h, cfg.clone())?.apply(b, x)
}
