//! Damped Jacobi smoothing, the recursive V-cycle, the stand-alone cycle
//! iteration and restarted flexible GMRES preconditioned by one V-cycle.

mod dense;
mod fgmres;
mod report;
mod standalone;
mod vcycle;

pub use dense::DenseLu;
pub use fgmres::{fgmres, GMRES_RESTART};
pub use report::{
    convergence_rate, RunLabel, SolveMode, SolveReport, SolveStatus, REPORT_CSV_HEADER,
};
pub use standalone::solve_standalone;
pub use vcycle::{v_cycle, VCycle};

use crate::amg::{CoarseSolver, Hierarchy};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Damping factor of the relaxation.
pub const DEFAULT_OMEGA: f64 = 0.6;

#[derive(Debug, Clone, PartialEq)]
pub struct CycleConfig {
    pub nu_pre: usize,
    pub nu_post: usize,
    pub omega: f64,
    pub coarse_solver: CoarseSolver,
}

impl CycleConfig {
    /// `sweeps` pre- and post-smoothing sweeps with the default damping.
    pub fn new(sweeps: usize, coarse_solver: CoarseSolver) -> Self {
        Self {
            nu_pre: sweeps,
            nu_post: sweeps,
            omega: DEFAULT_OMEGA,
            coarse_solver,
        }
    }

    /// Uses the coarse solver recorded in the hierarchy.
    pub fn for_hierarchy(h: &Hierarchy, sweeps: usize) -> Self {
        Self::new(sweeps, h.coarse_solver)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu_pre + self.nu_post == 0 {
            return Err(Error::Usage(
                "at least one smoothing sweep is required".into(),
            ));
        }
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(Error::Usage(format!(
                "omega must lie in (0, 1], got {}",
                self.omega
            )));
        }
        Ok(())
    }
}

/// Stopping rule: relative residual tolerance and iteration cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopCriteria {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for StopCriteria {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iters: 1000,
        }
    }
}

/// Anything that approximately inverts the system operator.
pub trait Preconditioner {
    fn apply(&self, r: &[f64]) -> Result<Vec<f64>>;
}

/// No preconditioning.
pub struct IdentityPreconditioner;

impl Preconditioner for IdentityPreconditioner {
    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        Ok(r.to_vec())
    }
}

pub(crate) fn inverse_diagonal(a: &SparseMatrix) -> Result<Vec<f64>> {
    a.diag()
        .iter()
        .enumerate()
        .map(|(row, &d)| {
            if d == 0.0 {
                Err(Error::ZeroDiagonal { row })
            } else {
                Ok(1.0 / d)
            }
        })
        .collect()
}

/// In-place damped Jacobi `x ← x + ω D⁻¹ (b − A x)`.
pub(crate) fn jacobi_sweeps(
    a: &SparseMatrix,
    inv_diag: &[f64],
    b: &[f64],
    x: &mut [f64],
    omega: f64,
    sweeps: usize,
) {
    let mut ax = vec![0f64; x.len()];
    for _ in 0..sweeps {
        a.spmv_into(x, &mut ax)
            .expect("dimensions checked by caller");
        for i in 0..x.len() {
            x[i] += omega * inv_diag[i] * (b[i] - ax[i]);
        }
    }
}

/// `sweeps` damped-Jacobi updates starting from `x`; inputs are left untouched.
pub fn jacobi(
    a: &SparseMatrix,
    b: &[f64],
    x: &[f64],
    omega: f64,
    sweeps: usize,
) -> Result<Vec<f64>> {
    if !a.is_square() || b.len() != a.n_rows() || x.len() != a.n_rows() {
        return Err(Error::dim(
            "jacobi",
            "square A with matching b and x required",
        ));
    }
    let inv_diag = inverse_diagonal(a)?;
    let mut out = x.to_vec();
    jacobi_sweeps(a, &inv_diag, b, &mut out, omega, sweeps);
    Ok(out)
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
