//! Aggregation-based hierarchy construction: strength of connection, greedy
//! aggregation, tentative and smoothed transfer operators, Galerkin and
//! sparsified coarse operators.

mod aggregate;
mod dump;
mod hierarchy;
mod prolong;
mod sparsify;
mod strength;

use std::fmt;
use std::str::FromStr;

pub use aggregate::{aggregate, aggregate_in_order, Aggregation};
pub use dump::{load_hierarchy, save_hierarchy};
pub use hierarchy::{build_hierarchy, level_seed, operator_complexity, Hierarchy, Level};
pub use prolong::{
    filter_matrix, smooth_prolongation, smooth_restriction, spectral_radius_estimate,
    tentative_prolongation,
};
pub use sparsify::{collapse_to_pattern, spsa_coarse};
pub use strength::strength_graph;

use crate::error::Error;

/// Which hierarchy a setup produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Unsmoothed aggregation, Galerkin coarse operators.
    Agg,
    /// Smoothed aggregation.
    Sa,
    /// Smoothed transfer operators with coarse operators sparsified onto the unsmoothed pattern.
    SpSa,
    /// Unsmoothed aggregation augmented with learned corrections.
    RapNet,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Agg => "agg",
            Variant::Sa => "sa",
            Variant::SpSa => "spsa",
            Variant::RapNet => "rapnet",
        }
    }

    /// Coarsest-level solver each variant is evaluated with.
    pub fn default_coarse_solver(self) -> CoarseSolver {
        match self {
            Variant::RapNet => CoarseSolver::Jacobi(2),
            _ => CoarseSolver::DenseLu,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "agg" => Ok(Variant::Agg),
            "sa" => Ok(Variant::Sa),
            "spsa" => Ok(Variant::SpSa),
            "rapnet" => Ok(Variant::RapNet),
            other => Err(Error::Usage(format!("unknown variant `{other}`"))),
        }
    }
}

/// Solver applied on the coarsest level of a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoarseSolver {
    /// Dense LU with partial pivoting; rank-deficient pivots (singular
    /// Laplacians) are skipped, which solves consistent systems.
    DenseLu,
    /// `k` damped-Jacobi sweeps from a zero initial guess.
    Jacobi(usize),
}

impl fmt::Display for CoarseSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoarseSolver::DenseLu => f.write_str("lu"),
            CoarseSolver::Jacobi(k) => write!(f, "jacobi:{k}"),
        }
    }
}

impl FromStr for CoarseSolver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.to_ascii_lowercase();
        if s == "lu" {
            return Ok(CoarseSolver::DenseLu);
        }
        s.strip_prefix("jacobi:")
            .and_then(|k| k.parse().ok())
            .filter(|&k| k > 0)
            .map(CoarseSolver::Jacobi)
            .ok_or_else(|| {
                Error::Usage(format!("unknown coarse solver `{s}` (use lu or jacobi:K)"))
            })
    }
}

/// Setup parameters shared by all variants.
#[derive(Debug, Clone, PartialEq)]
pub struct SetupConfig {
    /// Strength-of-connection threshold.
    pub eps_soc: f64,
    /// Threshold below which entries are lumped before prolongation smoothing.
    pub eps_mat: f64,
    /// Numerator of the prolongation smoothing weight `omega_smooth / ρ(D⁻¹Â)`.
    pub omega_smooth: f64,
    /// Total number of levels, finest included.
    pub max_levels: usize,
    /// Coarsening stops once a level has at most this many rows.
    pub min_coarse_size: usize,
}

impl Default for SetupConfig {
    fn default() -> Self {
        Self {
            eps_soc: 0.5,
            eps_mat: 0.02,
            omega_smooth: 4.0 / 3.0,
            max_levels: 10,
            min_coarse_size: 64,
        }
    }
}

impl SetupConfig {
    pub fn with_max_levels(mut self, max_levels: usize) -> Self {
        self.max_levels = max_levels;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.eps_soc > 0.0 && self.eps_soc < 1.0) {
            return Err(Error::Usage(format!(
                "eps_soc must lie in (0, 1), got {}",
                self.eps_soc
            )));
        }
        if self.eps_mat < 0.0 {
            return Err(Error::Usage(format!(
                "eps_mat must be nonnegative, got {}",
                self.eps_mat
            )));
        }
        if self.max_levels == 0 {
            return Err(Error::Usage("max_levels must be at least 1".into()));
        }
        Ok(())
    }
}
