use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::strength::{check_diagonal, is_strong, row_max_offdiag};
use super::{Aggregation, SetupConfig};
use crate::error::{Error, Result};
use crate::sparse::{spgemm, SparseMatrix};

const POWER_ITERATIONS: usize = 10;

/// Piecewise-constant prolongation: `P[i, agg(i)] = 1`.
pub fn tentative_prolongation(agg: &Aggregation) -> SparseMatrix {
    let n = agg.n_nodes();
    SparseMatrix::new(
        n,
        agg.n_aggregates(),
        (0..=n).collect(),
        agg.assignment().to_vec(),
        vec![1.0; n],
    )
    .expect("assignment is total")
}

/// Drops weak off-diagonals and lumps them onto the diagonal, so row sums are kept.
pub fn filter_matrix(a: &SparseMatrix, eps_mat: f64) -> Result<SparseMatrix> {
    let n = a.n_rows();
    let mut triplets = Vec::with_capacity(a.nnz());
    for i in 0..n {
        let row_max = row_max_offdiag(a, i);
        let (cols, vals) = a.row(i);
        let mut lumped = 0.0f64;
        for (&j, &v) in cols.iter().zip(vals) {
            if j == i || is_strong(v, row_max, eps_mat) {
                triplets.push((i, j, v as f64));
            } else {
                lumped += v as f64;
            }
        }
        triplets.push((i, i, lumped));
    }
    SparseMatrix::from_triplets(n, a.n_cols(), &triplets)
}

/// Power-iteration estimate of the spectral radius of `D⁻¹ A`.
pub fn spectral_radius_estimate(
    a: &SparseMatrix,
    inv_diag: &[f64],
    iterations: usize,
) -> Result<f64> {
    let n = a.n_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut rho = 0.0;
    for _ in 0..iterations {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v.iter_mut().for_each(|x| *x /= norm);
        let mut w = a.spmv(&v)?;
        w.iter_mut().zip(inv_diag).for_each(|(x, d)| *x *= d);
        rho = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = w;
    }
    Ok(rho)
}

/// Jacobi-smoothed prolongation `(I − ω_P D⁻¹ Â) P_tent` with `ω_P = omega_smooth / ρ(D⁻¹Â)`.
///
/// `D` is the diagonal of the unfiltered `A`; for zero-row-sum `A` the
/// filtered `Â` still annihilates constants, so `P·1 = 1` survives smoothing.
pub fn smooth_prolongation(
    a: &SparseMatrix,
    p_tent: &SparseMatrix,
    config: &SetupConfig,
) -> Result<SparseMatrix> {
    if !a.is_square() || a.n_cols() != p_tent.n_rows() {
        return Err(Error::dim(
            "smooth_prolongation",
            "A must be square and match P",
        ));
    }
    check_diagonal(a)?;
    let inv_diag: Vec<f64> = a.diag().iter().map(|d| 1.0 / d).collect();
    let filtered = filter_matrix(a, config.eps_mat)?;
    let rho = spectral_radius_estimate(&filtered, &inv_diag, POWER_ITERATIONS)?;
    let omega = if rho > 0.0 {
        config.omega_smooth / rho
    } else {
        0.0
    };
    let mut triplets = Vec::with_capacity(filtered.nnz() + a.n_rows());
    for i in 0..a.n_rows() {
        triplets.push((i, i, 1.0));
        let (cols, vals) = filtered.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            triplets.push((i, j, -omega * inv_diag[i] * v as f64));
        }
    }
    let smoother = SparseMatrix::from_triplets(a.n_rows(), a.n_cols(), &triplets)?;
    spgemm(&smoother, p_tent)
}

/// Smoothed restriction. For symmetric `A` this is `P_sᵀ`; otherwise the
/// smoother is built from `Aᵀ` and applied on the left of `P_tentᵀ`.
pub fn smooth_restriction(
    a: &SparseMatrix,
    p_tent: &SparseMatrix,
    p_smooth: &SparseMatrix,
    config: &SetupConfig,
) -> Result<SparseMatrix> {
    if a.is_symmetric(0.0) {
        Ok(p_smooth.transpose())
    } else {
        Ok(smooth_prolongation(&a.transpose(), p_tent, config)?.transpose())
    }
}
