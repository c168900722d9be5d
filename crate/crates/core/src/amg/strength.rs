use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Off-diagonal `(i, j)` is kept when `|a_ij| >= eps * max_{k != i} |a_ik|`.
pub(crate) fn is_strong(a_ij: f32, row_max: f64, eps: f64) -> bool {
    let v = (a_ij as f64).abs();
    row_max > 0.0 && v > 0.0 && v >= eps * row_max
}

pub(crate) fn row_max_offdiag(a: &SparseMatrix, i: usize) -> f64 {
    let (cols, vals) = a.row(i);
    cols.iter()
        .zip(vals)
        .filter(|(&j, _)| j != i)
        .fold(0.0, |m, (_, &v)| m.max((v as f64).abs()))
}

pub(crate) fn check_diagonal(a: &SparseMatrix) -> Result<()> {
    match (0..a.n_rows()).find(|&i| a.get(i, i) == 0.0) {
        Some(row) => Err(Error::ZeroDiagonal { row }),
        None => Ok(()),
    }
}

/// Symmetric binary strength pattern with the diagonal always present.
///
/// An edge is strong when it is strong relative to the largest off-diagonal
/// magnitude of its row, in `A` or in `Aᵀ`.
pub fn strength_graph(a: &SparseMatrix, eps_soc: f64) -> Result<SparseMatrix> {
    if !a.is_square() {
        return Err(Error::dim("strength_graph", "matrix must be square"));
    }
    check_diagonal(a)?;
    let n = a.n_rows();
    let mut triplets = Vec::with_capacity(2 * a.nnz());
    for i in 0..n {
        triplets.push((i, i, 1.0));
        let row_max = row_max_offdiag(a, i);
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if j != i && is_strong(v, row_max, eps_soc) {
                triplets.push((i, j, 1.0));
                triplets.push((j, i, 1.0));
            }
        }
    }
    let s = SparseMatrix::from_triplets(n, n, &triplets)?;
    // duplicates were summed; reset to a binary pattern
    s.with_values(vec![1.0; s.nnz()])
}
