use crate::error::{Error, Result};
use crate::sparse::{triple_product, SparseMatrix};

/// Collapses every entry of `a` outside `pattern` onto entries inside it.
///
/// A removed `(i, j, v)` is split evenly across the common neighbours `k` of
/// `i` and `j` in `pattern`: `a_ik += v/m`, `a_kj += v/m`, `a_kk -= v/m`.
/// Without a common neighbour the value is lumped onto `a_ii`. Both moves
/// keep every row sum, so `collapse(A)·1 = A·1`, and both are symmetric
/// under transposition.
pub fn collapse_to_pattern(a: &SparseMatrix, pattern: &SparseMatrix) -> Result<SparseMatrix> {
    if a.n_rows() != pattern.n_rows() || a.n_cols() != pattern.n_cols() || !a.is_square() {
        return Err(Error::dim(
            "collapse_to_pattern",
            "operator and pattern must be the same square shape",
        ));
    }
    let n = a.n_rows();
    let diag_pos: Vec<usize> = (0..n)
        .map(|i| {
            pattern
                .position(i, i)
                .ok_or_else(|| Error::Contract(format!("pattern is missing diagonal entry {i}")))
        })
        .collect::<Result<_>>()?;
    let pattern_t = pattern.transpose();
    let mut values = vec![0f64; pattern.nnz()];
    let mut common = Vec::new();
    for (i, j, v) in a.iter() {
        if let Some(k) = pattern.position(i, j) {
            values[k] += v as f64;
            continue;
        }
        if v == 0.0 {
            continue;
        }
        let v = v as f64;
        // k with (i,k) and (k,j) both in the pattern
        common.clear();
        let (row_i, _) = pattern.row(i);
        let (col_j, _) = pattern_t.row(j);
        let (mut p, mut q) = (0, 0);
        while p < row_i.len() && q < col_j.len() {
            match row_i[p].cmp(&col_j[q]) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    let k = row_i[p];
                    if k != i && k != j {
                        common.push(k);
                    }
                    p += 1;
                    q += 1;
                }
            }
        }
        if common.is_empty() {
            values[diag_pos[i]] += v;
            continue;
        }
        let share = v / common.len() as f64;
        for &k in &common {
            values[pattern.position(i, k).expect("k is a neighbour of i")] += share;
            values[pattern.position(k, j).expect("j is a neighbour of k")] += share;
            values[diag_pos[k]] -= share;
        }
    }
    pattern.with_values(values.into_iter().map(|v| v as f32).collect())
}

/// Sparsified coarse operator: the smoothed Galerkin product collapsed onto `pattern`,
/// normally `sp(R_g A P_g)` of the unsmoothed operators.
pub fn spsa_coarse(
    a: &SparseMatrix,
    p_smooth: &SparseMatrix,
    r_smooth: &SparseMatrix,
    pattern: &SparseMatrix,
) -> Result<SparseMatrix> {
    let galerkin = triple_product(r_smooth, a, p_smooth)?;
    collapse_to_pattern(&galerkin, pattern)
}
