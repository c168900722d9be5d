//! Compressed-sparse-row matrices and the kernels the rest of the crate is built on.
//!
//! Values are stored in single precision. Every kernel accumulates in `f64`
//! and dense vectors are `f64` slices, so a solve works on exactly the stored
//! `f32` operator without losing attainable accuracy in the iterates.
//!
//! Structural zeros are never pruned implicitly: a product keeps every entry
//! its operand patterns generate, so pattern comparisons stay exact.

mod io;

pub use io::{read_binary, read_matrix_market, write_binary, write_matrix_market};

use crate::error::{Error, Result};

/// Real CSR matrix with sorted, duplicate-free column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f32>,
}

impl SparseMatrix {
    /// Validates and wraps raw CSR arrays.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f32>,
    ) -> Result<Self> {
        if row_offsets.len() != n_rows + 1 {
            return Err(Error::format(
                "csr matrix",
                format!(
                    "row_offsets has length {}, expected {}",
                    row_offsets.len(),
                    n_rows + 1
                ),
            ));
        }
        if row_offsets[0] != 0 || row_offsets[n_rows] != col_indices.len() {
            return Err(Error::format(
                "csr matrix",
                "row_offsets must start at 0 and end at nnz",
            ));
        }
        if col_indices.len() != values.len() {
            return Err(Error::format(
                "csr matrix",
                "col_indices and values differ in length",
            ));
        }
        for i in 0..n_rows {
            let (start, end) = (row_offsets[i], row_offsets[i + 1]);
            if start > end {
                return Err(Error::format(
                    "csr matrix",
                    format!("row_offsets decrease at row {i}"),
                ));
            }
            let row = &col_indices[start..end];
            if row.iter().any(|&c| c >= n_cols) {
                return Err(Error::format(
                    "csr matrix",
                    format!("column index out of range in row {i}"),
                ));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::format(
                    "csr matrix",
                    format!("columns of row {i} are not strictly increasing"),
                ));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Assembles from (row, col, value) triplets; duplicates are summed in `f64`.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut counts = vec![0usize; n_rows + 1];
        for &(r, c, _) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::dim(
                    "from_triplets",
                    format!("entry ({r}, {c}) outside {n_rows}x{n_cols}"),
                ));
            }
            counts[r + 1] += 1;
        }
        for i in 0..n_rows {
            counts[i + 1] += counts[i];
        }
        let mut cursor = counts.clone();
        let mut entries = vec![(0usize, 0f64); triplets.len()];
        for &(r, c, v) in triplets {
            entries[cursor[r]] = (c, v);
            cursor[r] += 1;
        }
        let mut row_offsets = Vec::with_capacity(n_rows + 1);
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_offsets.push(0);
        for i in 0..n_rows {
            let row = &mut entries[counts[i]..counts[i + 1]];
            row.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < row.len() {
                let col = row[k].0;
                let mut sum = 0.0;
                while k < row.len() && row[k].0 == col {
                    sum += row[k].1;
                    k += 1;
                }
                col_indices.push(col);
                values.push(sum as f32);
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Dense row-major input, storing every nonzero.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::dim("from_dense", "ragged rows"));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n_rows, n_cols, &triplets)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.col_indices.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f32]) {
        let (s, e) = (self.row_offsets[i], self.row_offsets[i + 1]);
        (&self.col_indices[s..e], &self.values[s..e])
    }

    /// `(col, value)` pairs of row `i`.
    pub fn iter_row(&self, i: usize) -> impl Iterator<Item = (usize, f32)> + '_ {
        let (cols, vals) = self.row(i);
        cols.iter().copied().zip(vals.iter().copied())
    }

    /// Iterates `(row, col, value)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f32)> + '_ {
        (0..self.n_rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// Storage position of entry `(i, j)`, if structurally present.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (s, e) = (self.row_offsets[i], self.row_offsets[i + 1]);
        self.col_indices[s..e].binary_search(&j).ok().map(|k| s + k)
    }

    pub fn get(&self, i: usize, j: usize) -> f32 {
        self.position(i, j).map_or(0.0, |k| self.values[k])
    }

    /// Same pattern, new values.
    pub fn with_values(&self, values: Vec<f32>) -> Result<Self> {
        if values.len() != self.nnz() {
            return Err(Error::dim(
                "with_values",
                format!("{} values for {} stored entries", values.len(), self.nnz()),
            ));
        }
        Ok(Self {
            values,
            ..self.clone()
        })
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let values = self
            .values
            .iter()
            .map(|&v| (v as f64 * alpha) as f32)
            .collect();
        Self {
            values,
            ..self.clone()
        }
    }

    /// True when `row_offsets` and `col_indices` are identical.
    pub fn same_pattern(&self, other: &SparseMatrix) -> bool {
        self.n_rows == other.n_rows
            && self.n_cols == other.n_cols
            && self.row_offsets == other.row_offsets
            && self.col_indices == other.col_indices
    }

    /// True when every stored entry of `self` is stored in `other`.
    pub fn pattern_subset_of(&self, other: &SparseMatrix) -> bool {
        self.n_rows == other.n_rows
            && self.n_cols == other.n_cols
            && self.iter().all(|(i, j, _)| other.position(i, j).is_some())
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n_cols]; self.n_rows];
        for (i, j, v) in self.iter() {
            out[i][j] = v as f64;
        }
        out
    }

    /// `y = A x`.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n_rows];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.n_cols || y.len() != self.n_rows {
            return Err(Error::dim(
                "spmv",
                format!(
                    "{}x{} matrix with x of length {} and y of length {}",
                    self.n_rows,
                    self.n_cols,
                    x.len(),
                    y.len()
                ),
            ));
        }
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&j, &v)| v as f64 * x[j]).sum();
        }
        Ok(())
    }

    /// `r = b - A x`.
    pub fn residual(&self, b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let mut r = self.spmv(x)?;
        if b.len() != r.len() {
            return Err(Error::dim("residual", "rhs length differs from row count"));
        }
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        Ok(r)
    }

    pub fn diag(&self) -> Vec<f64> {
        let n = self.n_rows.min(self.n_cols);
        (0..n).map(|i| self.get(i, i) as f64).collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &c in &self.col_indices {
            counts[c + 1] += 1;
        }
        for j in 0..self.n_cols {
            counts[j + 1] += counts[j];
        }
        let mut cursor = counts.clone();
        let mut col_indices = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        // Rows are visited in increasing order, so each transposed row comes out sorted.
        for (i, j, v) in self.iter() {
            col_indices[cursor[j]] = i;
            values[cursor[j]] = v;
            cursor[j] += 1;
        }
        SparseMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_offsets: counts,
            col_indices,
            values,
        }
    }

    /// Numerical symmetry to within `rel_tol` of the largest magnitude; pattern must be symmetric.
    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let t = self.transpose();
        if !self.same_pattern(&t) {
            return false;
        }
        let scale = self
            .values
            .iter()
            .fold(0f64, |m, &v| m.max((v as f64).abs()));
        self.values
            .iter()
            .zip(&t.values)
            .all(|(&a, &b)| ((a - b) as f64).abs() <= rel_tol * scale)
    }

    /// Sum of each row.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows)
            .map(|i| self.row(i).1.iter().map(|&v| v as f64).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|&v| (v as f64).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Structural product `A B`; fill that cancels numerically is kept as an explicit zero.
pub fn spgemm(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix> {
    if a.n_cols != b.n_rows {
        return Err(Error::dim(
            "spgemm",
            format!("{}x{} times {}x{}", a.n_rows, a.n_cols, b.n_rows, b.n_cols),
        ));
    }
    // Dense scratch of width n_cols per output row; this is the setup hot spot.
    let mut acc = vec![0f64; b.n_cols];
    let mut marker = vec![usize::MAX; b.n_cols];
    let mut row_cols: Vec<usize> = Vec::new();
    let mut row_offsets = Vec::with_capacity(a.n_rows + 1);
    let mut col_indices = Vec::new();
    let mut values = Vec::new();
    row_offsets.push(0);
    for i in 0..a.n_rows {
        row_cols.clear();
        let (a_cols, a_vals) = a.row(i);
        for (&k, &a_ik) in a_cols.iter().zip(a_vals) {
            let (b_cols, b_vals) = b.row(k);
            for (&j, &b_kj) in b_cols.iter().zip(b_vals) {
                if marker[j] != i {
                    marker[j] = i;
                    acc[j] = 0.0;
                    row_cols.push(j);
                }
                acc[j] += a_ik as f64 * b_kj as f64;
            }
        }
        row_cols.sort_unstable();
        for &j in &row_cols {
            col_indices.push(j);
            values.push(acc[j] as f32);
        }
        row_offsets.push(col_indices.len());
    }
    Ok(SparseMatrix {
        n_rows: a.n_rows,
        n_cols: b.n_cols,
        row_offsets,
        col_indices,
        values,
    })
}

/// Galerkin triple product `R A P`.
///
/// Each coarse row is accumulated in `f64` through `(R A)` before touching
/// `P`, so the intermediate is never rounded to single precision.
pub fn triple_product(
    r: &SparseMatrix,
    a: &SparseMatrix,
    p: &SparseMatrix,
) -> Result<SparseMatrix> {
    if r.n_cols != a.n_rows || a.n_cols != p.n_rows {
        return Err(Error::dim(
            "triple_product",
            format!(
                "R {}x{}, A {}x{}, P {}x{}",
                r.n_rows, r.n_cols, a.n_rows, a.n_cols, p.n_rows, p.n_cols
            ),
        ));
    }
    let mut ra = vec![0f64; a.n_cols];
    let mut ra_mark = vec![usize::MAX; a.n_cols];
    let mut ra_cols = Vec::new();
    let mut acc = vec![0f64; p.n_cols];
    let mut mark = vec![usize::MAX; p.n_cols];
    let mut out_cols = Vec::new();
    let mut row_offsets = Vec::with_capacity(r.n_rows + 1);
    let mut col_indices = Vec::new();
    let mut values = Vec::new();
    row_offsets.push(0);
    for i in 0..r.n_rows {
        ra_cols.clear();
        let (r_cols, r_vals) = r.row(i);
        for (&k, &r_ik) in r_cols.iter().zip(r_vals) {
            let (a_cols, a_vals) = a.row(k);
            for (&l, &a_kl) in a_cols.iter().zip(a_vals) {
                if ra_mark[l] != i {
                    ra_mark[l] = i;
                    ra[l] = 0.0;
                    ra_cols.push(l);
                }
                ra[l] += r_ik as f64 * a_kl as f64;
            }
        }
        ra_cols.sort_unstable();
        out_cols.clear();
        for &l in &ra_cols {
            let (p_cols, p_vals) = p.row(l);
            for (&j, &p_lj) in p_cols.iter().zip(p_vals) {
                if mark[j] != i {
                    mark[j] = i;
                    acc[j] = 0.0;
                    out_cols.push(j);
                }
                acc[j] += ra[l] * p_lj as f64;
            }
        }
        out_cols.sort_unstable();
        for &j in &out_cols {
            col_indices.push(j);
            values.push(acc[j] as f32);
        }
        row_offsets.push(col_indices.len());
    }
    Ok(SparseMatrix {
        n_rows: r.n_rows,
        n_cols: p.n_cols,
        row_offsets,
        col_indices,
        values,
    })
}

/// `‖A − B‖_F` over the union of both patterns.
pub fn frobenius_diff(a: &SparseMatrix, b: &SparseMatrix) -> Result<f64> {
    if a.n_rows != b.n_rows || a.n_cols != b.n_cols {
        return Err(Error::dim("frobenius_diff", "operand shapes differ"));
    }
    let mut sum = 0f64;
    for i in 0..a.n_rows {
        let (ac, av) = a.row(i);
        let (bc, bv) = b.row(i);
        let (mut p, mut q) = (0, 0);
        while p < ac.len() || q < bc.len() {
            let d = match (ac.get(p), bc.get(q)) {
                (Some(&x), Some(&y)) if x == y => {
                    let d = av[p] as f64 - bv[q] as f64;
                    p += 1;
                    q += 1;
                    d
                }
                (Some(&x), Some(&y)) if x < y => {
                    p += 1;
                    av[p - 1] as f64
                }
                (Some(_), None) => {
                    p += 1;
                    av[p - 1] as f64
                }
                _ => {
                    q += 1;
                    -(bv[q - 1] as f64)
                }
            };
            sum += d * d;
        }
    }
    Ok(sum.sqrt())
}

/// Restricts `A` to `pattern`. Entries of `pattern` absent from `A` are stored as zeros.
///
/// Also returns, per row, the summed value of the entries that were dropped.
pub fn mask_to_pattern(
    a: &SparseMatrix,
    pattern: &SparseMatrix,
) -> Result<(SparseMatrix, Vec<f64>)> {
    if a.n_rows != pattern.n_rows || a.n_cols != pattern.n_cols {
        return Err(Error::dim("mask_to_pattern", "operand shapes differ"));
    }
    let mut values = vec![0f32; pattern.nnz()];
    let mut collapsed = vec![0f64; a.n_rows];
    for (i, j, v) in a.iter() {
        match pattern.position(i, j) {
            Some(k) => values[k] = v,
            None => collapsed[i] += v as f64,
        }
    }
    Ok((pattern.with_values(values)?, collapsed))
}

/// `A + Δ` with `sp(Δ) ⊆ sp(A)`; the result keeps exactly the pattern of `A`.
pub fn add_on_pattern(a: &SparseMatrix, delta: &SparseMatrix) -> Result<SparseMatrix> {
    if a.n_rows != delta.n_rows || a.n_cols != delta.n_cols {
        return Err(Error::dim("add_on_pattern", "operand shapes differ"));
    }
    let mut values = a.values.clone();
    for (i, j, d) in delta.iter() {
        let k = a.position(i, j).ok_or_else(|| {
            Error::Contract(format!(
                "correction entry ({i}, {j}) lies outside the operator pattern"
            ))
        })?;
        values[k] += d;
    }
    a.with_values(values)
}
