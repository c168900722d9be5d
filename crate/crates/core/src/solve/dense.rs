use crate::sparse::SparseMatrix;

/// Dense LU with partial pivoting for the coarsest level.
///
/// Columns whose best pivot falls below `1e-10 · max|a_ij|` are treated as
/// rank deficient: they are not eliminated and the matching unknown is set to
/// zero. For a consistent singular system (graph Laplacians) this returns one
/// particular solution.
#[derive(Debug, Clone)]
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    null: Vec<bool>,
}

impl DenseLu {
    pub fn factor(a: &SparseMatrix) -> Self {
        let n = a.n_rows();
        let mut lu = vec![0f64; n * n];
        for (i, j, v) in a.iter() {
            lu[i * n + j] = v as f64;
        }
        let scale = lu.iter().fold(0f64, |m, v| m.max(v.abs()));
        let tiny = 1e-10 * scale;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut null = vec![false; n];
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if pmax <= tiny {
                null[k] = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / pivot;
                lu[i * n + k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= l * lu[k * n + j];
                    }
                }
            }
        }
        Self { n, lu, perm, null }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Number of columns skipped as rank deficient.
    pub fn rank_deficiency(&self) -> usize {
        self.null.iter().filter(|&&z| z).count()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                if !self.null[k] {
                    s -= self.lu[i * n + k] * y[k];
                }
            }
            y[i] = s;
        }
        let mut x = vec![0f64; n];
        for i in (0..n).rev() {
            if self.null[i] {
                continue;
            }
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }
}
