use super::standalone::relres_scale;
use super::{norm2, Preconditioner, SolveReport, SolveStatus, StopCriteria};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

pub const GMRES_RESTART: usize = 2;

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Right-preconditioned flexible GMRES restarted every `restart` inner steps.
///
/// The history holds one entry per inner iteration. At the end of each cycle the
/// last entry is replaced by the true residual of the updated iterate.
pub fn fgmres(
    a: &SparseMatrix,
    b: &[f64],
    x0: &[f64],
    precond: &dyn Preconditioner,
    restart: usize,
    stop: StopCriteria,
    operator_complexity: f64,
) -> Result<(Vec<f64>, SolveReport)> {
    if !a.is_square() || b.len() != a.n_rows() || x0.len() != a.n_rows() {
        return Err(Error::dim(
            "fgmres",
            "square A with matching b and x0 required",
        ));
    }
    if restart == 0 {
        return Err(Error::Usage("restart length must be positive".into()));
    }
    let n = b.len();
    let scale = relres_scale(b);
    let mut x = x0.to_vec();
    let mut r = a.residual(b, &x)?;
    let mut beta = norm2(&r);
    let mut history = vec![beta / scale];
    let mut iters = 0usize;

    let status = 'outer: loop {
        let rel = *history.last().unwrap();
        if !rel.is_finite() {
            break SolveStatus::Diverged;
        }
        if rel <= stop.tol {
            break SolveStatus::Converged;
        }
        if iters >= stop.max_iters {
            break SolveStatus::MaxIterations;
        }

        let m = restart;
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut zs: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut hess = vec![vec![0f64; m]; m + 1];
        let (mut cs, mut sn) = (vec![0f64; m], vec![0f64; m]);
        let mut g = vec![0f64; m + 1];
        g[0] = beta;
        let mut k = 0;
        for j in 0..m {
            let z = precond.apply(&basis[j])?;
            let mut w = a.spmv(&z)?;
            zs.push(z);
            for i in 0..=j {
                let hij = dot(&w, &basis[i]);
                hess[i][j] = hij;
                for (wt, vt) in w.iter_mut().zip(&basis[i]) {
                    *wt -= hij * vt;
                }
            }
            let h_next = norm2(&w);
            hess[j + 1][j] = h_next;
            for i in 0..j {
                let t = cs[i] * hess[i][j] + sn[i] * hess[i + 1][j];
                hess[i + 1][j] = -sn[i] * hess[i][j] + cs[i] * hess[i + 1][j];
                hess[i][j] = t;
            }
            let denom = hess[j][j].hypot(hess[j + 1][j]);
            if denom == 0.0 || !denom.is_finite() {
                if !denom.is_finite() {
                    history.push(f64::NAN);
                    break 'outer SolveStatus::Diverged;
                }
                break;
            }
            cs[j] = hess[j][j] / denom;
            sn[j] = hess[j + 1][j] / denom;
            hess[j][j] = denom;
            hess[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            iters += 1;
            k = j + 1;
            let est = g[j + 1].abs() / scale;
            history.push(est);
            if !est.is_finite() {
                break 'outer SolveStatus::Diverged;
            }
            if est <= stop.tol || iters >= stop.max_iters || h_next == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / h_next).collect());
        }
        if k == 0 {
            // the preconditioned direction is annihilated by A; no progress possible
            break SolveStatus::MaxIterations;
        }

        let mut y = vec![0f64; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for jj in i + 1..k {
                s -= hess[i][jj] * y[jj];
            }
            y[i] = s / hess[i][i];
        }
        for (zi, yi) in zs.iter().zip(&y) {
            for t in 0..n {
                x[t] += yi * zi[t];
            }
        }
        r = a.residual(b, &x)?;
        beta = norm2(&r);
        *history.last_mut().unwrap() = beta / scale;
    };
    Ok((x, SolveReport::finish(history, status, operator_complexity)))
}
