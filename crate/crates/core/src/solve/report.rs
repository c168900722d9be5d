use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    Diverged,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterations => "max_iters",
            SolveStatus::Diverged => "diverged",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the hierarchy was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveMode {
    Standalone,
    Gmres,
}

impl SolveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMode::Standalone => "standalone",
            SolveMode::Gmres => "gmres",
        }
    }
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standalone" => Ok(SolveMode::Standalone),
            "gmres" => Ok(SolveMode::Gmres),
            other => Err(Error::Usage(format!("unknown solve mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub converged: bool,
    pub status: SolveStatus,
    /// Relative residuals; entry 0 belongs to the initial guess.
    pub residual_history: Vec<f64>,
    pub convergence_rate: f64,
    pub setup_seconds: f64,
    pub operator_complexity: f64,
}

/// Identifies the run a report belongs to when written as a CSV row.
#[derive(Debug, Clone)]
pub struct RunLabel<'a> {
    pub problem_id: &'a str,
    pub variant: &'a str,
    pub mode: SolveMode,
    pub n: usize,
    pub nnz: usize,
}

pub const REPORT_CSV_HEADER: &str =
    "problem_id,variant,mode,n,nnz,iterations,converged,rate,setup_seconds,op_complexity,status";

impl SolveReport {
    pub(crate) fn finish(history: Vec<f64>, status: SolveStatus, operator_complexity: f64) -> Self {
        let iterations = history.len() - 1;
        Self {
            iterations,
            converged: status == SolveStatus::Converged,
            status,
            convergence_rate: convergence_rate(&history),
            residual_history: history,
            setup_seconds: 0.0,
            operator_complexity,
        }
    }

    pub fn final_relres(&self) -> f64 {
        *self
            .residual_history
            .last()
            .expect("history is never empty")
    }

    pub fn csv_row(&self, label: &RunLabel<'_>) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{}",
            label.problem_id,
            label.variant,
            label.mode,
            label.n,
            label.nnz,
            self.iterations,
            self.converged,
            self.convergence_rate,
            self.setup_seconds,
            self.operator_complexity,
            self.status
        )
    }

    /// `iteration,relres` with one row per history entry.
    pub fn write_history_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "iteration,relres")?;
        for (k, r) in self.residual_history.iter().enumerate() {
            writeln!(out, "{k},{r:e}")?;
        }
        Ok(())
    }
}

/// Geometric-mean residual reduction per iteration over the second half of the history.
///
/// Returns 0 for an empty iteration count or a residual that reached exactly zero.
pub fn convergence_rate(history: &[f64]) -> f64 {
    let k = history.len().saturating_sub(1);
    if k == 0 {
        return 0.0;
    }
    let mid = k / 2;
    let (start, end) = (history[mid], history[k]);
    if start == 0.0 || end == 0.0 {
        return 0.0;
    }
    (end / start).powf(1.0 / (k - mid) as f64)
}
