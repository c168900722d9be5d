use std::path::PathBuf;

/// Errors raised anywhere in setup, solve, inference, generation or I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("sparsity contract violated: {0}")]
    Contract(String),

    #[error("setup failed: {0}")]
    Setup(String),

    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("inference produced non-finite values in stage `{stage}`")]
    Inference { stage: String },

    #[error("tensor `{name}` has shape {found:?}, expected {expected:?}")]
    WeightShape {
        name: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("unsupported weight format version {found} (expected {expected})")]
    WeightVersion { found: u32, expected: u32 },

    #[error("tensor file `{name}` is truncated: expected {expected} bytes, found {found}")]
    WeightTruncated {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("unsupported {what} format version {found}")]
    FormatVersion { what: &'static str, found: String },

    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },

    #[error("invalid usage: {0}")]
    Usage(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Format {
            what,
            detail: detail.into(),
        }
    }

    /// Process exit code for the command-line front end.
    ///
    /// 2 usage, 3 numeric failure, 4 I/O or file format.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Dimension { .. } => 2,
            Error::Contract(_)
            | Error::Setup(_)
            | Error::ZeroDiagonal { .. }
            | Error::Solver(_)
            | Error::Inference { .. } => 3,
            Error::WeightShape { .. }
            | Error::WeightVersion { .. }
            | Error::WeightTruncated { .. }
            | Error::FormatVersion { .. }
            | Error::Format { .. }
            | Error::Io { .. } => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
