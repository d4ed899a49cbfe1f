use std::fmt;
use std::path::PathBuf;

use crate::netbuild::NodeId;

/// Broad failure classes; the CLI maps these onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A caller-supplied parameter is out of range.
    Usage,
    /// Input data is malformed or violates a precondition.
    Data,
    /// An iterative method failed to converge.
    Numerical,
}

#[derive(Debug)]
pub enum Error {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Malformed CSV content. `row` counts data rows from 1 (header excluded).
    Csv {
        row: Option<usize>,
        column: Option<String>,
        message: String,
    },
    ZeroDenominator {
        t: usize,
        variable: String,
    },
    InvalidParameter {
        name: &'static str,
        message: String,
    },
    InsufficientSamples {
        needed: usize,
        got: usize,
    },
    DegenerateSeries {
        which: &'static str,
    },
    LengthMismatch {
        left: usize,
        right: usize,
    },
    /// An estimator failure annotated with the node pair it was evaluating.
    Pair {
        from: NodeId,
        to: NodeId,
        source: Box<Error>,
    },
    NonConvergence {
        iterations: usize,
        residual: f64,
    },
    EmptyGraph,
    Format(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter { .. } => ErrorKind::Usage,
            Error::NonConvergence { .. } => ErrorKind::Numerical,
            Error::Pair { source, .. } => source.kind(),
            _ => ErrorKind::Data,
        }
    }

    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }

    pub(crate) fn csv(row: Option<usize>, column: Option<&str>, message: impl Into<String>) -> Self {
        Error::Csv {
            row,
            column: column.map(str::to_owned),
            message: message.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io { path, source } => write!(f, "{}: {}", path.display(), source),
            Error::Csv { row, column, message } => {
                match (row, column) {
                    (Some(r), Some(c)) => write!(f, "row {r}, column '{c}': ")?,
                    (Some(r), None) => write!(f, "row {r}: ")?,
                    (None, Some(c)) => write!(f, "column '{c}': ")?,
                    (None, None) => {}
                }
                f.write_str(message)
            }
            Error::ZeroDenominator { t, variable } => write!(
                f,
                "zero value at time index {t} in variable '{variable}' cannot be a rate-of-change denominator"
            ),
            Error::InvalidParameter { name, message } => write!(f, "invalid {name}: {message}"),
            Error::InsufficientSamples { needed, got } => {
                write!(f, "insufficient samples: need at least {needed}, got {got}")
            }
            Error::DegenerateSeries { which } => {
                write!(f, "degenerate series: {which} input has zero variance")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::Pair { from, to, source } => write!(f, "pair {from} -> {to}: {source}"),
            Error::NonConvergence { iterations, residual } => write!(
                f,
                "pagerank did not converge after {iterations} iterations (L1 residual {residual:e})"
            ),
            Error::EmptyGraph => f.write_str("graph has no nodes"),
            Error::Format(msg) => write!(f, "format error: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            Error::Pair { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
