use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown constructor `{name}` at byte {offset}")]
    UnknownConstructor { offset: usize, name: String },

    #[error("order must be a positive integer (byte {offset})")]
    NonPositiveOrder { offset: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error(
        "not a complex Hadamard matrix: unimodularity deviation {unimodular:.3e}, \
         orthogonality deviation {orthogonal:.3e}"
    )]
    NotHadamard { unimodular: f64, orthogonal: f64 },

    #[error("size cap exceeded: {what} needs dimension {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: usize,
    },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }

    /// True for errors caused by malformed user input (specs, files, arguments).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownConstructor { .. }
                | Error::NonPositiveOrder { .. }
                | Error::InvalidArgument(_)
                | Error::ShapeMismatch { .. }
                | Error::NotSquare { .. }
                | Error::IndexOutOfRange(_)
                | Error::Io { .. }
                | Error::Format { .. }
        )
    }
}
