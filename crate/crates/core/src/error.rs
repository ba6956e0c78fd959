//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("singular system: pivot {pivot:.3e} below tolerance {tol:.3e} at column {col}")]
    Singular { pivot: f64, tol: f64, col: usize },

    #[error("shape {rows}x{cols} requires {} values, got {actual}", rows * cols)]
    ShapeData {
        rows: usize,
        cols: usize,
        actual: usize,
    },

    #[error("{path}:{line}: parse error: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{path}:{line}: ragged row: expected {expected} columns, found {found}")]
    RaggedRow {
        path: String,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite entry in {context} at row {row}, column {col}")]
    NonFinite {
        context: String,
        row: usize,
        col: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: manifest error: {msg}")]
    Manifest { path: String, msg: String },

    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparam(String),

    #[error("empty batch")]
    EmptyBatch,

    #[error("class {class} has no test instances")]
    EmptyClass { class: usize },

    #[error("no relevant items in gallery")]
    NoRelevantItems,

    #[error(
        "non-finite loss at epoch {epoch}, batch {batch}: total={total}, ce={ce}, reg={reg}, penalty={penalty}"
    )]
    NonFiniteLoss {
        epoch: usize,
        batch: usize,
        total: f64,
        ce: f64,
        reg: f64,
        penalty: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Helper for the pervasive shape-chain checks.
    pub(crate) fn dim(op: &'static str, left: (usize, usize), right: (usize, usize)) -> Self {
        Error::DimMismatch {
            op,
            left_rows: left.0,
            left_cols: left.1,
            right_rows: right.0,
            right_cols: right.1,
        }
    }
}
