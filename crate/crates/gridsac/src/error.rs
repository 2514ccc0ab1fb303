//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by estimation, partitioning and I/O.
#[derive(Debug, Error)]
pub enum GridsacError {
    /// Invalid configuration (degenerate extents, bad thresholds, missing grid).
    #[error("configuration error: {0}")]
    Config(String),
    /// Input data is malformed (non-finite coordinates, bad score range).
    #[error("data error: {0}")]
    Data(String),
    /// A matches file could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// Numerical failure (rank-deficient system, ill-conditioned solve).
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// No model could be estimated from the data.
    #[error("no model found: {0}")]
    NoModel(String),
    /// Underlying I/O error.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GridsacError>;
