//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the wavelet-matching library.
#[derive(Debug, Error)]
pub enum WaveError {
    /// A parameter failed validation (non-finite, out of range, wrong length).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input shapes are inconsistent (length mismatch, non-power-of-two signal).
    #[error("shape error: {0}")]
    Shape(String),

    /// Decomposition plan is incompatible with the signal.
    #[error("plan error: {0}")]
    Plan(String),

    /// A numerical operation has no defined result (zero energy, degenerate shape).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A surface contained no finite value to minimize.
    #[error("no minimum: {0}")]
    NoMinimum(String),

    /// Text input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, WaveError>;
