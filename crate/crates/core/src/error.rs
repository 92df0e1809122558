use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("signature mismatch: ({0},{1}) vs ({2},{3})")]
    SignatureMismatch(usize, usize, usize, usize),

    /// A denominator of the coefficient recurrence vanishes.
    #[error("resonant weight: {factor} = 0 ({weight} = {value}, level {level})")]
    ResonantWeight {
        /// Human-readable form of the vanishing factor, e.g. `2(r+1)+n(2λ-1)`.
        factor: String,
        /// `lambda` or `mu`.
        weight: &'static str,
        value: Box<Rational>,
        level: usize,
    },

    #[error("recurrence system is inconsistent at {0}")]
    InconsistentSystem(String),

    #[error("weight mismatch: expected {expected}, got {actual}")]
    WeightMismatch { expected: Box<Rational>, actual: Box<Rational> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
