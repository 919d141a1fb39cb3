use thiserror::Error;

/// Errors raised by model construction, evaluation and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    #[error("coordinate {index} of the power vector is zero; use the reduced network for boundary points with inactive users")]
    ZeroCoordinate { index: usize },

    #[error("power vector lies outside the constraint set: norm {norm} exceeds budget {budget}")]
    OutsideConstraint { norm: f64, budget: f64 },

    #[error(
        "interference matrix of user {user} is not numerically positive definite (condition estimate {condition:e})"
    )]
    NotPositiveDefinite { user: usize, condition: f64 },

    #[error("mean combined gain of user {user} vanishes (|b| = {magnitude:e}); no admissible combiner exists")]
    VanishingGain { user: usize, magnitude: f64 },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidInput {
        field,
        reason: reason.into(),
    }
}
