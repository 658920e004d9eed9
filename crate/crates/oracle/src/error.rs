use ramanpump_core::PhysicsError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid oracle setting `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error(transparent)]
    Physics(#[from] PhysicsError),

    #[error("integrator failed at t = {t_last}: {reason}")]
    StepFailure { t_last: f64, reason: String },

    /// A density-matrix invariant (trace, Hermiticity, positivity) was broken.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, OracleError>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> OracleError {
    OracleError::InvalidConfig {
        field,
        reason: reason.into(),
    }
}
