use thiserror::Error;

pub type Result<T> = std::result::Result<T, PhysicsError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    /// Input outside the domain of a formula (zero denominator, non-positive
    /// temperature, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violates a structural invariant of its type.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("unknown spectral line: {0}")]
    UnknownLine(String),
}

impl PhysicsError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        PhysicsError::Domain(msg.into())
    }

    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        PhysicsError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
