use ramanpump_core::PhysicsError;
use ramanpump_oracle::OracleError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed config, or a field that breaks an invariant.
    #[error("config error: {0}")]
    Config(String),
    /// Parameters are well formed but outside a formula's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The oracle disagreed with the closed forms.
    #[error("oracle validation failed: {0}")]
    Validation(String),
    #[error("I/O error: {0:#}")]
    Io(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Validation(_) => 3,
        }
    }

    /// Attaches the config section to parameter errors raised by the domain
    /// types, which only know their own field names.
    pub fn physics(section: &str, e: PhysicsError) -> CliError {
        match e {
            PhysicsError::InvalidParameter { field, reason } => {
                CliError::Config(format!("{section}.{field}: {reason}"))
            }
            other => CliError::Domain(other.to_string()),
        }
    }

    pub fn oracle(e: OracleError) -> CliError {
        match e {
            OracleError::InvalidConfig { field, reason } => CliError::Config(format!("{field}: {reason}")),
            OracleError::Physics(p) => CliError::physics("parameters", p),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.into())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
