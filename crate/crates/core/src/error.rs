use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: wrong lengths, bad indices, zero rays.
    #[error("structural error: {0}")]
    Structural(String),

    /// The input is well formed but is not a configuration of the supported class.
    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfiguration(Vec<String>),

    /// A precondition on the mathematical input failed (e.g. a class that is
    /// not pseudoeffective was handed to the Zariski decomposition).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Size guardrail of the polyhedral engine.
    #[error("guardrail: {0}")]
    Guardrail(String),

    /// An internal consistency check failed. This always indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
