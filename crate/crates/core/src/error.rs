use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input data violates a structural constraint (coprimality, divisibility,
    /// residue ranges, parity).
    #[error("validation error: {0}")]
    Validation(String),
    /// The exact index is not an integer, so no bundle with this data exists.
    #[error("signature not realizable: {0}")]
    NotRealizable(String),
    /// An existence criterion required by the operation does not hold.
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("invalid alpha matrix: {0}")]
    InvalidAlpha(String),
    #[error("degenerate line pair: the two points coincide projectively")]
    DegeneratePair,
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
