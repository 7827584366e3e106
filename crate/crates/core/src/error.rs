use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: u64, cap: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed straight-line program: {0}")]
    MalformedSlp(String),

    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),

    /// A gate whose two constants are both zero.
    #[error("gate {0} has both constants zero")]
    ZeroGate(usize),

    /// A certificate or internal invariant failed; this always indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("catalog cache incompatible: {0}")]
    CacheIncompatible(String),

    #[error("catalog cache corrupt: {0}")]
    CacheCorrupt(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
