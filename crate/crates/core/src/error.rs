use thiserror::Error;

/// Errors raised by ring, closure and theorem-checking operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("ring {0} is infinite and cannot be enumerated")]
    NotEnumerable(String),

    #[error("resource limit exceeded: {what} is {actual}, limit {limit}")]
    ResourceLimit {
        what: String,
        limit: u128,
        actual: u128,
    },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("closure {0} is membership-only; use closure_member")]
    NotSetValued(String),

    #[error("set is not representable: {0}")]
    NotRepresentable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("hypothesis not established: {0}")]
    HypothesisNotEstablished(String),
}

impl Error {
    pub fn resource(
        what: impl Into<String>,
        limit: impl Into<u128>,
        actual: impl Into<u128>,
    ) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            limit: limit.into(),
            actual: actual.into(),
        }
    }

    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
