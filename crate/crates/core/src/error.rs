use thiserror::Error;

/// Why an erasure decode gave up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DecodeFailure {
    #[error("too many erasures: {erasures} erased, at most {correctable} correctable")]
    TooManyErasures { erasures: usize, correctable: usize },
    #[error("received word is not a codeword (mismatch at position {position})")]
    Corrupt { position: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Caller violated a precondition (wrong lengths, mismatched fields, bad flags).
    #[error("usage error: {0}")]
    Usage(String),
    /// Mathematical domain error such as inverting zero.
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameters are valid but the scheme cannot be instantiated with them.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("decode failure: {0}")]
    Decode(#[from] DecodeFailure),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }
}
