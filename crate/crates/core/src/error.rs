use thiserror::Error;

/// Failure categories shared by every computation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A request that would exceed a configured time or memory budget.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Two independent computations disagreed.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
