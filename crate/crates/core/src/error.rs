use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Bad arguments or malformed input.
    #[error("usage error: {0}")]
    Usage(String),

    /// The algorithm tried to hold more state than its `C * s` allowance.
    #[error("budget exceeded: requested {requested} bits with {live} live of {capacity}")]
    BudgetExceeded {
        requested: u64,
        live: u64,
        capacity: u64,
    },

    #[error("not found")]
    NotFound,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
