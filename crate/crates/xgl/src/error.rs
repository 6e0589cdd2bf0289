//! Crate-wide error type.

/// Errors shared by all modules of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A table or tree exceeds the size this crate is willing to materialize.
    #[error("capacity exceeded: {what} = {got}, maximum is {max}")]
    Capacity {
        what: &'static str,
        got: usize,
        max: usize,
    },

    /// Two operands live on different input sizes.
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    /// An argument is outside the domain an operation is defined on.
    #[error("{0}")]
    Domain(String),

    /// A textual input (truth table, density, protocol tree) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// The linear-program solver gave up (cycling, iteration cap, or a
    /// certificate check failed).
    #[error("linear program solver failed: {0}")]
    Solver(String),

    /// Two independent computation routes that must agree disagreed.
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),

    /// A compiled strategy fell below the bias its construction guarantees.
    #[error("strategy guarantee violated: {0}")]
    GuaranteeViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
