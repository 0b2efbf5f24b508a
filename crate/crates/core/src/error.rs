use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An intermediate object would exceed the configured cell budget.
    #[error("capacity exceeded for {what}: {needed} cells requested, cap is {cap}")]
    Capacity {
        what: &'static str,
        needed: u128,
        cap: usize,
    },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("index {index:?} out of range for dimension {dim}")]
    IndexOutOfRange { index: Vec<usize>, dim: usize },

    #[error("index {index:?} has {found} modes, tensor order is {order}")]
    IndexArity {
        index: Vec<usize>,
        order: usize,
        found: usize,
    },

    #[error("exact-zero coefficient at {index:?}")]
    ZeroCoefficient { index: Vec<usize> },

    #[error("duplicate entry at {index:?}")]
    DuplicateEntry { index: Vec<usize> },

    #[error("invalid hypergraph: {0}")]
    Hypergraph(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// Desk-scale guard of an exhaustive or symbolic routine.
    #[error("size guard: {0}")]
    Guard(String),

    #[error("line {line}, column {column}: {kind}: {message}")]
    Parse {
        kind: ParseErrorKind,
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error")]
    Syntax,
    #[error("index out of range")]
    OutOfRange,
    #[error("duplicate entry")]
    Duplicate,
    #[error("parity violation")]
    Parity,
    #[error("invalid value")]
    Value,
}

impl Error {
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. } | Error::Guard(_))
    }
}
