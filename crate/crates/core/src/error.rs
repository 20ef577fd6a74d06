use thiserror::Error;

/// Errors raised while building, parsing or querying trees and maps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown leaf `{0}`")]
    UnknownLeaf(String),

    #[error("duplicate leaf `{0}`")]
    DuplicateLeaf(String),

    #[error("leaf subset is not contained in the ground set: `{0}`")]
    NotASubset(String),

    #[error("expected {expected} distinct leaves, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("need at least {needed} leaves, got {got}")]
    TooFewLeaves { needed: usize, got: usize },

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("interior vertex {0} has no label")]
    MissingLabel(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("incomplete map: missing value for ({0})")]
    IncompleteMap(String),

    #[error("conflicting values for ({0})")]
    ConflictingEntry(String),

    #[error("wrong tree flavor: expected {expected}")]
    WrongFlavor { expected: &'static str },

    #[error("enumeration bounds exceeded: {0}")]
    BoundsExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
