use thiserror::Error;

use crate::field::FieldError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown identifier `{name}` at line {line}, column {column}")]
    UnknownIdentifier { name: String, line: usize, column: usize },
    #[error("non-uniform element: {0}")]
    NonUniform(String),
    #[error("relation outside the square of the arrow ideal: {0}")]
    RelationTooShort(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("length cap {cap} exceeded: {context}")]
    CapExceeded { cap: usize, context: String },
    #[error("coefficients are not unique: {0}")]
    NonUnique(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("two-sided reduction stuck: {0}")]
    ReductionStuck(String),
    #[error("algebra of dimension {dim} exceeds oracle bound {bound}")]
    OracleTooLarge { dim: usize, bound: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
