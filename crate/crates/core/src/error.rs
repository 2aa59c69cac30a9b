use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperadError {
    #[error("arity must be at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("slot {slot} out of range 1..={max}")]
    SlotOutOfRange { slot: usize, max: usize },
    #[error("generator mismatch: {0}")]
    GeneratorMismatch(String),
    #[error("weight mismatch: expected {expected}, got {found}")]
    WeightMismatch { expected: usize, found: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("odd arity {0}: the single partial-associativity relation is not a Groebner basis")]
    OddArity(usize),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid cochain: {0}")]
    InvalidCochain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, OperadError>;
