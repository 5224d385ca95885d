use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds the supported table (q <= 16)")]
    UnsupportedOrder(u32),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),
    #[error("invalid field order {0}")]
    InvalidFieldOrder(i64),
    #[error("ragged or wrongly sized row: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands live in different ambient spaces")]
    AmbientMismatch,
    #[error("dimension {0} out of range for this ambient space")]
    DimensionOutOfRange(i64),
    #[error("subspace does not lie in the ambient space: {0}")]
    NotInSpace(String),
    #[error("subspace is contained in the hyperplane at infinity")]
    NotAffine,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("form unavailable: {0}")]
    FormUnavailable(String),
    #[error("rational factor does not divide exactly: {0}")]
    DivisibilityViolation(String),
    #[error("anchor subspaces violate the example's incidence conditions: {0}")]
    BadAnchors(String),
    #[error("family is not pairwise t-intersecting")]
    NotIntersecting,
    #[error("family is empty")]
    EmptyFamily,
    #[error("instance too large: {0} k-spaces exceed the enumeration cap {1}")]
    TooLarge(u64, u64),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unknown lemma id: {0}")]
    UnknownLemma(String),
    #[error("grid is empty after hypothesis filtering")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
