use thiserror::Error;

use crate::ring::Code;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("projected ring size {projected} exceeds the limit of {limit}")]
    SizeExceeded { projected: u128, limit: usize },

    #[error("ring axiom violated: {axiom} at {witness:?}")]
    AxiomViolation { axiom: String, witness: Vec<Code> },

    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),

    #[error("element #{0} is not idempotent")]
    NotIdempotent(Code),

    #[error("the given set is not a two-sided ideal: {0}")]
    NotAnIdeal(String),

    #[error("element belongs to a different ring")]
    ForeignElement,

    #[error("element code {code} out of range for a ring of size {size}")]
    CodeOutOfRange { code: u64, size: usize },

    #[error("operation `{0}` needs element enumeration and is unsupported on the integers")]
    UnsupportedPredicate(&'static str),

    #[error("operation requires a {expected} ring")]
    WrongRingKind { expected: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("no decomposition found for #{0} (engine invariant violated)")]
    DecompositionNotFound(Code),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, RingError>;
