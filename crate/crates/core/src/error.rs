//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed rational {0:?}")]
    Rational(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("malformed json: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input data violates a standing hypothesis (tameness, squarefreeness, shapes).
    #[error("invalid input: {0}")]
    Spec(String),
    #[error("prime {p} divides the conductor {q}")]
    Ramified { p: u64, q: i64 },
    #[error("series context mismatch: {0}")]
    Context(String),
    #[error("inner series has a nonzero constant term (component {0})")]
    ConstantTerm(usize),
    #[error("linear part is not the identity")]
    LinearPart,
    #[error("the law fails the group axioms: {0}")]
    Axioms(String),
    #[error("integrality failure: {0}")]
    Integrality(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
