use thiserror::Error;

use crate::kernel::Bidegree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what}: expected bidegree {expected}, found {found}")]
    WrongBidegree {
        what: String,
        expected: Bidegree,
        found: String,
    },

    #[error("tuple violates the membership constraint: {0}")]
    ConstraintViolation(String),

    #[error("{0} is not a Poisson bivector")]
    NotPoisson(String),

    #[error("{0} is not closed")]
    NotClosed(String),

    #[error("{0} is not a Dirac structure")]
    NotDirac(String),

    #[error("omega composed with N is not a 2-form (omega N != N^T omega)")]
    NotSkew,

    #[error("{0} is degenerate over the coefficient field")]
    Singular(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
