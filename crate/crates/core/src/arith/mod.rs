//! Exact arithmetic: fields, sparse polynomials and labeled matrices.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod univariate;

pub use field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
pub use matrix::{det, det_symbolic, LabeledMatrix, SYMBOLIC_DET_LIMIT};
pub use poly::{Monomial, MultiPoly, PolyJson};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("symbolic determinant of size {size} exceeds the limit {limit}")]
    SymbolicTooLarge { size: usize, limit: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error at {0}")]
    Parse(String),
}
