//! Exact lattice geometry: convex hulls, volumes, mixed volumes, lattice
//! point enumeration and normal fans.

pub(crate) mod hull;
pub(crate) mod linalg;
mod polytope;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use polytope::{mixed_volume, Facet, Polytope};

/// A point of `Z^n`. Ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn origin(n: usize) -> Self {
        LatticePoint(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn dot(&self, v: &[i64]) -> i64 {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn to_big(&self) -> Vec<BigInt> {
        self.0.iter().map(|&x| BigInt::from(x)).collect()
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("empty point set")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid polytope at {0}")]
    Parse(String),
}

pub(crate) fn check_dims(points: &[LatticePoint]) -> Result<usize, GeometryError> {
    let first = points.first().ok_or(GeometryError::Empty)?;
    let n = first.dim();
    for p in points {
        if p.dim() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
    }
    Ok(n)
}
