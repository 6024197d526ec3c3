//! Families of supports `A_0, ..., A_k` and their Cayley embedding.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{mixed_volume, GeometryError, LatticePoint, Polytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family has no supports")]
    NoSupports,
    #[error("support {0} is empty")]
    EmptySupport(usize),
    #[error("support {support} point {point}: expected {expected} coordinates")]
    Dimension { support: usize, point: usize, expected: usize },
    #[error("support {support} repeats the point {point:?}")]
    DuplicatePoint { support: usize, point: LatticePoint },
    #[error("expected {expected} supports in dimension {n}, found {found}")]
    NotResultantFamily { n: usize, expected: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Point sets `A_i ⊂ Z^n`, each sorted lexicographically.
///
/// Coefficients are indexed globally in the order `(i, position in A_i)`,
/// which is also the order of the Cayley points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportFamily {
    n: usize,
    supports: Vec<Vec<LatticePoint>>,
}

impl SupportFamily {
    /// Sorts each support; rejects empty supports, repeated points and
    /// inconsistent dimensions.
    pub fn new(n: usize, supports: Vec<Vec<LatticePoint>>) -> Result<Self, FamilyError> {
        if supports.is_empty() {
            return Err(FamilyError::NoSupports);
        }
        let mut sorted = Vec::with_capacity(supports.len());
        for (i, mut s) in supports.into_iter().enumerate() {
            if s.is_empty() {
                return Err(FamilyError::EmptySupport(i));
            }
            for (k, p) in s.iter().enumerate() {
                if p.dim() != n {
                    return Err(FamilyError::Dimension {
                        support: i,
                        point: k,
                        expected: n,
                    });
                }
            }
            s.sort();
            if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
                return Err(FamilyError::DuplicatePoint {
                    support: i,
                    point: w[0].clone(),
                });
            }
            sorted.push(s);
        }
        Ok(SupportFamily { n, supports: sorted })
    }

    /// Convenience constructor from nested integer vectors.
    pub fn from_coords(n: usize, supports: &[&[&[i64]]]) -> Result<Self, FamilyError> {
        Self::new(
            n,
            supports
                .iter()
                .map(|s| s.iter().map(|p| LatticePoint(p.to_vec())).collect())
                .collect(),
        )
    }

    /// Requires exactly `n + 1` supports.
    pub fn require_resultant_shape(&self) -> Result<(), FamilyError> {
        if self.supports.len() != self.n + 1 {
            return Err(FamilyError::NotResultantFamily {
                n: self.n,
                expected: self.n + 1,
                found: self.supports.len(),
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    pub fn supports(&self) -> &[Vec<LatticePoint>] {
        &self.supports
    }

    pub fn support(&self, i: usize) -> &[LatticePoint] {
        &self.supports[i]
    }

    /// Total number of points `|A|`.
    pub fn total_size(&self) -> usize {
        self.supports.iter().map(Vec::len).sum()
    }

    pub fn offset(&self, i: usize) -> usize {
        self.supports[..i].iter().map(Vec::len).sum()
    }

    pub fn global_index(&self, i: usize, k: usize) -> usize {
        self.offset(i) + k
    }

    /// Inverse of [`global_index`](Self::global_index).
    pub fn locate(&self, mut g: usize) -> (usize, usize) {
        for (i, s) in self.supports.iter().enumerate() {
            if g < s.len() {
                return (i, g);
            }
            g -= s.len();
        }
        panic!("global index out of range");
    }

    pub fn point(&self, g: usize) -> &LatticePoint {
        let (i, k) = self.locate(g);
        &self.supports[i][k]
    }

    pub fn position(&self, i: usize, a: &LatticePoint) -> Option<usize> {
        self.supports[i].binary_search(a).ok()
    }

    /// Names of the coefficient variables, `c{i}_{k}`.
    pub fn coefficient_names(&self) -> Arc<Vec<String>> {
        let mut names = Vec::with_capacity(self.total_size());
        for (i, s) in self.supports.iter().enumerate() {
            for k in 0..s.len() {
                names.push(format!("c{i}_{k}"));
            }
        }
        Arc::new(names)
    }

    /// Dimension `n + k - 1` of the Cayley embedding for `k` supports.
    pub fn cayley_dim(&self) -> usize {
        self.n + self.supports.len() - 1
    }

    /// The Cayley point `(a, e_i)` with `e_0 = 0`, in global order.
    pub fn cayley_points(&self) -> Vec<LatticePoint> {
        let k = self.supports.len();
        let mut out = Vec::with_capacity(self.total_size());
        for (i, s) in self.supports.iter().enumerate() {
            for a in s {
                let mut c = a.0.clone();
                c.extend((1..k).map(|j| i64::from(j == i)));
                out.push(LatticePoint(c));
            }
        }
        out
    }

    pub fn newton_polytope(&self, i: usize) -> Result<Polytope, GeometryError> {
        Polytope::hull(&self.supports[i])
    }

    pub fn newton_polytopes(&self) -> Result<Vec<Polytope>, GeometryError> {
        (0..self.len()).map(|i| self.newton_polytope(i)).collect()
    }

    /// Minkowski sum of all Newton polytopes.
    pub fn minkowski_sum(&self) -> Result<Polytope, GeometryError> {
        let polys = self.newton_polytopes()?;
        let mut acc = polys[0].clone();
        for p in &polys[1..] {
            acc = acc.minkowski_sum(p)?;
        }
        Ok(acc)
    }

    /// Mixed volume of all Newton polytopes except the `i`-th.
    pub fn mixed_volume_without(&self, i: usize) -> Result<num_bigint::BigInt, GeometryError> {
        let polys: Vec<Polytope> = self
            .newton_polytopes()?
            .into_iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p)
            .collect();
        mixed_volume(&polys)
    }

    /// Subfamily on the given support indices (same ambient lattice).
    pub fn subfamily(&self, indices: &[usize]) -> SupportFamily {
        SupportFamily {
            n: self.n,
            supports: indices.iter().map(|&i| self.supports[i].clone()).collect(),
        }
    }
}
