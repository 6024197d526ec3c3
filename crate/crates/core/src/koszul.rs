//! Koszul complexes of sparse systems in the Cox ring of the toric variety
//! of the Minkowski sum, and their determinants.
//!
//! A divisor degree is a vector of integer offsets `a_j`, one per ray `u_j`
//! of the fan. Its graded piece has a basis indexed by the lattice points of
//! `{m : <u_j, m> >= -a_j}`. Differentials are written with rows indexed by
//! the source basis, so the first differential is a Macaulay-style matrix.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::matrix::{det, independent_columns, solve};
use crate::arith::{Field, LabeledMatrix, Rationals};
use crate::family::SupportFamily;
use crate::geometry::{GeometryError, LatticePoint, Polytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoszulError {
    #[error("rays do not positively span the space; graded pieces are infinite")]
    Unbounded,
    #[error("degree has {found} offsets for {expected} rays")]
    DegreeLength { expected: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A torus-invariant divisor `sum_j a_j D_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorDegree {
    pub rays: Vec<Vec<i64>>,
    pub offsets: Vec<i64>,
}

impl DivisorDegree {
    pub fn new(rays: Vec<Vec<i64>>, offsets: Vec<i64>) -> Result<Self, KoszulError> {
        if rays.len() != offsets.len() {
            return Err(KoszulError::DegreeLength {
                expected: rays.len(),
                found: offsets.len(),
            });
        }
        Ok(DivisorDegree { rays, offsets })
    }

    /// `self - other` on the same rays.
    pub fn minus(&self, offsets: &[i64]) -> DivisorDegree {
        DivisorDegree {
            rays: self.rays.clone(),
            offsets: self.offsets.iter().zip(offsets).map(|(a, b)| a - b).collect(),
        }
    }

    /// Lattice points of `{m : <u_j, m> >= -a_j}`, lexicographically sorted.
    pub fn polytope_points(&self) -> Result<Vec<LatticePoint>, KoszulError> {
        let n = self.rays.first().map_or(0, Vec::len);
        check_positive_span(&self.rays)?;
        // Vertices of the H-polytope: feasible intersections of n hyperplanes.
        let mut lo: Option<Vec<BigRational>> = None;
        let mut hi: Option<Vec<BigRational>> = None;
        let m = self.rays.len();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let a: Vec<BigRational> = idx
                .iter()
                .flat_map(|&j| self.rays[j].iter().map(|&x| BigRational::from_integer(x.into())))
                .collect();
            let b: Vec<BigRational> = idx
                .iter()
                .map(|&j| BigRational::from_integer((-self.offsets[j]).into()))
                .collect();
            if let Some(x) = solve(&Rationals, n, &a, &b) {
                let feasible = self.rays.iter().zip(&self.offsets).all(|(u, &off)| {
                    let v: BigRational = u
                        .iter()
                        .zip(&x)
                        .map(|(&c, xi)| xi * BigRational::from_integer(c.into()))
                        .fold(BigRational::from_integer(off.into()), |s, t| s + t);
                    !v.is_negative()
                });
                if feasible {
                    match (&mut lo, &mut hi) {
                        (Some(l), Some(h)) => {
                            for k in 0..n {
                                if x[k] < l[k] {
                                    l[k] = x[k].clone();
                                }
                                if x[k] > h[k] {
                                    h[k] = x[k].clone();
                                }
                            }
                        }
                        _ => {
                            lo = Some(x.clone());
                            hi = Some(x);
                        }
                    }
                }
            }
            // Next n-subset of the rays.
            let mut k = n;
            loop {
                if k == 0 {
                    let (Some(lo), Some(hi)) = (lo, hi) else {
                        return Ok(vec![]);
                    };
                    return Ok(self.scan(&lo, &hi));
                }
                k -= 1;
                if idx[k] < m - n + k {
                    idx[k] += 1;
                    for j in k + 1..n {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn scan(&self, lo: &[BigRational], hi: &[BigRational]) -> Vec<LatticePoint> {
        let bounds: Vec<(i64, i64)> = lo
            .iter()
            .zip(hi)
            .map(|(l, h)| (l.ceil().to_integer().to_i64().unwrap(), h.floor().to_integer().to_i64().unwrap()))
            .collect();
        let mut out = Vec::new();
        if bounds.iter().any(|&(l, h)| l > h) {
            return out;
        }
        let mut cur: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        loop {
            let p = LatticePoint(cur.clone());
            if self.rays.iter().zip(&self.offsets).all(|(u, &off)| p.dot(u) + off >= 0) {
                out.push(p);
            }
            let mut k = cur.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < bounds[k].1 {
                    cur[k] += 1;
                    for j in k + 1..cur.len() {
                        cur[j] = bounds[j].0;
                    }
                    break;
                }
            }
        }
    }
}

/// Rays positively span `R^n` iff the origin is interior to their hull.
fn check_positive_span(rays: &[Vec<i64>]) -> Result<(), KoszulError> {
    if rays.is_empty() {
        return Err(KoszulError::Unbounded);
    }
    let pts: Vec<LatticePoint> = rays.iter().map(|r| LatticePoint(r.clone())).collect();
    let hull = Polytope::hull(&pts)?;
    let origin = LatticePoint::origin(rays[0].len());
    if !hull.is_full_dimensional() || hull.facets.iter().any(|f| f.eval(&origin) <= 0) {
        return Err(KoszulError::Unbounded);
    }
    Ok(())
}

/// Rays used for the complex: facet normals of the Minkowski sum together
/// with those of the hull of the lattice points of its `delta` translate.
pub fn fan_rays(family: &SupportFamily, delta: &[BigRational]) -> Result<Vec<Vec<i64>>, KoszulError> {
    let sum = family.minkowski_sum()?;
    let mut rays = sum.normal_fan_rays()?;
    let pts = sum.lattice_points_translated(delta);
    if !pts.is_empty() {
        let hull = Polytope::hull(&pts)?;
        if hull.is_full_dimensional() {
            rays.extend(hull.normal_fan_rays()?);
        }
    }
    rays.sort();
    rays.dedup();
    Ok(rays)
}

/// `a_{ij} = -min_{a in A_i} <u_j, a>`, so that `P_i = {<u_j, m> >= -a_ij}`.
pub fn support_offsets(family: &SupportFamily, rays: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..family.len())
        .map(|i| {
            rays.iter()
                .map(|u| -family.support(i).iter().map(|a| a.dot(u)).min().unwrap())
                .collect()
        })
        .collect()
}

/// The degree whose graded piece is spanned by the lattice points of
/// `Delta + delta`: `a_j = sum_i a_ij - c_j` with `c_j = 1` iff
/// `<u_j, delta> > 0`. Requires `|<u_j, delta>| < 1`.
pub fn degree_choice(family: &SupportFamily, delta: &[BigRational]) -> Result<DivisorDegree, KoszulError> {
    let rays = fan_rays(family, delta)?;
    let offs = support_offsets(family, &rays);
    let offsets = rays
        .iter()
        .enumerate()
        .map(|(j, u)| {
            let s: i64 = offs.iter().map(|o| o[j]).sum();
            let pairing = u
                .iter()
                .zip(delta)
                .map(|(&c, d)| d * BigRational::from_integer(c.into()))
                .fold(BigRational::zero(), |a, b| a + b);
            s - i64::from(pairing.is_positive())
        })
        .collect();
    DivisorDegree::new(rays, offsets)
}

/// Basis element `e_I ⊗ x^m` of the complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KoszulBasis {
    pub subset: Vec<usize>,
    pub point: LatticePoint,
}

/// Entry of a differential: a coefficient index with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedCoeff {
    pub coeff: usize,
    pub negative: bool,
}

pub type Differential = LabeledMatrix<KoszulBasis, KoszulBasis, Option<SignedCoeff>>;

#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub degree: DivisorDegree,
    pub support_offsets: Vec<Vec<i64>>,
    /// `terms[k]` is the basis of the term with `|I| = k`.
    pub terms: Vec<Vec<KoszulBasis>>,
    /// `differentials[k - 1]` maps term `k` to term `k - 1`.
    pub differentials: Vec<Differential>,
}

fn subsets_of_size(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, k, n, cur, out);
            cur.pop();
        }
    }
    rec(0, k, n, &mut cur, &mut out);
    out
}

/// Builds the Koszul complex of the family in degree `degree`.
pub fn build_complex(family: &SupportFamily, degree: &DivisorDegree) -> Result<KoszulComplex, KoszulError> {
    let offs = support_offsets(family, &degree.rays);
    let k_max = family.len();
    let mut terms = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut basis = Vec::new();
        for subset in subsets_of_size(k, k_max) {
            let mut shift = vec![0i64; degree.rays.len()];
            for &i in &subset {
                for (s, o) in shift.iter_mut().zip(&offs[i]) {
                    *s += o;
                }
            }
            for point in degree.minus(&shift).polytope_points()? {
                basis.push(KoszulBasis {
                    subset: subset.clone(),
                    point,
                });
            }
        }
        terms.push(basis);
    }
    let mut differentials = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let target: HashMap<&KoszulBasis, usize> = terms[k - 1].iter().enumerate().map(|(c, b)| (b, c)).collect();
        let ncols = terms[k - 1].len();
        let mut entries = vec![None; terms[k].len() * ncols];
        for (r, src) in terms[k].iter().enumerate() {
            for (pos, &i) in src.subset.iter().enumerate() {
                let rest: Vec<usize> = src.subset.iter().copied().filter(|&j| j != i).collect();
                for (p, a) in family.support(i).iter().enumerate() {
                    let key = KoszulBasis {
                        subset: rest.clone(),
                        point: src.point.add(a),
                    };
                    let c = *target.get(&key).expect("multiplication stays in the graded piece");
                    entries[r * ncols + c] = Some(SignedCoeff {
                        coeff: family.global_index(i, p),
                        negative: pos % 2 == 1,
                    });
                }
            }
        }
        differentials.push(LabeledMatrix::new(terms[k].clone(), terms[k - 1].clone(), entries).expect("distinct labels"));
    }
    Ok(KoszulComplex {
        degree: degree.clone(),
        support_offsets: offs,
        terms,
        differentials,
    })
}

impl KoszulComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Vec::len).collect()
    }

    /// Differential `k` (from term `k` to term `k - 1`) at a specialization.
    pub fn differential_values<F: Field>(&self, k: usize, field: &F, coeffs: &[F::Elem]) -> LabeledMatrix<KoszulBasis, KoszulBasis, F::Elem> {
        self.differentials[k - 1].map(|e| match e {
            None => field.zero(),
            Some(s) if s.negative => field.neg(&coeffs[s.coeff]),
            Some(s) => coeffs[s.coeff].clone(),
        })
    }

    /// Whether each composition of consecutive differentials vanishes.
    pub fn compositions_vanish<F: Field>(&self, field: &F, coeffs: &[F::Elem]) -> bool {
        for k in 2..=self.differentials.len() {
            let upper = self.differential_values(k, field, coeffs);
            let lower = self.differential_values(k - 1, field, coeffs);
            for r in 0..upper.nrows() {
                for c in 0..lower.ncols() {
                    let mut s = field.zero();
                    for m in 0..upper.ncols() {
                        s = field.add(&s, &field.mul(upper.get(r, m), lower.get(m, c)));
                    }
                    if !field.is_zero(&s) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Determinant of the complex, `prod_k det(block_k)^{(-1)^{k+1}}`, from
    /// a chain of invertible blocks chosen with a random column order. Only
    /// defined up to sign. Zero when the complex is not exact at `coeffs`.
    pub fn determinant<F: Field, R: Rng + ?Sized>(&self, field: &F, coeffs: &[F::Elem], rng: &mut R) -> Result<F::Elem, KoszulError> {
        let top = match (0..self.terms.len()).rev().find(|&k| !self.terms[k].is_empty()) {
            Some(k) => k,
            None => return Ok(field.one()),
        };
        let mut excluded: Vec<usize> = Vec::new();
        let mut value = field.one();
        for k in (1..=top).rev() {
            let m = self.differential_values(k, field, coeffs);
            let rows: Vec<usize> = (0..m.nrows()).filter(|r| !excluded.contains(r)).collect();
            let all_cols: Vec<usize> = (0..m.ncols()).collect();
            let sub = m.submatrix(&rows, &all_cols);
            let mut order = all_cols.clone();
            order.shuffle(rng);
            let mut cols = independent_columns(field, rows.len(), m.ncols(), sub.entries(), &order);
            if cols.len() != rows.len() {
                return Ok(field.zero());
            }
            cols.sort_unstable();
            let block = m.submatrix(&rows, &cols);
            let d = det(field, rows.len(), block.entries());
            value = if k % 2 == 1 {
                field.mul(&value, &d)
            } else {
                field.div(&value, &d).expect("independent columns give a nonzero block")
            };
            excluded = cols;
        }
        if excluded.len() != self.terms[0].len() {
            return Ok(field.zero());
        }
        Ok(value)
    }
}

/// Cox-ring exponents of `F_i`: the monomial for `a` is
/// `prod_j X_j^{<u_j, a> + a_ij}`. Returns `(global index, exponents)`.
pub fn homogenize(family: &SupportFamily, rays: &[Vec<i64>], i: usize) -> Vec<(usize, Vec<i64>)> {
    let offs = support_offsets(family, rays);
    family
        .support(i)
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let exps = rays.iter().zip(&offs[i]).map(|(u, o)| a.dot(u) + o).collect();
            (family.global_index(i, k), exps)
        })
        .collect()
}

/// Sets the Cox variables outside `chart` to one; with the rays of `chart`
/// equal to the unit vectors this returns the affine exponents of `F_i`
/// shifted by a fixed monomial.
pub fn dehomogenize(homogeneous: &[(usize, Vec<i64>)], chart: &[usize]) -> Vec<(usize, Vec<i64>)> {
    homogeneous
        .iter()
        .map(|(g, e)| (*g, chart.iter().map(|&j| e[j]).collect()))
        .collect()
}
