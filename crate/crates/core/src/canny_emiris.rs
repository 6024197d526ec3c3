//! Canny-Emiris matrices: the square matrix `H` built from a tight mixed
//! subdivision and a generic translation `delta`, and its principal
//! submatrix `E` on the rows of non-mixed cells. The sparse resultant is
//! `det(H) / det(E)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::matrix::{det, det_symbolic, SYMBOLIC_DET_LIMIT};
use crate::arith::univariate::{divrem, eval as eval_uni, interpolate};
use crate::arith::{ArithError, Field, LabeledMatrix, MultiPoly, PrimeField, Rationals};
use crate::family::{FamilyError, SupportFamily};
use crate::geometry::{GeometryError, LatticePoint};
use crate::sampling::planted_root;
use crate::subdivision::{CellKind, MixedSubdivision, SubdivisionError};

/// Number of random translations tried before giving up.
pub const DELTA_SAMPLES: usize = 64;

/// Subdivisions tried when a matrix pair fails certification.
pub const DEFAULT_ATTEMPTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CeError {
    #[error("mixed subdivision is not tight")]
    NotTight,
    #[error("no generic translation found after {0} samples")]
    RetryExhausted(usize),
    #[error("translation is not generic: {0:?} lies on a cell boundary")]
    DeltaNotGeneric(LatticePoint),
    #[error("translation has {found} entries, expected {expected}")]
    DeltaLength { expected: usize, found: usize },
    #[error("det(E) does not divide det(H)")]
    NotDivisible,
    #[error("det(E) vanishes identically under this specialization")]
    DegenerateSpecialization,
    #[error("row {0:?} needs a column outside the row set")]
    ClosureViolation(LatticePoint),
    #[error("Minkowski sum is not full-dimensional")]
    NotFullDimensional,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Sample(#[from] crate::sampling::SampleError),
}

impl CeError {
    /// True for failures of the method on well-formed input.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            CeError::NotDivisible | CeError::RetryExhausted(_) | CeError::NotTight | CeError::DegenerateSpecialization
        )
    }
}

/// Row content of one lattice point `b` of `Delta + delta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowEntry {
    pub point: LatticePoint,
    /// The support `i(b)`: largest index with a zero-dimensional component.
    pub support: usize,
    /// Position of `a(b)` in `A_{i(b)}`.
    pub position: usize,
    /// Index of the cell containing `b - delta`.
    pub cell: usize,
    pub nonmixed: bool,
}

/// The pair `(H, E)`; entries of `H` reference coefficients by global index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CeMatrices {
    pub delta: Vec<BigRational>,
    /// Row content for the rows of `h`, in the same order.
    pub rows: Vec<RowEntry>,
    pub h: LabeledMatrix<LatticePoint, LatticePoint, Option<usize>>,
    /// Labels of the rows and columns of `E`.
    pub e_labels: Vec<LatticePoint>,
    /// Size of the full point set before any greedy reduction.
    pub full_size: usize,
}

/// Options for building and certifying matrix pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CeOptions {
    pub greedy: bool,
    pub delta: Option<Vec<BigRational>>,
    /// Fixed lifting levels; when set only one attempt is made.
    pub lifting: Option<Vec<Vec<BigRational>>>,
    pub attempts: usize,
    pub symbolic_limit: usize,
}

impl Default for CeOptions {
    fn default() -> Self {
        CeOptions {
            greedy: false,
            delta: None,
            lifting: None,
            attempts: DEFAULT_ATTEMPTS,
            symbolic_limit: SYMBOLIC_DET_LIMIT,
        }
    }
}

fn minus_delta(b: &LatticePoint, delta: &[BigRational]) -> Vec<BigRational> {
    b.coords()
        .iter()
        .zip(delta)
        .map(|(&c, d)| BigRational::from_integer(c.into()) - d)
        .collect()
}

/// Cell of `sub` whose interior contains `b - delta`, if any.
fn locate_cell(sub: &MixedSubdivision, b: &LatticePoint, delta: &[BigRational]) -> Option<usize> {
    let x = minus_delta(b, delta);
    sub.cells
        .iter()
        .position(|c| c.polytope.contains_rational_strictly(&x))
}

/// Whether every lattice point of `Delta + delta` lies in the interior of a
/// cell once translated back by `delta`.
pub fn delta_is_generic(sub: &MixedSubdivision, delta: &[BigRational]) -> Result<bool, CeError> {
    let delta_poly = sub.family.minkowski_sum()?;
    Ok(delta_poly
        .lattice_points_translated(delta)
        .iter()
        .all(|b| locate_cell(sub, b, delta).is_some()))
}

/// Samples a small generic translation with `|<u, delta>| < 1` for every
/// facet normal `u` of the Minkowski sum.
pub fn select_delta<R: Rng + ?Sized>(sub: &MixedSubdivision, rng: &mut R) -> Result<Vec<BigRational>, CeError> {
    let delta_poly = sub.family.minkowski_sum()?;
    if !delta_poly.is_full_dimensional() {
        return Err(CeError::NotFullDimensional);
    }
    let rays = delta_poly.normal_fan_rays()?;
    let l1 = rays
        .iter()
        .map(|u| u.iter().map(|x| x.abs()).sum::<i64>())
        .max()
        .unwrap_or(1)
        .max(1);
    const GRID: i64 = 4096;
    let den = BigInt::from(GRID * l1);
    for _ in 0..DELTA_SAMPLES {
        let delta: Vec<BigRational> = (0..sub.family.n())
            .map(|_| BigRational::new(rng.gen_range(1..GRID).into(), den.clone()))
            .collect();
        if delta_is_generic(sub, &delta)? {
            return Ok(delta);
        }
    }
    Err(CeError::RetryExhausted(DELTA_SAMPLES))
}

/// Row content of every lattice point of `Delta + delta`, in lexicographic order.
pub fn row_content(sub: &MixedSubdivision, delta: &[BigRational]) -> Result<Vec<RowEntry>, CeError> {
    if delta.len() != sub.family.n() {
        return Err(CeError::DeltaLength {
            expected: sub.family.n(),
            found: delta.len(),
        });
    }
    if !sub.is_tight() {
        return Err(CeError::NotTight);
    }
    let delta_poly = sub.family.minkowski_sum()?;
    delta_poly
        .lattice_points_translated(delta)
        .into_iter()
        .map(|b| {
            let cell = locate_cell(sub, &b, delta).ok_or_else(|| CeError::DeltaNotGeneric(b.clone()))?;
            let c = &sub.cells[cell];
            let zeros = c.zero_dim_components();
            let support = *zeros.last().expect("tight cells have a point component");
            Ok(RowEntry {
                point: b,
                support,
                position: c.components[support][0],
                cell,
                nonmixed: c.kind == CellKind::NonMixed,
            })
        })
        .collect()
}

/// Builds `H` and `E`. With `greedy`, keeps only the smallest row set that
/// contains all mixed rows and is closed under the columns its rows use.
pub fn build_matrices(sub: &MixedSubdivision, delta: &[BigRational], greedy: bool) -> Result<CeMatrices, CeError> {
    let fam = &sub.family;
    let rows = row_content(sub, delta)?;
    let full_size = rows.len();
    let index: BTreeMap<&LatticePoint, usize> = rows.iter().enumerate().map(|(k, r)| (&r.point, k)).collect();
    // Columns used by each row: b - a(b) + A_{i(b)}.
    let mut used: Vec<Vec<(usize, usize)>> = Vec::with_capacity(rows.len());
    for r in &rows {
        let a = &fam.support(r.support)[r.position];
        let shift = r.point.sub(a);
        let mut cols = Vec::new();
        for (k, a2) in fam.support(r.support).iter().enumerate() {
            let col = shift.add(a2);
            let c = *index.get(&col).ok_or_else(|| CeError::ClosureViolation(r.point.clone()))?;
            cols.push((c, fam.global_index(r.support, k)));
        }
        used.push(cols);
    }
    let keep: Vec<usize> = if greedy {
        let mut set: BTreeSet<usize> = (0..rows.len()).filter(|&k| !rows[k].nonmixed).collect();
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(k) = stack.pop() {
            for &(c, _) in &used[k] {
                if set.insert(c) {
                    stack.push(c);
                }
            }
        }
        set.into_iter().collect()
    } else {
        (0..rows.len()).collect()
    };
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(p, &k)| (k, p)).collect();
    let m = keep.len();
    let mut entries: Vec<Option<usize>> = vec![None; m * m];
    for (p, &k) in keep.iter().enumerate() {
        for &(c, g) in &used[k] {
            let q = *pos.get(&c).ok_or_else(|| CeError::ClosureViolation(rows[k].point.clone()))?;
            entries[p * m + q] = Some(g);
        }
    }
    let labels: Vec<LatticePoint> = keep.iter().map(|&k| rows[k].point.clone()).collect();
    let e_labels = keep
        .iter()
        .filter(|&&k| rows[k].nonmixed)
        .map(|&k| rows[k].point.clone())
        .collect();
    Ok(CeMatrices {
        delta: delta.to_vec(),
        rows: keep.iter().map(|&k| rows[k].clone()).collect(),
        h: LabeledMatrix::new(labels.clone(), labels, entries)?,
        e_labels,
        full_size,
    })
}

impl CeMatrices {
    pub fn size(&self) -> usize {
        self.h.nrows()
    }

    fn e_positions(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.nonmixed)
            .map(|(k, _)| k)
            .collect()
    }

    /// `H` with coefficients substituted.
    pub fn h_values<F: Field>(&self, field: &F, coeffs: &[F::Elem]) -> LabeledMatrix<LatticePoint, LatticePoint, F::Elem> {
        self.h.map(|e| match e {
            Some(g) => coeffs[*g].clone(),
            None => field.zero(),
        })
    }

    pub fn e_values<F: Field>(&self, field: &F, coeffs: &[F::Elem]) -> LabeledMatrix<LatticePoint, LatticePoint, F::Elem> {
        let pos = self.e_positions();
        self.h_values(field, coeffs).submatrix(&pos, &pos)
    }

    pub fn det_h<F: Field>(&self, field: &F, coeffs: &[F::Elem]) -> F::Elem {
        det(field, self.size(), self.h_values(field, coeffs).entries())
    }

    pub fn det_e<F: Field>(&self, field: &F, coeffs: &[F::Elem]) -> F::Elem {
        let e = self.e_values(field, coeffs);
        det(field, e.nrows(), e.entries())
    }

    /// Restrictions of `det(H)` and `det(E)` to the line `base + t * dir`.
    fn on_line<F: Field>(&self, field: &F, base: &[F::Elem], dir: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let nodes: Vec<F::Elem> = (1..=self.size() as i64 + 1).map(|t| field.from_i64(t)).collect();
        let mut hs = Vec::with_capacity(nodes.len());
        let mut es = Vec::with_capacity(nodes.len());
        for t in &nodes {
            let c: Vec<F::Elem> = base
                .iter()
                .zip(dir)
                .map(|(b, d)| field.add(b, &field.mul(t, d)))
                .collect();
            hs.push(self.det_h(field, &c));
            es.push(self.det_e(field, &c));
        }
        (interpolate(field, &nodes, &hs), interpolate(field, &nodes, &es))
    }

    /// Randomized check that `det(E)` divides `det(H)` and that the quotient
    /// vanishes on systems with a common root. Computed modulo a prime.
    pub fn certify<R: Rng + ?Sized>(&self, family: &SupportFamily, rng: &mut R) -> Result<(), CeError> {
        let f = PrimeField::default();
        let size = family.total_size();
        let base: Vec<u64> = (0..size).map(|_| f.random(rng)).collect();
        let dir: Vec<u64> = (0..size).map(|_| f.random(rng)).collect();
        let (num, den) = self.on_line(&f, &base, &dir);
        match divrem(&f, &num, &den) {
            Some((_, rem)) if rem.is_empty() => {}
            _ => return Err(CeError::NotDivisible),
        }
        let template = vec![None; size];
        for _ in 0..8 {
            let (c, _) = planted_root(family, &f, &template, rng)?;
            if f.is_zero(&self.det_e(&f, &c)) {
                continue;
            }
            return if f.is_zero(&self.det_h(&f, &c)) {
                Ok(())
            } else {
                Err(CeError::NotDivisible)
            };
        }
        Err(CeError::NotDivisible)
    }

    /// `det(H)/det(E)` at a specialization. When `det(E)` vanishes there the
    /// quotient is evaluated through its restriction to a random line.
    pub fn evaluate<F: Field, R: Rng + ?Sized>(&self, field: &F, coeffs: &[F::Elem], rng: &mut R) -> Result<F::Elem, CeError> {
        let de = self.det_e(field, coeffs);
        if let Some(inv) = field.inv(&de) {
            return Ok(field.mul(&self.det_h(field, coeffs), &inv));
        }
        for _ in 0..8 {
            let dir: Vec<F::Elem> = (0..coeffs.len()).map(|_| field.random(rng)).collect();
            let (num, den) = self.on_line(field, coeffs, &dir);
            if den.is_empty() {
                continue;
            }
            let (quo, rem) = divrem(field, &num, &den).ok_or(CeError::DegenerateSpecialization)?;
            if !rem.is_empty() {
                return Err(CeError::NotDivisible);
            }
            return Ok(eval_uni(field, &quo, &field.zero()));
        }
        Err(CeError::DegenerateSpecialization)
    }

    /// `det(H)` and `det(E)` as polynomials. `template[g]` fixes coefficient
    /// `g` to a value; `None` keeps it as the variable `names[g]`.
    pub fn symbolic_dets(
        &self,
        names: &Arc<Vec<String>>,
        template: &[Option<BigRational>],
        limit: usize,
    ) -> Result<(MultiPoly<Rationals>, MultiPoly<Rationals>), CeError> {
        let entry = |e: &Option<usize>| -> MultiPoly<Rationals> {
            match e {
                None => MultiPoly::zero(Rationals, names.clone()),
                Some(g) => match &template[*g] {
                    Some(v) => MultiPoly::constant(Rationals, names.clone(), v.clone()),
                    None => MultiPoly::var(Rationals, names.clone(), *g),
                },
            }
        };
        let h = self.h.map(entry);
        let pos = self.e_positions();
        let e = h.submatrix(&pos, &pos);
        let dh = det_symbolic(h.nrows(), h.entries(), &Rationals, names, limit)?;
        let de = det_symbolic(e.nrows(), e.entries(), &Rationals, names, limit)?;
        Ok((dh, de))
    }
}

fn subdivision_for<R: Rng + ?Sized>(
    family: &SupportFamily,
    opts: &CeOptions,
    rng: &mut R,
) -> Result<MixedSubdivision, CeError> {
    match &opts.lifting {
        Some(levels) => {
            let s = MixedSubdivision::new(family, levels.clone())?;
            if !s.is_tight() {
                return Err(CeError::NotTight);
            }
            Ok(s)
        }
        None => Ok(MixedSubdivision::incremental(family, rng)?),
    }
}

fn attempts(opts: &CeOptions) -> usize {
    if opts.lifting.is_some() {
        1
    } else {
        opts.attempts.max(1)
    }
}

/// Builds a matrix pair and certifies it, re-lifting on failure.
pub fn certified_matrices<R: Rng + ?Sized>(
    family: &SupportFamily,
    opts: &CeOptions,
    rng: &mut R,
) -> Result<(MixedSubdivision, CeMatrices), CeError> {
    family.require_resultant_shape()?;
    let mut last = CeError::NotDivisible;
    for _ in 0..attempts(opts) {
        let sub = subdivision_for(family, opts, rng)?;
        let delta = match &opts.delta {
            Some(d) => d.clone(),
            None => select_delta(&sub, rng)?,
        };
        let m = build_matrices(&sub, &delta, opts.greedy)?;
        match m.certify(family, rng) {
            Ok(()) => return Ok((sub, m)),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Symbolic `det(H)/det(E)` in the coefficient variables; `template` fixes
/// some coefficients to rational values.
pub fn resultant_symbolic<R: Rng + ?Sized>(
    family: &SupportFamily,
    template: &[Option<BigRational>],
    opts: &CeOptions,
    rng: &mut R,
) -> Result<(MultiPoly<Rationals>, CeMatrices), CeError> {
    family.require_resultant_shape()?;
    let names = family.coefficient_names();
    let mut last = CeError::NotDivisible;
    for _ in 0..attempts(opts) {
        let sub = subdivision_for(family, opts, rng)?;
        let delta = match &opts.delta {
            Some(d) => d.clone(),
            None => select_delta(&sub, rng)?,
        };
        let m = build_matrices(&sub, &delta, opts.greedy)?;
        let (dh, de) = m.symbolic_dets(&names, template, opts.symbolic_limit)?;
        if de.is_zero() {
            return Err(CeError::DegenerateSpecialization);
        }
        match dh.exact_divide(&de) {
            Ok(q) => return Ok((q, m)),
            Err(ArithError::NotDivisible) => last = CeError::NotDivisible,
            Err(e) => return Err(e.into()),
        }
    }
    Err(last)
}

/// The resultant at a full coefficient vector, over any field.
pub fn resultant_value<F: Field, R: Rng + ?Sized>(
    family: &SupportFamily,
    field: &F,
    coeffs: &[F::Elem],
    opts: &CeOptions,
    rng: &mut R,
) -> Result<F::Elem, CeError> {
    let (_, m) = certified_matrices(family, opts, rng)?;
    m.evaluate(field, coeffs, rng)
}

/// Macaulay-style matrix: one row `(i, m)` for every `m` with
/// `m + A_i ⊆ cols`, holding the coefficients of `x^m f_i` in the columns.
pub fn macaulay_matrix(
    family: &SupportFamily,
    cols: &[LatticePoint],
) -> LabeledMatrix<(usize, LatticePoint), LatticePoint, Option<usize>> {
    let colset: BTreeMap<&LatticePoint, usize> = cols.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let mut rows = Vec::new();
    for i in 0..family.len() {
        let mut shifts: BTreeSet<LatticePoint> = BTreeSet::new();
        for c in cols {
            for a in family.support(i) {
                shifts.insert(c.sub(a));
            }
        }
        for m in shifts {
            if family.support(i).iter().all(|a| colset.contains_key(&m.add(a))) {
                rows.push((i, m));
            }
        }
    }
    let mut entries = vec![None; rows.len() * cols.len()];
    for (r, (i, m)) in rows.iter().enumerate() {
        for (k, a) in family.support(*i).iter().enumerate() {
            entries[r * cols.len() + colset[&m.add(a)]] = Some(family.global_index(*i, k));
        }
    }
    LabeledMatrix::new(rows, cols.to_vec(), entries).expect("labels are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn linear_system_resultant_is_determinant() {
        // Three generic affine linear forms in two variables.
        let lin: &[&[i64]] = &[&[0, 0], &[1, 0], &[0, 1]];
        let fam = SupportFamily::from_coords(2, &[lin, lin, lin]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let template = vec![None; fam.total_size()];
        let (res, m) = resultant_symbolic(&fam, &template, &CeOptions::default(), &mut rng).unwrap();
        assert_eq!(res.num_terms(), 6);
        assert_eq!(res.total_degree(), Some(3));
        assert!(m.size() >= 3);
        // Evaluate against the 3x3 determinant of the coefficient matrix.
        let vals: Vec<BigRational> = (1..=9).map(|v| q(v * v % 7 + v)).collect();
        let direct = det(&Rationals, 3, &vals);
        let r = res.eval(&vals);
        assert!(r == direct || r == -direct.clone(), "{r} vs {direct}");
    }

    #[test]
    fn macaulay_matrix_of_two_linear_forms() {
        let fam = SupportFamily::from_coords(1, &[&[&[0], &[1]], &[&[0], &[1]]]).unwrap();
        let cols = vec![LatticePoint(vec![0]), LatticePoint(vec![1])];
        let m = macaulay_matrix(&fam, &cols);
        assert_eq!(m.nrows(), 2);
        assert_eq!(m.row(0), &[Some(0), Some(1)]);
        assert_eq!(m.row(1), &[Some(2), Some(3)]);
    }
}
