//! Newton polytope of the sparse resultant, computed incrementally from a
//! vertex oracle, optionally projected onto a subset of the coefficients.
//!
//! The oracle lifts the Cayley configuration by the negated direction,
//! refines lexicographically by random liftings until it gets a
//! triangulation `T`, and returns the vector of mixed-cell volumes: entry
//! `(i, a)` is the total volume of the `i`-mixed cells whose point
//! component is `a`. That vector is a vertex of the resultant polytope
//! maximizing the direction.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::matrix::solve;
use crate::arith::Rationals;
use crate::family::{FamilyError, SupportFamily};
use crate::geometry::hull::{Halfspace, Placing};
use crate::geometry::linalg::{kernel_int, Chart, IVec};
use crate::geometry::{GeometryError, LatticePoint, Polytope};
use crate::subdivision::{cayley_cells, mixed_simplex_volume, random_lifting, SubdivisionError, LIFTING_RETRIES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResPolyError {
    #[error("resultant polytope is the single point {0:?}")]
    ZeroDimensional(Vec<i64>),
    #[error("projection index {0} is out of range")]
    BadProjection(usize),
    #[error("projection indices must be strictly increasing")]
    UnsortedProjection,
    #[error("no triangulation found after {0} random refinements")]
    NonGenericLifting(usize),
    #[error("linear system for the missing coordinates is singular")]
    SingularSystem,
    #[error("direction has {found} entries, expected {expected}")]
    DirectionLength { expected: usize, found: usize },
    #[error("specialization flags have {found} entries, expected {expected}")]
    FlagLength { expected: usize, found: usize },
    #[error("oracle returned a point outside the affine hull")]
    OutsideAffineHull,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// A vertex found by the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVertex {
    /// Mixed-cell volume vector on all coefficients.
    pub full: Vec<i64>,
    /// Its projection onto the kept coefficients.
    pub projected: Vec<i64>,
}

/// Vertex oracle for the projection of the resultant polytope onto the
/// coefficients `kept`.
#[derive(Clone, Debug)]
pub struct VertexOracle {
    family: SupportFamily,
    kept: Vec<usize>,
    rng: ChaCha8Rng,
    calls: usize,
}

impl VertexOracle {
    pub fn new(family: &SupportFamily, kept: &[usize], seed: u64) -> Result<Self, ResPolyError> {
        family.require_resultant_shape()?;
        if kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ResPolyError::UnsortedProjection);
        }
        if let Some(&bad) = kept.iter().find(|&&k| k >= family.total_size()) {
            return Err(ResPolyError::BadProjection(bad));
        }
        Ok(VertexOracle {
            family: family.clone(),
            kept: kept.to_vec(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            calls: 0,
        })
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// The vertex maximizing `<direction, .>` over the projected polytope,
    /// with ties broken by a random secondary direction.
    pub fn query(&mut self, direction: &[BigInt]) -> Result<OracleVertex, ResPolyError> {
        if direction.len() != self.kept.len() {
            return Err(ResPolyError::DirectionLength {
                expected: self.kept.len(),
                found: direction.len(),
            });
        }
        self.calls += 1;
        let size = self.family.total_size();
        let mut primary = vec![BigRational::zero(); size];
        let mut secondary = vec![BigRational::zero(); size];
        for (k, &g) in self.kept.iter().enumerate() {
            primary[g] = BigRational::from_integer(-&direction[k]);
            secondary[g] = BigRational::from_integer(self.rng.gen_range(0..1i64 << 20).into());
        }
        for _ in 0..LIFTING_RETRIES {
            let tertiary = random_lifting(size, &mut self.rng);
            let levels = vec![primary.clone(), secondary.clone(), tertiary];
            let cells = cayley_cells(&self.family, &levels)?;
            let simplex_size = self.family.cayley_dim() + 1;
            if cells.iter().any(|c| c.len() != simplex_size) {
                continue;
            }
            let full = mixed_volume_vector(&self.family, &cells);
            let projected = self.kept.iter().map(|&g| full[g]).collect();
            return Ok(OracleVertex { full, projected });
        }
        Err(ResPolyError::NonGenericLifting(LIFTING_RETRIES))
    }
}

/// Mixed-cell volume vector of a triangulation of the Cayley configuration.
pub fn mixed_volume_vector(family: &SupportFamily, cells: &[Vec<usize>]) -> Vec<i64> {
    let mut w = vec![0i64; family.total_size()];
    for cell in cells {
        if let Some((g, vol)) = mixed_simplex_volume(family, cell) {
            w[g] += vol.to_i64().expect("cell volume fits in i64");
        }
    }
    w
}

/// Counters reported with a computed polytope.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub dimension: usize,
    pub vertices: usize,
    pub facets: usize,
    pub oracle_calls_init: usize,
    pub oracle_calls_loop: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultantPolytope {
    /// Kept coefficient indices, in the order of the polytope coordinates.
    pub kept: Vec<usize>,
    pub polytope: Polytope,
    /// Placing triangulation built by the incremental algorithm, over
    /// indices into `polytope.vertices`.
    pub triangulation: Vec<Vec<usize>>,
    /// Full mixed-cell volume vector for each vertex, aligned with
    /// `polytope.vertices`.
    pub full_vertices: Vec<Vec<i64>>,
    /// Coefficient index of each entry of a full vertex. This is the
    /// identity unless specialized points were dropped beforehand.
    pub coefficients: Vec<usize>,
    pub stats: RunStats,
}

impl ResultantPolytope {
    /// Parses and validates the JSON form written by the command line tool.
    /// Errors carry a JSON pointer.
    pub fn from_json_bytes(text: &[u8]) -> Result<ResultantPolytope, GeometryError> {
        let parse = |p: String, m: &str| GeometryError::Parse(format!("{p}: {m}"));
        let de = &mut serde_json::Deserializer::from_slice(text);
        let rp: ResultantPolytope = serde_path_to_error::deserialize(de)
            .map_err(|e| parse(crate::arith::poly::pointer(e.path()), &e.inner().to_string()))?;
        rp.polytope.validate().map_err(|e| match e {
            GeometryError::Parse(m) => GeometryError::Parse(format!("/polytope{m}")),
            e => e,
        })?;
        if rp.polytope.vertices.is_empty() {
            return Err(parse("/polytope/vertices".into(), "empty vertex list"));
        }
        if rp.polytope.ambient_dim() != rp.kept.len() {
            return Err(parse("/kept".into(), "length differs from the vertex dimension"));
        }
        if rp.kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse("/kept".into(), "indices must be strictly increasing"));
        }
        if rp.full_vertices.len() != rp.polytope.vertices.len() {
            return Err(parse("/full_vertices".into(), "one entry per vertex expected"));
        }
        for (k, v) in rp.full_vertices.iter().enumerate() {
            if v.len() != rp.coefficients.len() {
                return Err(parse(format!("/full_vertices/{k}"), "length differs from the coefficient list"));
            }
        }
        for (k, s) in rp.triangulation.iter().enumerate() {
            if s.iter().any(|&i| i >= rp.polytope.vertices.len()) {
                return Err(parse(format!("/triangulation/{k}"), "vertex index out of range"));
            }
        }
        Ok(rp)
    }
}

fn big(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Initial affinely independent vertices spanning the affine hull of the
/// projected polytope.
fn initialize(oracle: &mut VertexOracle, seed_dir: &[BigInt]) -> Result<Vec<OracleVertex>, ResPolyError> {
    let m = oracle.kept().len();
    let mut found = vec![oracle.query(seed_dir)?];
    'grow: loop {
        let base = big(&found[0].projected);
        let diffs: Vec<IVec> = found[1..]
            .iter()
            .map(|v| big(&v.projected).iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        let complement = if diffs.is_empty() {
            (0..m)
                .map(|k| (0..m).map(|j| BigInt::from(i64::from(j == k))).collect())
                .collect()
        } else {
            kernel_int(&diffs, m)
        };
        for e in complement {
            let level: BigInt = e.iter().zip(&base).map(|(a, b)| a * b).sum();
            for dir in [e.clone(), e.iter().map(|x| -x).collect::<IVec>()] {
                let v = oracle.query(&dir)?;
                let val: BigInt = e.iter().zip(&v.projected).map(|(a, &b)| a * BigInt::from(b)).sum();
                if val != level {
                    found.push(v);
                    continue 'grow;
                }
            }
        }
        return Ok(found);
    }
}

/// Outer normal in kept coordinates of a facet given in chart coordinates.
fn outer_normal(chart: &Chart, h: &Halfspace, m: usize) -> IVec {
    chart.lift_normal(&h.normal, m).into_iter().map(|x| -x).collect()
}

/// Computes the projection of the resultant polytope onto `kept`.
pub fn compute_polytope(family: &SupportFamily, kept: &[usize], seed: u64) -> Result<ResultantPolytope, ResPolyError> {
    let mut oracle = VertexOracle::new(family, kept, seed)?;
    let m = kept.len();
    let mut dir_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let seed_dir: IVec = (0..m).map(|_| BigInt::from(dir_rng.gen_range(-1000i64..=1000))).collect();
    let init = initialize(&mut oracle, &seed_dir)?;
    let calls_init = oracle.calls();
    if init.len() == 1 {
        return Err(ResPolyError::ZeroDimensional(init[0].projected.clone()));
    }
    let points: Vec<IVec> = init.iter().map(|v| big(&v.projected)).collect();
    let chart = Chart::new(&points);
    let d = chart.dim;
    debug_assert_eq!(d + 1, init.len());
    let simplex: Vec<IVec> = points.iter().map(|p| chart.project(p)).collect();
    let mut placing = Placing::new(simplex, (0..init.len()).collect());
    let mut vertices: Vec<OracleVertex> = init;

    let mut queue: VecDeque<Halfspace> = placing.facets().into_iter().collect();
    let mut checked: HashSet<IVec> = HashSet::new();
    while let Some(h) = queue.pop_front() {
        let current: BTreeSet<Halfspace> = placing.facets().into_iter().collect();
        if !current.contains(&h) || checked.contains(&h.normal) {
            continue;
        }
        let w = outer_normal(&chart, &h, m);
        let v = oracle.query(&w)?;
        let p = big(&v.projected);
        if !chart.contains(&p) {
            return Err(ResPolyError::OutsideAffineHull);
        }
        let q = chart.project(&p);
        if h.eval(&q).is_zero() {
            checked.insert(h.normal.clone());
            continue;
        }
        let id = vertices.len();
        vertices.push(v);
        placing.insert(q, id);
        for f in placing.facets() {
            if !current.contains(&f) && !checked.contains(&f.normal) {
                queue.push_back(f);
            }
        }
    }
    let calls_loop = oracle.calls() - calls_init;

    let lattice: Vec<LatticePoint> = vertices.iter().map(|v| LatticePoint(v.projected.clone())).collect();
    let polytope = Polytope::hull(&lattice)?;
    let index_of = |p: &LatticePoint| polytope.vertices.binary_search(p).ok();
    let mut triangulation: Vec<Vec<usize>> = placing
        .simplices
        .iter()
        .map(|s| {
            let mut t: Vec<usize> = s
                .iter()
                .map(|&k| index_of(&lattice[placing.ids[k]]).expect("placed points are vertices"))
                .collect();
            t.sort_unstable();
            t
        })
        .collect();
    triangulation.sort();
    let full_vertices = polytope
        .vertices
        .iter()
        .map(|p| vertices.iter().find(|v| v.projected == p.0).unwrap().full.clone())
        .collect();
    let stats = RunStats {
        dimension: d,
        vertices: polytope.vertices.len(),
        facets: polytope.facets.len(),
        oracle_calls_init: calls_init,
        oracle_calls_loop: calls_loop,
    };
    Ok(ResultantPolytope {
        kept: kept.to_vec(),
        polytope,
        triangulation,
        full_vertices,
        coefficients: (0..family.total_size()).collect(),
        stats,
    })
}

/// Projection onto the unspecialized coefficients, after dropping
/// redundant specialized points. Indices in the result refer to `family`.
pub fn specialized_polytope(
    family: &SupportFamily,
    specialized: &[bool],
    seed: u64,
) -> Result<ResultantPolytope, ResPolyError> {
    let (reduced, map, flags) = preprocess_specialized(family, specialized)?;
    let kept: Vec<usize> = (0..flags.len()).filter(|&g| !flags[g]).collect();
    let mut r = compute_polytope(&reduced, &kept, seed)?;
    r.kept = kept.iter().map(|&g| map[g]).collect();
    r.coefficients = map;
    Ok(r)
}

/// Drops specialized points that lie in the convex hull of the other
/// specialized points of the same support. Returns the reduced family, the
/// original global index of each remaining coefficient and the remaining
/// specialization flags.
pub fn preprocess_specialized(
    family: &SupportFamily,
    specialized: &[bool],
) -> Result<(SupportFamily, Vec<usize>, Vec<bool>), ResPolyError> {
    if specialized.len() != family.total_size() {
        return Err(ResPolyError::FlagLength {
            expected: family.total_size(),
            found: specialized.len(),
        });
    }
    let mut supports = Vec::with_capacity(family.len());
    let mut map = Vec::new();
    let mut flags = Vec::new();
    for i in 0..family.len() {
        let off = family.offset(i);
        let s = family.support(i);
        let spec: Vec<LatticePoint> = (0..s.len()).filter(|&k| specialized[off + k]).map(|k| s[k].clone()).collect();
        let keep_spec: BTreeSet<LatticePoint> = if spec.is_empty() {
            BTreeSet::new()
        } else {
            Polytope::hull(&spec)?.vertices.into_iter().collect()
        };
        let mut pts = Vec::new();
        for (k, a) in s.iter().enumerate() {
            if !specialized[off + k] || keep_spec.contains(a) {
                pts.push(a.clone());
                map.push(off + k);
                flags.push(specialized[off + k]);
            }
        }
        supports.push(pts);
    }
    Ok((SupportFamily::new(family.n(), supports)?, map, flags))
}

/// Constants of the linear relations satisfied by every mixed-cell volume
/// vector: for each `i`, the sum over `A_i` equals `MV_{-i}`, and
/// `sum_{i,a} w_{i,a} a` is the same vector for all vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneities {
    pub support_sums: Vec<i64>,
    pub moment: Vec<i64>,
}

impl Homogeneities {
    /// Reads the constants off one full vertex.
    pub fn from_vertex(family: &SupportFamily, full: &[i64]) -> Homogeneities {
        let support_sums = (0..family.len())
            .map(|i| {
                let off = family.offset(i);
                (0..family.support(i).len()).map(|k| full[off + k]).sum()
            })
            .collect();
        let mut moment = vec![0i64; family.n()];
        for (g, &w) in full.iter().enumerate() {
            for (m, c) in moment.iter_mut().zip(family.point(g).coords()) {
                *m += w * c;
            }
        }
        Homogeneities { support_sums, moment }
    }

    /// The `2n + 1` relations as rows over all coefficients, with constants.
    fn rows(&self, family: &SupportFamily) -> Vec<(Vec<BigRational>, BigRational)> {
        let size = family.total_size();
        let mut rows = Vec::new();
        for i in 0..family.len() {
            let off = family.offset(i);
            let mut r = vec![BigRational::zero(); size];
            for k in 0..family.support(i).len() {
                r[off + k] = BigRational::from_integer(1.into());
            }
            rows.push((r, BigRational::from_integer(self.support_sums[i].into())));
        }
        for j in 0..family.n() {
            let r = (0..size)
                .map(|g| BigRational::from_integer(family.point(g).coords()[j].into()))
                .collect();
            rows.push((r, BigRational::from_integer(self.moment[j].into())));
        }
        rows
    }
}

/// Recovers a full vertex from its projection when exactly `2n + 1`
/// coordinates are missing and the relations determine them.
pub fn lift_to_full(
    family: &SupportFamily,
    kept: &[usize],
    projected: &[i64],
    relations: &Homogeneities,
) -> Result<Vec<i64>, ResPolyError> {
    let size = family.total_size();
    let unknown: Vec<usize> = (0..size).filter(|g| !kept.contains(g)).collect();
    let rows = relations.rows(family);
    if unknown.len() != rows.len() {
        return Err(ResPolyError::SingularSystem);
    }
    let n = unknown.len();
    let mut a = Vec::with_capacity(n * n);
    let mut b = Vec::with_capacity(n);
    for (r, c) in &rows {
        for &g in &unknown {
            a.push(r[g].clone());
        }
        let known: BigRational = kept
            .iter()
            .zip(projected)
            .map(|(&g, &v)| &r[g] * BigRational::from_integer(v.into()))
            .fold(BigRational::zero(), |x, y| x + y);
        b.push(c - known);
    }
    let x = solve(&Rationals, n, &a, &b).ok_or(ResPolyError::SingularSystem)?;
    let mut full = vec![0i64; size];
    for (&g, &v) in kept.iter().zip(projected) {
        full[g] = v;
    }
    for (&g, v) in unknown.iter().zip(&x) {
        if !v.is_integer() {
            return Err(ResPolyError::SingularSystem);
        }
        full[g] = v.to_integer().to_i64().ok_or(ResPolyError::SingularSystem)?;
    }
    Ok(full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn quadratic_binomial_polytope() {
        let fam = fixtures::general_quadratic_and_binomial().family;
        let all: Vec<usize> = (0..5).collect();
        let r = compute_polytope(&fam, &all, 1).unwrap();
        let expected: Vec<LatticePoint> = [[0, 0, 2, 2, 0], [0, 2, 0, 1, 1], [2, 0, 0, 0, 2]]
            .iter()
            .map(|v| LatticePoint(v.to_vec()))
            .collect();
        assert_eq!(r.polytope.vertices, expected);
        assert_eq!(r.stats.dimension, 2);
        let pts = r.polytope.lattice_points();
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn linear_polytope_is_simplex() {
        let fam = fixtures::linear().family;
        let all: Vec<usize> = (0..9).collect();
        let r = compute_polytope(&fam, &all, 7).unwrap();
        // |A| - 2n - 1 = 4.
        assert_eq!(r.stats.dimension, 4);
        assert_eq!(r.polytope.vertices.len(), 6);
        assert!(r.stats.oracle_calls_loop <= r.stats.vertices + r.stats.facets);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let fam = fixtures::linear().family;
        let r = compute_polytope(&fam, &[0, 1, 2, 3], 1).unwrap();
        let text = serde_json::to_vec(&r).unwrap();
        assert_eq!(ResultantPolytope::from_json_bytes(&text).unwrap(), r);
        let mut bad = r.clone();
        bad.kept = vec![0, 1, 2];
        let err = ResultantPolytope::from_json_bytes(&serde_json::to_vec(&bad).unwrap()).unwrap_err();
        assert!(err.to_string().contains("/kept:"), "{err}");
        let mut bad = r;
        bad.triangulation[0][0] = 99;
        assert!(ResultantPolytope::from_json_bytes(&serde_json::to_vec(&bad).unwrap()).is_err());
    }

    #[test]
    fn full_vertices_are_recovered_from_projections() {
        let fam = fixtures::bilinear().family;
        let kept = vec![3, 5, 6, 7, 9, 10, 11];
        let r = compute_polytope(&fam, &kept, 3).unwrap();
        let rel = Homogeneities::from_vertex(&fam, &r.full_vertices[0]);
        assert_eq!(rel.support_sums, vec![2, 2, 2]);
        for (v, full) in r.polytope.vertices.iter().zip(&r.full_vertices) {
            assert_eq!(&lift_to_full(&fam, &kept, v.coords(), &rel).unwrap(), full);
        }
    }

    #[test]
    fn interior_specialized_points_are_dropped() {
        let fam = SupportFamily::from_coords(1, &[&[&[0], &[1], &[2]], &[&[0], &[1]]]).unwrap();
        let (reduced, map, flags) = preprocess_specialized(&fam, &[true, true, true, false, false]).unwrap();
        assert_eq!(reduced.support(0).len(), 2);
        assert_eq!(map, vec![0, 2, 3, 4]);
        assert_eq!(flags, vec![true, true, false, false]);
    }
}
