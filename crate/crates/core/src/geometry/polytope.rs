use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::hull::{Halfspace, Placing};
use super::linalg::{rank_int, Chart, IVec};
use super::{check_dims, GeometryError, LatticePoint};

/// Facet inequality `<normal, m> >= -offset`; for equations, `<normal, m> = -offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn eval(&self, m: &LatticePoint) -> i64 {
        m.dot(&self.normal) + self.offset
    }

    pub(crate) fn eval_rational(&self, m: &[BigRational]) -> BigRational {
        m.iter()
            .zip(&self.normal)
            .map(|(x, &u)| x * BigRational::from_integer(u.into()))
            .fold(BigRational::from_integer(self.offset.into()), |a, b| a + b)
    }
}

/// A lattice polytope with both vertex and facet descriptions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Polytope {
    pub vertices: Vec<LatticePoint>,
    pub facets: Vec<Facet>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<Facet>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triangulation: Vec<Vec<usize>>,
}

fn to_i64(v: &BigInt) -> Result<i64, GeometryError> {
    v.to_i64().ok_or(GeometryError::Overflow("facet description"))
}

fn halfspace_to_facet(h: &Halfspace, chart: &Chart, ambient: usize) -> Result<Facet, GeometryError> {
    let normal = chart.lift_normal(&h.normal, ambient);
    Ok(Facet {
        normal: normal.iter().map(to_i64).collect::<Result<_, _>>()?,
        offset: to_i64(&h.offset)?,
    })
}

/// Triangulation of the hull of distinct points with a full-dimensional
/// chart; returns the placing structure built in the given point order.
pub(crate) fn placing_in_chart(chart: &Chart, points: &[IVec]) -> Placing {
    let proj: Vec<IVec> = points.iter().map(|p| chart.project(p)).collect();
    let simplex: Vec<IVec> = chart.basis.iter().map(|&i| proj[i].clone()).collect();
    let mut pl = Placing::new(simplex, chart.basis.clone());
    for (i, p) in proj.into_iter().enumerate() {
        if !chart.basis.contains(&i) {
            pl.insert(p, i);
        }
    }
    pl
}

impl Polytope {
    /// The empty polytope.
    pub fn empty() -> Polytope {
        Polytope {
            vertices: vec![],
            facets: vec![],
            equations: vec![],
            triangulation: vec![],
        }
    }

    /// Convex hull of a nonempty set of lattice points.
    pub fn hull(points: &[LatticePoint]) -> Result<Polytope, GeometryError> {
        let ambient = check_dims(points)?;
        let distinct: Vec<LatticePoint> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let big: Vec<IVec> = distinct.iter().map(|p| p.to_big()).collect();
        let chart = Chart::new(&big);
        let equations = chart
            .equations
            .iter()
            .map(|(e, c)| {
                Ok(Facet {
                    normal: e.iter().map(to_i64).collect::<Result<_, _>>()?,
                    offset: to_i64(c)?,
                })
            })
            .collect::<Result<Vec<_>, GeometryError>>()?;
        if chart.dim == 0 {
            return Ok(Polytope {
                vertices: distinct,
                facets: vec![],
                equations,
                triangulation: vec![vec![0]],
            });
        }
        let pl = placing_in_chart(&chart, &big);
        let halfspaces = pl.facets();
        let is_vertex: Vec<bool> = big
            .iter()
            .map(|p| {
                let q = chart.project(p);
                let tight: Vec<IVec> = halfspaces
                    .iter()
                    .filter(|h| h.eval(&q).is_zero())
                    .map(|h| h.normal.clone())
                    .collect();
                rank_int(&tight, chart.dim) == chart.dim
            })
            .collect();
        let vertices: Vec<LatticePoint> = distinct
            .iter()
            .zip(&is_vertex)
            .filter(|(_, &v)| v)
            .map(|(p, _)| p.clone())
            .collect();
        let vertex_pos = |orig: usize| -> usize { is_vertex[..orig].iter().filter(|&&v| v).count() };
        let all_vertices = pl.simplices.iter().flatten().all(|&k| is_vertex[pl.ids[k]]);
        let simplices: Vec<Vec<usize>> = if all_vertices {
            pl.simplices
                .iter()
                .map(|s| s.iter().map(|&k| vertex_pos(pl.ids[k])).collect())
                .collect()
        } else {
            let vbig: Vec<IVec> = vertices.iter().map(|p| p.to_big()).collect();
            let vchart = Chart::new(&vbig);
            let vpl = placing_in_chart(&vchart, &vbig);
            vpl.simplices
                .iter()
                .map(|s| s.iter().map(|&k| vpl.ids[k]).collect())
                .collect()
        };
        let mut triangulation: Vec<Vec<usize>> = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        triangulation.sort();
        let mut facets = halfspaces
            .iter()
            .map(|h| halfspace_to_facet(h, &chart, ambient))
            .collect::<Result<Vec<_>, _>>()?;
        facets.sort();
        Ok(Polytope {
            vertices,
            facets,
            equations,
            triangulation,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Ambient dimension; zero for the empty polytope.
    pub fn ambient_dim(&self) -> usize {
        self.vertices.first().map_or(0, |v| v.dim())
    }

    /// Affine dimension, or `None` for the empty polytope.
    pub fn dim(&self) -> Option<usize> {
        if self.is_empty() {
            None
        } else {
            Some(self.ambient_dim() - self.equations.len())
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.is_empty() && self.equations.is_empty()
    }

    pub fn contains(&self, m: &LatticePoint) -> bool {
        !self.is_empty()
            && self.equations.iter().all(|e| e.eval(m) == 0)
            && self.facets.iter().all(|f| f.eval(m) >= 0)
    }

    pub(crate) fn contains_rational(&self, m: &[BigRational]) -> bool {
        !self.is_empty()
            && self.equations.iter().all(|e| e.eval_rational(m).is_zero())
            && self.facets.iter().all(|f| !f.eval_rational(m).is_negative())
    }

    /// Strict containment in the relative interior.
    pub(crate) fn contains_rational_strictly(&self, m: &[BigRational]) -> bool {
        !self.is_empty()
            && self.equations.iter().all(|e| e.eval_rational(m).is_zero())
            && self.facets.iter().all(|f| f.eval_rational(m).is_positive())
    }

    /// `d!` times the Euclidean volume, where `d` is the ambient dimension;
    /// zero unless full-dimensional.
    pub fn normalized_volume(&self) -> BigInt {
        if !self.is_full_dimensional() {
            return BigInt::zero();
        }
        let d = self.ambient_dim();
        if d == 0 {
            return BigInt::one();
        }
        let big: Vec<IVec> = self.vertices.iter().map(|p| p.to_big()).collect();
        let mut total = BigInt::zero();
        for s in &self.triangulation {
            let base = &big[s[0]];
            let m: Vec<BigInt> = s[1..].iter().flat_map(|&v| super::linalg::sub(&big[v], base)).collect();
            total += super::linalg::det_int(d, &m).abs();
        }
        total
    }

    /// Euclidean volume in the ambient dimension.
    pub fn volume(&self) -> BigRational {
        let d = self.ambient_dim();
        let fact: BigInt = (1..=d as u64).map(BigInt::from).product();
        BigRational::new(self.normalized_volume(), fact)
    }

    fn bounding_box(&self, shift: Option<&[BigRational]>) -> Vec<(i64, i64)> {
        let d = self.ambient_dim();
        (0..d)
            .map(|k| {
                let lo = self.vertices.iter().map(|v| v.0[k]).min().unwrap();
                let hi = self.vertices.iter().map(|v| v.0[k]).max().unwrap();
                match shift {
                    None => (lo, hi),
                    Some(s) => {
                        let lo = (BigRational::from_integer(lo.into()) + &s[k]).ceil().to_integer();
                        let hi = (BigRational::from_integer(hi.into()) + &s[k]).floor().to_integer();
                        (lo.to_i64().unwrap(), hi.to_i64().unwrap())
                    }
                }
            })
            .collect()
    }

    fn scan_box(bounds: &[(i64, i64)], mut keep: impl FnMut(&LatticePoint) -> bool) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        if bounds.iter().any(|&(lo, hi)| lo > hi) {
            return out;
        }
        let mut cur: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        loop {
            let p = LatticePoint(cur.clone());
            if keep(&p) {
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

    /// All lattice points, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        if self.is_empty() {
            return vec![];
        }
        if self.ambient_dim() == 0 {
            return vec![LatticePoint(vec![])];
        }
        Self::scan_box(&self.bounding_box(None), |p| self.contains(p))
    }

    /// Lattice points of the translate `P + shift`, in lexicographic order.
    pub fn lattice_points_translated(&self, shift: &[BigRational]) -> Vec<LatticePoint> {
        if self.is_empty() {
            return vec![];
        }
        Self::scan_box(&self.bounding_box(Some(shift)), |p| {
            let x: Vec<BigRational> = p
                .0
                .iter()
                .zip(shift)
                .map(|(&c, s)| BigRational::from_integer(c.into()) - s)
                .collect();
            self.contains_rational(&x)
        })
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope, GeometryError> {
        if self.is_empty() || other.is_empty() {
            return Ok(Polytope::empty());
        }
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                if a.dim() != b.dim() {
                    return Err(GeometryError::DimensionMismatch {
                        expected: a.dim(),
                        found: b.dim(),
                    });
                }
                sums.push(a.add(b));
            }
        }
        Polytope::hull(&sums)
    }

    /// Primitive inner facet normals, sorted; these are the rays of the
    /// normal fan. Requires a full-dimensional polytope.
    pub fn normal_fan_rays(&self) -> Result<Vec<Vec<i64>>, GeometryError> {
        if !self.is_full_dimensional() {
            return Err(GeometryError::DegenerateInput(
                "normal fan of a lower-dimensional polytope".into(),
            ));
        }
        let mut rays: Vec<Vec<i64>> = self.facets.iter().map(|f| f.normal.clone()).collect();
        rays.sort();
        rays.dedup();
        Ok(rays)
    }

    /// Minimum of `<u, v>` over the vertices.
    pub fn support_min(&self, u: &[i64]) -> Option<i64> {
        self.vertices.iter().map(|v| v.dot(u)).min()
    }

    /// Checks internal consistency of a description read from untrusted input.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let d = self.ambient_dim();
        for (k, v) in self.vertices.iter().enumerate() {
            if v.dim() != d {
                return Err(GeometryError::Parse(format!("/vertices/{k}: expected {d} coordinates")));
            }
        }
        for (name, list) in [("facets", &self.facets), ("equations", &self.equations)] {
            for (k, f) in list.iter().enumerate() {
                if f.normal.len() != d {
                    return Err(GeometryError::Parse(format!("/{name}/{k}/normal: expected {d} entries")));
                }
            }
        }
        for (k, s) in self.triangulation.iter().enumerate() {
            if s.iter().any(|&i| i >= self.vertices.len()) {
                return Err(GeometryError::Parse(format!("/triangulation/{k}: vertex index out of range")));
            }
        }
        if self.vertices.is_empty() && !(self.facets.is_empty() && self.triangulation.is_empty()) {
            return Err(GeometryError::Parse("/vertices: empty vertex list with nonempty facets".into()));
        }
        Ok(())
    }

    /// Parses and validates the JSON form. Errors carry a JSON pointer.
    pub fn from_json_bytes(text: &[u8]) -> Result<Polytope, GeometryError> {
        let de = &mut serde_json::Deserializer::from_slice(text);
        let p: Polytope = serde_path_to_error::deserialize(de)
            .map_err(|e| GeometryError::Parse(format!("{}: {}", crate::arith::poly::pointer(e.path()), e.inner())))?;
        p.validate()?;
        Ok(p)
    }
}

/// Mixed volume of `n` polytopes in `R^n`, normalized so that
/// `MV(P, ..., P) = n! vol(P)`. Computed by inclusion-exclusion.
pub fn mixed_volume(polys: &[Polytope]) -> Result<BigInt, GeometryError> {
    let n = polys.len();
    if polys.iter().any(|p| p.is_empty()) {
        return Err(GeometryError::Empty);
    }
    for p in polys {
        if p.ambient_dim() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                found: p.ambient_dim(),
            });
        }
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut total = BigInt::zero();
    for mask in 1u32..(1 << n) {
        let mut sum: Option<Polytope> = None;
        for (i, p) in polys.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum = Some(match sum {
                    None => p.clone(),
                    Some(s) => s.minkowski_sum(p)?,
                });
            }
        }
        let vol = sum.unwrap().normalized_volume();
        if (n as u32 - mask.count_ones()).is_even() {
            total += vol;
        } else {
            total -= vol;
        }
    }
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    debug_assert!((&total % &fact).is_zero());
    Ok(total / fact)
}
