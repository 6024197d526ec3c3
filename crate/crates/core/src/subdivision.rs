//! Regular subdivisions by lower hulls, and mixed subdivisions of a support
//! family obtained from subdivisions of its Cayley embedding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{FamilyError, SupportFamily};
use crate::geometry::hull::Placing;
use crate::geometry::linalg::{det_int, sub, Chart, IVec};
use crate::geometry::{GeometryError, LatticePoint, Polytope};

/// Attempts made to find a lifting that induces a fine mixed subdivision.
pub const LIFTING_RETRIES: usize = 16;

/// Range of random lifting values, `[0, 2^20)`.
pub const LIFTING_RANGE: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubdivisionError {
    #[error("lifting has {found} values, expected {expected}")]
    LiftingLength { expected: usize, found: usize },
    #[error("no generic lifting found after {0} attempts")]
    NonGenericLifting(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Cells of the regular subdivision of `points` induced by `heights`: the
/// projections of the lower facets of the lifted point set. Each cell lists
/// every input point lying on its lower facet, so cells are marked.
pub(crate) fn lower_cells(points: &[IVec], heights: &[BigRational]) -> Vec<Vec<usize>> {
    let chart = Chart::new(points);
    if chart.dim == 0 || points.len() == 1 {
        return vec![(0..points.len()).collect()];
    }
    let scale = heights.iter().fold(BigInt::one(), |l, h| l.lcm(h.denom()));
    let int_heights: Vec<BigInt> = heights
        .iter()
        .map(|h| (h * BigRational::from_integer(scale.clone())).to_integer())
        .collect();
    let count = BigInt::from(points.len());
    let proj: Vec<IVec> = points.iter().map(|p| chart.project(p)).collect();
    let mut lifted: Vec<IVec> = proj
        .iter()
        .zip(&int_heights)
        .map(|(y, h)| {
            let mut q: IVec = y.iter().map(|c| c * &count).collect();
            q.push(h * &count);
            q
        })
        .collect();
    // An apex above the centroid makes the lifted set full-dimensional
    // without touching its lower faces.
    let max_h = int_heights.iter().max().unwrap().clone();
    let mut apex: IVec = (0..chart.dim)
        .map(|k| proj.iter().map(|y| &y[k]).sum())
        .collect();
    apex.push((max_h + 1) * &count);
    lifted.push(apex);

    let lchart = Chart::new(&lifted);
    debug_assert_eq!(lchart.dim, chart.dim + 1);
    let simplex: Vec<IVec> = lchart.basis.iter().map(|&i| lifted[i].clone()).collect();
    let mut pl = Placing::new(simplex, lchart.basis.clone());
    for (i, p) in lifted.iter().enumerate() {
        if !lchart.basis.contains(&i) {
            pl.insert(p.clone(), i);
        }
    }
    let mut cells: Vec<Vec<usize>> = pl
        .facets()
        .into_iter()
        .filter(|h| h.normal[chart.dim].is_positive())
        .map(|h| {
            (0..points.len())
                .filter(|&i| h.eval(&lifted[i]).is_zero())
                .collect()
        })
        .collect();
    cells.sort();
    cells
}

/// Regular subdivision refined lexicographically: each cell of the
/// subdivision induced by `levels[0]` is subdivided by `levels[1]`, and so on.
pub(crate) fn lex_cells(points: &[IVec], levels: &[&[BigRational]]) -> Vec<Vec<usize>> {
    let Some((first, rest)) = levels.split_first() else {
        return vec![(0..points.len()).collect()];
    };
    let cells = lower_cells(points, first);
    if rest.is_empty() {
        return cells;
    }
    let mut out = Vec::new();
    for cell in cells {
        let sub_points: Vec<IVec> = cell.iter().map(|&i| points[i].clone()).collect();
        let sub_levels: Vec<Vec<BigRational>> = rest
            .iter()
            .map(|l| cell.iter().map(|&i| l[i].clone()).collect())
            .collect();
        let refs: Vec<&[BigRational]> = sub_levels.iter().map(|v| v.as_slice()).collect();
        for sc in lex_cells(&sub_points, &refs) {
            out.push(sc.iter().map(|&k| cell[k]).collect());
        }
    }
    out.sort();
    out
}

/// Cells of the subdivision of the Cayley embedding, as sorted global
/// coefficient indices.
pub fn cayley_cells(
    family: &SupportFamily,
    levels: &[Vec<BigRational>],
) -> Result<Vec<Vec<usize>>, SubdivisionError> {
    for l in levels {
        if l.len() != family.total_size() {
            return Err(SubdivisionError::LiftingLength {
                expected: family.total_size(),
                found: l.len(),
            });
        }
    }
    let pts: Vec<IVec> = family.cayley_points().iter().map(|p| p.to_big()).collect();
    let refs: Vec<&[BigRational]> = levels.iter().map(|v| v.as_slice()).collect();
    Ok(lex_cells(&pts, &refs))
}

/// Classification of a cell `D_0 + ... + D_k` of a mixed subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CellKind {
    /// `D_i` is a point and every other component is a segment.
    Mixed { support: usize },
    /// Every component is a segment (families of `n` supports).
    FullyMixed,
    /// Tight but not mixed.
    NonMixed,
    /// Component dimensions do not add up to `n`.
    NonTight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedCell {
    /// Positions in `A_i` of the points of each component.
    pub components: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
    pub kind: CellKind,
    /// Euclidean volume of the Minkowski cell.
    #[serde(with = "crate::serde_util::rat")]
    pub volume: BigRational,
    /// The Minkowski cell as a polytope.
    pub polytope: Polytope,
}

impl MixedCell {
    pub fn is_tight(&self) -> bool {
        self.kind != CellKind::NonTight
    }

    /// Supports whose component is a single point.
    pub fn zero_dim_components(&self) -> Vec<usize> {
        self.dims
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d == 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Mixed subdivision of a support family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedSubdivision {
    pub family: SupportFamily,
    /// Lifting levels, applied lexicographically.
    #[serde(with = "crate::serde_util::rat_vec_vec")]
    pub lifting: Vec<Vec<BigRational>>,
    pub cells: Vec<MixedCell>,
    /// Whether every Cayley cell is a simplex.
    pub fine: bool,
}

fn classify(family: &SupportFamily, cayley_cell: &[usize]) -> Result<MixedCell, SubdivisionError> {
    let k = family.len();
    let n = family.n();
    let mut components: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &g in cayley_cell {
        let (i, pos) = family.locate(g);
        components[i].push(pos);
    }
    let mut dims = Vec::with_capacity(k);
    for (i, comp) in components.iter().enumerate() {
        if comp.is_empty() {
            // Happens only for families whose Cayley configuration is not
            // full-dimensional.
            dims.push(0);
            continue;
        }
        let pts: Vec<IVec> = comp.iter().map(|&p| family.support(i)[p].to_big()).collect();
        dims.push(Chart::new(&pts).dim);
    }
    let total: usize = dims.iter().sum();
    let kind = if total != n || components.iter().any(Vec::is_empty) {
        CellKind::NonTight
    } else {
        let zeros: Vec<usize> = (0..k).filter(|&i| dims[i] == 0).collect();
        let rest_segments = dims.iter().all(|&d| d <= 1);
        match (zeros.len(), rest_segments) {
            (0, true) => CellKind::FullyMixed,
            (1, true) => CellKind::Mixed { support: zeros[0] },
            _ => CellKind::NonMixed,
        }
    };
    let mut sums: Vec<LatticePoint> = vec![LatticePoint::origin(n)];
    for (i, comp) in components.iter().enumerate() {
        if comp.is_empty() {
            continue;
        }
        let mut next = Vec::with_capacity(sums.len() * comp.len());
        for s in &sums {
            for &p in comp {
                next.push(s.add(&family.support(i)[p]));
            }
        }
        next.sort();
        next.dedup();
        sums = next;
    }
    let polytope = Polytope::hull(&sums)?;
    let volume = polytope.volume();
    Ok(MixedCell {
        components,
        dims,
        kind,
        volume,
        polytope,
    })
}

impl MixedSubdivision {
    /// Mixed subdivision induced by lexicographically applied liftings.
    pub fn new(family: &SupportFamily, lifting: Vec<Vec<BigRational>>) -> Result<Self, SubdivisionError> {
        let cay = cayley_cells(family, &lifting)?;
        let simplex_size = family.cayley_dim() + 1;
        let fine = cay.iter().all(|c| c.len() == simplex_size);
        let cells = cay
            .iter()
            .map(|c| classify(family, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MixedSubdivision {
            family: family.clone(),
            lifting,
            cells,
            fine,
        })
    }

    /// Subdivision from a single random lifting, retried until fine.
    pub fn generic<R: Rng + ?Sized>(family: &SupportFamily, rng: &mut R) -> Result<Self, SubdivisionError> {
        for _ in 0..LIFTING_RETRIES {
            let s = Self::new(family, vec![random_lifting(family.total_size(), rng)])?;
            if s.fine && s.is_tight() {
                return Ok(s);
            }
        }
        Err(SubdivisionError::NonGenericLifting(LIFTING_RETRIES))
    }

    /// Subdivision refining the chain obtained by lifting one support at a
    /// time: level `i` lifts `A_i` randomly and leaves the others at zero,
    /// and a final random level on all points makes the result fine.
    /// Matrix formulas built on such subdivisions divide far more reliably
    /// than those from a single random lifting.
    pub fn incremental<R: Rng + ?Sized>(family: &SupportFamily, rng: &mut R) -> Result<Self, SubdivisionError> {
        for _ in 0..LIFTING_RETRIES {
            let mut levels = Vec::with_capacity(family.len() + 1);
            for i in 0..family.len() {
                let mut level = vec![BigRational::zero(); family.total_size()];
                let off = family.offset(i);
                for (k, v) in random_lifting(family.support(i).len(), rng).into_iter().enumerate() {
                    level[off + k] = v;
                }
                levels.push(level);
            }
            levels.push(random_lifting(family.total_size(), rng));
            let s = Self::new(family, levels)?;
            if s.fine && s.is_tight() {
                return Ok(s);
            }
        }
        Err(SubdivisionError::NonGenericLifting(LIFTING_RETRIES))
    }

    pub fn is_tight(&self) -> bool {
        self.cells.iter().all(MixedCell::is_tight)
    }

    /// Indices of the cells that are `i`-mixed.
    pub fn mixed_cells(&self, i: usize) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind == CellKind::Mixed { support: i })
            .map(|(k, _)| k)
            .collect()
    }

    /// Sum of the volumes of the `i`-mixed cells, which equals the mixed
    /// volume of the other supports for tight subdivisions.
    pub fn mixed_volume_from_cells(&self, i: usize) -> BigRational {
        self.mixed_cells(i)
            .iter()
            .map(|&k| self.cells[k].volume.clone())
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Parses the JSON dump and checks it against its own family.
    pub fn from_json_bytes(text: &[u8]) -> Result<Self, GeometryError> {
        let de = &mut serde_json::Deserializer::from_slice(text);
        let s: MixedSubdivision = serde_path_to_error::deserialize(de)
            .map_err(|e| GeometryError::Parse(format!("{}: {}", crate::arith::poly::pointer(e.path()), e.inner())))?;
        let fam = SupportFamily::new(s.family.n(), s.family.supports().to_vec())
            .map_err(|e| GeometryError::Parse(format!("/family: {e}")))?;
        if fam != s.family {
            return Err(GeometryError::Parse("/family: supports must be sorted".into()));
        }
        for (k, l) in s.lifting.iter().enumerate() {
            if l.len() != fam.total_size() {
                return Err(GeometryError::Parse(format!("/lifting/{k}: expected {} values", fam.total_size())));
            }
        }
        for (c, cell) in s.cells.iter().enumerate() {
            if cell.components.len() != fam.len() || cell.dims.len() != fam.len() {
                return Err(GeometryError::Parse(format!("/cells/{c}/components: expected {} components", fam.len())));
            }
            for (i, comp) in cell.components.iter().enumerate() {
                if comp.iter().any(|&p| p >= fam.support(i).len()) {
                    return Err(GeometryError::Parse(format!("/cells/{c}/components/{i}: index out of range")));
                }
            }
            cell.polytope
                .validate()
                .map_err(|e| GeometryError::Parse(format!("/cells/{c}/polytope{e}")))?;
        }
        Ok(s)
    }
}

/// Uniform integer lifting values in `[0, 2^20)`.
pub fn random_lifting<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<BigRational> {
    (0..len)
        .map(|_| BigRational::from_integer(rng.gen_range(0..LIFTING_RANGE).into()))
        .collect()
}

/// `|det|` of the segment directions of a mixed Cayley simplex, i.e. the
/// volume of its Minkowski cell. `None` unless the cell is mixed.
pub(crate) fn mixed_simplex_volume(family: &SupportFamily, cell: &[usize]) -> Option<(usize, BigInt)> {
    let n = family.n();
    let mut by_support: Vec<Vec<usize>> = vec![Vec::new(); family.len()];
    for &g in cell {
        by_support[family.locate(g).0].push(g);
    }
    let singles: Vec<usize> = (0..family.len()).filter(|&i| by_support[i].len() == 1).collect();
    if singles.len() != 1 || by_support.iter().any(|c| c.len() > 2 || c.is_empty()) {
        return None;
    }
    let mut m = Vec::with_capacity(n * n);
    for comp in by_support.iter().filter(|c| c.len() == 2) {
        m.extend(sub(&family.point(comp[1]).to_big(), &family.point(comp[0]).to_big()));
    }
    Some((by_support[singles[0]][0], det_int(n, &m).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn bilinear() -> SupportFamily {
        let sq: &[&[i64]] = &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]];
        SupportFamily::from_coords(2, &[sq, sq, sq]).unwrap()
    }

    #[test]
    fn lower_cells_of_a_segment() {
        let pts: Vec<IVec> = (0..4).map(|x| vec![BigInt::from(x)]).collect();
        let convex = [q(0), q(1), q(0), q(3)];
        assert_eq!(lower_cells(&pts, &convex), vec![vec![0, 2], vec![2, 3]]);
        let flat = [q(0), q(0), q(0), q(0)];
        assert_eq!(lower_cells(&pts, &flat), vec![vec![0, 1, 2, 3]]);
        let refined = lex_cells(&pts, &[&flat, &[q(0), q(-1), q(0), q(0)]]);
        assert_eq!(refined, vec![vec![0, 1], vec![1, 3]]);
    }

    #[test]
    fn staircase_lifting_on_bilinear_family() {
        let fam = bilinear();
        let lift: Vec<BigRational> = (0..3)
            .flat_map(|i| fam.support(i).iter().map(move |a| q((i as i64 + 1) * (a.0[0] + a.0[1]))))
            .collect();
        let sub = MixedSubdivision::new(&fam, vec![lift]).unwrap();
        assert!(sub.is_tight());
        assert_eq!(sub.cells.len(), 9);
        for i in 0..3 {
            assert_eq!(sub.mixed_cells(i).len(), 2);
            assert_eq!(sub.mixed_volume_from_cells(i), q(2));
        }
        let total = sub.cells.iter().fold(q(0), |a, c| a + &c.volume);
        assert_eq!(total, q(9));
    }

    #[test]
    fn generic_subdivision_recovers_mixed_volumes() {
        let fam = SupportFamily::from_coords(
            2,
            &[&[&[0, 0], &[1, 0], &[0, 1]], &[&[0, 0], &[2, 0], &[0, 2], &[1, 1]], &[&[0, 0], &[1, 2], &[2, 1]]],
        )
        .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let sub = MixedSubdivision::generic(&fam, &mut rng).unwrap();
        let minkowski = fam.minkowski_sum().unwrap().volume();
        let total = sub.cells.iter().fold(q(0), |a, c| a + &c.volume);
        assert_eq!(total, minkowski);
        for i in 0..3 {
            let mv = BigRational::from_integer(fam.mixed_volume_without(i).unwrap());
            assert_eq!(sub.mixed_volume_from_cells(i), mv);
        }
    }

    #[test]
    fn json_roundtrip() {
        let fam = bilinear();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let sub = MixedSubdivision::generic(&fam, &mut rng).unwrap();
        let text = serde_json::to_vec(&sub).unwrap();
        assert_eq!(MixedSubdivision::from_json_bytes(&text).unwrap(), sub);
    }
}
