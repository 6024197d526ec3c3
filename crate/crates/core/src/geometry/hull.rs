//! Incremental placing triangulation of full-dimensional integer point sets.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{dot, normal_of, sub, IVec};

/// The closed halfspace `<normal, x> + offset >= 0`, normal primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Halfspace {
    pub normal: IVec,
    pub offset: BigInt,
}

impl Halfspace {
    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        dot(&self.normal, x) + &self.offset
    }

    /// Hyperplane through `d` points of `R^d`, oriented so that `inside`
    /// lies strictly on the positive side.
    fn through(points: &[&IVec], inside: &IVec) -> Halfspace {
        let d = inside.len();
        let base = points[0];
        let diffs: Vec<IVec> = points[1..].iter().map(|p| sub(p, base)).collect();
        let normal = normal_of(&diffs, d);
        let offset = -dot(&normal, base);
        let mut h = Halfspace { normal, offset };
        let s = h.eval(inside);
        debug_assert!(!s.is_zero(), "degenerate simplex");
        if s.is_negative() {
            h.normal.iter_mut().for_each(|x| *x = -&*x);
            h.offset = -h.offset;
        }
        h
    }
}

/// Triangulation of the convex hull of the points inserted so far, together
/// with its boundary faces. Points are only stored when they extend the hull.
#[derive(Clone, Debug)]
pub(crate) struct Placing {
    pub points: Vec<IVec>,
    /// Caller-supplied identifiers of `points`.
    pub ids: Vec<usize>,
    pub simplices: Vec<Vec<usize>>,
    boundary: BTreeMap<Vec<usize>, Halfspace>,
}

impl Placing {
    /// Starts from `d + 1` affinely independent points of `R^d`, `d >= 1`.
    pub fn new(simplex: Vec<IVec>, ids: Vec<usize>) -> Placing {
        let dim = simplex.len() - 1;
        assert!(dim >= 1 && simplex.iter().all(|p| p.len() == dim));
        let mut boundary = BTreeMap::new();
        for skip in 0..=dim {
            let face: Vec<usize> = (0..=dim).filter(|&i| i != skip).collect();
            let pts: Vec<&IVec> = face.iter().map(|&i| &simplex[i]).collect();
            boundary.insert(face, Halfspace::through(&pts, &simplex[skip]));
        }
        Placing {
            points: simplex,
            ids,
            simplices: vec![(0..=dim).collect()],
            boundary,
        }
    }

    /// Inserts `p` if it lies outside the current hull; returns whether the
    /// hull grew.
    pub fn insert(&mut self, p: IVec, id: usize) -> bool {
        let visible: Vec<Vec<usize>> = self
            .boundary
            .iter()
            .filter(|(_, h)| h.eval(&p).is_negative())
            .map(|(f, _)| f.clone())
            .collect();
        if visible.is_empty() {
            return false;
        }
        let new_idx = self.points.len();
        self.points.push(p);
        self.ids.push(id);
        let mut fresh: HashMap<Vec<usize>, usize> = HashMap::new();
        for face in &visible {
            self.boundary.remove(face);
            let mut simplex = face.clone();
            simplex.push(new_idx);
            self.simplices.push(simplex);
            for (k, &opposite) in face.iter().enumerate() {
                let mut f: Vec<usize> = face.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
                f.push(new_idx);
                if fresh.remove(&f).is_none() {
                    fresh.insert(f, opposite);
                }
            }
        }
        for (face, opposite) in fresh {
            let pts: Vec<&IVec> = face.iter().map(|&i| &self.points[i]).collect();
            let h = Halfspace::through(&pts, &self.points[opposite]);
            self.boundary.insert(face, h);
        }
        true
    }

    /// Distinct facet halfspaces of the hull.
    pub fn facets(&self) -> Vec<Halfspace> {
        let mut hs: Vec<Halfspace> = self.boundary.values().cloned().collect();
        hs.sort();
        hs.dedup();
        hs
    }
}
