//! Lattice ranks of support subfamilies, essential subfamilies and the
//! codimension of the resultant variety.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{FamilyError, SupportFamily};
use crate::geometry::LatticePoint;

/// Largest number of supports handled by subset enumeration.
pub const MAX_SUPPORTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EliminationError {
    #[error("{0} supports exceed the limit of {MAX_SUPPORTS}")]
    TooManySupports(usize),
    #[error("essential subfamily {0:?} is a proper subfamily")]
    EssentialProper(Vec<usize>),
    #[error("resultant variety has codimension {0}; there is no resultant polynomial")]
    NoHypersurface(usize),
    #[error("lattice coordinates overflow")]
    Overflow,
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Smith normal form diagonal of an integer matrix given by rows; returns
/// the nonzero invariant factors in divisibility order.
pub fn smith_invariants(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Pick the smallest nonzero entry of the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..m {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..n {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Enforce divisibility of the rest of the block by the pivot.
            let bad = (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| {
                !(&a[i][j] % &a[t][t]).is_zero()
            });
            match bad {
                Some((i, _)) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Generators of `L_J`: differences `a - a_0` inside each support of `J`.
fn difference_generators(family: &SupportFamily, subset: &[usize]) -> Vec<Vec<BigInt>> {
    let mut gens = Vec::new();
    for &i in subset {
        let s = family.support(i);
        for a in &s[1..] {
            gens.push(a.sub(&s[0]).to_big());
        }
    }
    gens
}

/// Rank of the lattice `L_J` generated by the supports indexed by `subset`.
pub fn lattice_rank(family: &SupportFamily, subset: &[usize]) -> usize {
    smith_invariants(&difference_generators(family, subset)).len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetRank {
    pub supports: Vec<usize>,
    pub rank: usize,
}

/// Ranks of all subfamilies and the resulting essential subfamilies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyAnalysis {
    pub ranks: Vec<SubsetRank>,
    /// `max_J (|J| - rank(J))`, the codimension of the resultant variety.
    pub codimension: usize,
    pub essential: Vec<Vec<usize>>,
    /// Invariant factors of the lattice generated by the whole family.
    pub lattice_invariants: Vec<String>,
}

impl FamilyAnalysis {
    /// The unique essential subfamily when the resultant variety is a hypersurface.
    pub fn unique_essential(&self) -> Option<&[usize]> {
        match (self.codimension, self.essential.as_slice()) {
            (1, [only]) => Some(only),
            _ => None,
        }
    }
}

fn members(mask: u32, k: usize) -> Vec<usize> {
    (0..k).filter(|&i| mask & (1 << i) != 0).collect()
}

pub fn analyze(family: &SupportFamily) -> Result<FamilyAnalysis, EliminationError> {
    let k = family.len();
    if k > MAX_SUPPORTS {
        return Err(EliminationError::TooManySupports(k));
    }
    let full = (1u32 << k) - 1;
    let mut rank = vec![0usize; 1 << k];
    let mut ranks = Vec::new();
    for mask in 1..=full {
        let subset = members(mask, k);
        rank[mask as usize] = lattice_rank(family, &subset);
        ranks.push(SubsetRank {
            supports: subset,
            rank: rank[mask as usize],
        });
    }
    let defect = |mask: u32| mask.count_ones() as i64 - rank[mask as usize] as i64;
    let codimension = (1..=full).map(defect).max().unwrap_or(0).max(0) as usize;
    let mut essential = Vec::new();
    for mask in 1..=full {
        if defect(mask) != 1 {
            continue;
        }
        // Every proper nonempty subfamily must have full rank.
        let mut proper = (mask - 1) & mask;
        let mut ok = true;
        while proper != 0 {
            if defect(proper) > 0 {
                ok = false;
                break;
            }
            proper = (proper - 1) & mask;
        }
        if ok {
            essential.push(members(mask, k));
        }
    }
    let lattice_invariants = smith_invariants(&difference_generators(family, &members(full, k)))
        .iter()
        .map(|d| d.to_string())
        .collect();
    Ok(FamilyAnalysis {
        ranks,
        codimension,
        essential,
        lattice_invariants,
    })
}

/// The essential subfamily rewritten in coordinates of its own lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub supports: Vec<usize>,
    pub family: SupportFamily,
    /// `coefficient_map[g]` is the original global index of the restricted
    /// family's coefficient `g`.
    pub coefficient_map: Vec<usize>,
}

/// Integer row echelon basis of the lattice spanned by `gens`.
fn lattice_basis(gens: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis = Vec::new();
    for c in 0..n {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| rows[r][c].abs()).unwrap();
            for &r in &nz {
                if r != p {
                    let q = rows[r][c].div_floor(&rows[p][c]);
                    let pr = rows[p].clone();
                    for (x, y) in rows[r].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&r| !rows[r][c].is_zero()) {
            basis.push(rows.remove(p));
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    basis
}

/// Coordinates of `x` in an echelon lattice basis.
fn coordinates(basis: &[Vec<BigInt>], x: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = x.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let pc = b.iter().position(|v| !v.is_zero())?;
        let (q, r) = rest[pc].div_rem(&b[pc]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in rest.iter_mut().zip(b) {
            *x -= &q * y;
        }
        out.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(out)
}

/// Restricts to the subfamily `subset`, translated and written in a basis
/// of `L_subset`. The subset must satisfy `rank = |subset| - 1`.
pub fn restrict(family: &SupportFamily, subset: &[usize]) -> Result<Restriction, EliminationError> {
    let gens = difference_generators(family, subset);
    let basis = lattice_basis(&gens, family.n());
    let dim = basis.len();
    let mut supports = Vec::new();
    for &i in subset {
        let s = family.support(i);
        let mut pts = Vec::new();
        for a in s {
            let c = coordinates(&basis, &a.sub(&s[0]).to_big()).expect("difference lies in its lattice");
            let c: Vec<i64> = c.iter().map(|v| v.to_i64().ok_or(EliminationError::Overflow)).collect::<Result<_, _>>()?;
            pts.push(LatticePoint(c));
        }
        supports.push(pts);
    }
    let restricted = SupportFamily::new(dim, supports)?;
    // Sorting inside SupportFamily may permute points; map them back.
    let mut coefficient_map = Vec::with_capacity(restricted.total_size());
    for (pos, &i) in subset.iter().enumerate() {
        let s = family.support(i);
        let coords: Vec<LatticePoint> = s
            .iter()
            .map(|a| {
                let c = coordinates(&basis, &a.sub(&s[0]).to_big()).unwrap();
                LatticePoint(c.iter().map(|v| v.to_i64().unwrap()).collect())
            })
            .collect();
        for p in restricted.support(pos) {
            let k = coords.iter().position(|c| c == p).unwrap();
            coefficient_map.push(family.global_index(i, k));
        }
    }
    Ok(Restriction {
        supports: subset.to_vec(),
        family: restricted,
        coefficient_map,
    })
}

/// Index of the lattice generated by the differences in its saturation,
/// the product of the invariant factors.
pub fn lattice_index(family: &SupportFamily, subset: &[usize]) -> BigInt {
    smith_invariants(&difference_generators(family, subset))
        .iter()
        .fold(BigInt::one(), |a, b| a * b)
}
