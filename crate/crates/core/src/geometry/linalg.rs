//! Small exact linear algebra over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::field::Rationals;
use crate::arith::matrix;

pub(crate) type IVec = Vec<BigInt>;

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Determinant of an integer matrix by Bareiss elimination.
pub(crate) fn det_int(n: usize, entries: &[BigInt]) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut a = entries.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[k * n + k] * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = t / &prev;
            }
        }
        prev = a[k * n + k].clone();
    }
    let d = a[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Divides a vector by the gcd of its entries.
pub(crate) fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Primitive integer normal of the hyperplane spanned by `d - 1` vectors in
/// `R^d`; all-zero when they are dependent.
pub(crate) fn normal_of(vectors: &[IVec], d: usize) -> IVec {
    debug_assert_eq!(vectors.len(), d - 1);
    let mut n = Vec::with_capacity(d);
    let m = d - 1;
    let mut minor = Vec::with_capacity(m * m);
    for k in 0..d {
        minor.clear();
        for v in vectors {
            for (c, x) in v.iter().enumerate() {
                if c != k {
                    minor.push(x.clone());
                }
            }
        }
        let det = det_int(m, &minor);
        n.push(if k % 2 == 0 { det } else { -det });
    }
    make_primitive(&mut n);
    n
}

pub(crate) fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Scales a rational vector to a primitive integer vector.
pub(crate) fn clear_denominators(v: &[BigRational]) -> IVec {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: IVec = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    make_primitive(&mut out);
    out
}

/// Integer basis of the right kernel of a rational matrix given by rows.
pub(crate) fn kernel_int(rows: &[IVec], cols: usize) -> Vec<IVec> {
    let entries: Vec<BigRational> = rows.iter().flat_map(|r| to_rational(r)).collect();
    matrix::kernel(&Rationals, rows.len(), cols, &entries)
        .iter()
        .map(|v| clear_denominators(v))
        .collect()
}

pub(crate) fn rank_int(rows: &[IVec], cols: usize) -> usize {
    let entries: Vec<BigRational> = rows.iter().flat_map(|r| to_rational(r)).collect();
    matrix::rank(&Rationals, rows.len(), cols, &entries)
}

/// Affine coordinate chart of a finite point set: the affine dimension, a
/// set of coordinates that is injective on the affine hull, and equations
/// cutting out the affine hull.
#[derive(Clone, Debug)]
pub(crate) struct Chart {
    pub dim: usize,
    pub coords: Vec<usize>,
    /// Indices of `dim + 1` affinely independent input points.
    pub basis: Vec<usize>,
    /// Pairs `(e, c)` with `<e, x> + c = 0` on the affine hull.
    pub equations: Vec<(IVec, BigInt)>,
}

impl Chart {
    pub fn new(points: &[IVec]) -> Chart {
        assert!(!points.is_empty());
        let ambient = points[0].len();
        let p0 = &points[0];
        let mut basis = vec![0];
        // Echelon rows over Q, each with its pivot column.
        let mut echelon: Vec<(usize, Vec<BigRational>)> = Vec::new();
        let mut diffs: Vec<IVec> = Vec::new();
        for (i, p) in points.iter().enumerate().skip(1) {
            if echelon.len() == ambient {
                break;
            }
            let d = sub(p, p0);
            let mut r = to_rational(&d);
            for (pc, row) in &echelon {
                if !r[*pc].is_zero() {
                    let f = r[*pc].clone() / &row[*pc];
                    for (x, y) in r.iter_mut().zip(row) {
                        *x -= &f * y;
                    }
                }
            }
            if let Some(pc) = r.iter().position(|x| !x.is_zero()) {
                echelon.push((pc, r));
                basis.push(i);
                diffs.push(d);
            }
        }
        let dim = diffs.len();
        let entries: Vec<BigRational> = diffs.iter().flat_map(|r| to_rational(r)).collect();
        let mut reduced = entries.clone();
        let coords = matrix::rref(&Rationals, dim, ambient, &mut reduced);
        let equations = kernel_int(&diffs, ambient)
            .into_iter()
            .map(|e| {
                let c = -dot(&e, p0);
                (e, c)
            })
            .collect();
        Chart {
            dim,
            coords,
            basis,
            equations,
        }
    }

    pub fn project(&self, p: &[BigInt]) -> IVec {
        self.coords.iter().map(|&c| p[c].clone()).collect()
    }

    pub fn contains(&self, p: &[BigInt]) -> bool {
        self.equations.iter().all(|(e, c)| (dot(e, p) + c).is_zero())
    }

    /// Embeds a chart-coordinate linear functional in ambient coordinates.
    pub fn lift_normal(&self, normal: &[BigInt], ambient: usize) -> IVec {
        let mut out = vec![BigInt::zero(); ambient];
        for (&c, x) in self.coords.iter().zip(normal) {
            out[c] = x.clone();
        }
        out
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IVec {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn normal_is_orthogonal() {
        let n = normal_of(&[iv(&[1, 2, 3]), iv(&[0, 1, 4])], 3);
        assert!(dot(&n, &iv(&[1, 2, 3])).is_zero());
        assert!(dot(&n, &iv(&[0, 1, 4])).is_zero());
        assert_eq!(n, iv(&[5, -4, 1]));
    }

    #[test]
    fn chart_of_planar_points_in_space() {
        let pts = vec![iv(&[0, 0, 1]), iv(&[1, 0, 1]), iv(&[2, 0, 1]), iv(&[0, 3, 1])];
        let ch = Chart::new(&pts);
        assert_eq!(ch.dim, 2);
        assert_eq!(ch.basis, vec![0, 1, 3]);
        assert_eq!(ch.coords, vec![0, 1]);
        assert_eq!(ch.equations.len(), 1);
        assert!(pts.iter().all(|p| ch.contains(p)));
        assert!(!ch.contains(&iv(&[0, 0, 0])));
    }
}
