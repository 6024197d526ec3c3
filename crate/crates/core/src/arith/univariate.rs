//! Dense univariate polynomials over a field, used for restrictions of
//! multivariate determinants to lines.

use super::field::Field;

/// Coefficients in increasing degree with no trailing zeros.
pub type Dense<E> = Vec<E>;

fn trim<F: Field>(field: &F, p: &mut Dense<F::Elem>) {
    while p.last().is_some_and(|c| field.is_zero(c)) {
        p.pop();
    }
}

pub fn eval<F: Field>(field: &F, p: &[F::Elem], x: &F::Elem) -> F::Elem {
    p.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
}

/// Newton interpolation through the points `(xs[k], ys[k])`.
pub fn interpolate<F: Field>(field: &F, xs: &[F::Elem], ys: &[F::Elem]) -> Dense<F::Elem> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = field.sub(&dd[i], &dd[i - 1]);
            let den = field.sub(&xs[i], &xs[i - j]);
            dd[i] = field.div(&num, &den).expect("distinct interpolation nodes");
        }
    }
    let mut p: Dense<F::Elem> = vec![field.zero(); n.max(1)];
    for k in (0..n).rev() {
        // p = p * (x - xs[k]) + dd[k]
        let mut next = vec![field.zero(); p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            next[d + 1] = field.add(&next[d + 1], c);
            next[d] = field.sub(&next[d], &field.mul(c, &xs[k]));
        }
        next[0] = field.add(&next[0], &dd[k]);
        p = next;
    }
    trim(field, &mut p);
    p
}

/// Quotient and remainder; `None` for a zero divisor.
pub fn divrem<F: Field>(
    field: &F,
    num: &[F::Elem],
    den: &[F::Elem],
) -> Option<(Dense<F::Elem>, Dense<F::Elem>)> {
    let mut den = den.to_vec();
    trim(field, &mut den);
    let lead_inv = field.inv(den.last()?)?;
    let mut rem = num.to_vec();
    trim(field, &mut rem);
    if rem.len() < den.len() {
        return Some((vec![], rem));
    }
    let mut quo = vec![field.zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() && !rem.is_empty() {
        let shift = rem.len() - den.len();
        let c = field.mul(rem.last().unwrap(), &lead_inv);
        for (k, d) in den.iter().enumerate() {
            rem[shift + k] = field.sub(&rem[shift + k], &field.mul(&c, d));
        }
        quo[shift] = c;
        rem.pop();
        trim(field, &mut rem);
    }
    trim(field, &mut quo);
    Some((quo, rem))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::PrimeField;

    #[test]
    fn interpolate_then_divide() {
        let f = PrimeField::default();
        // (x + 2)(x^2 - 3)
        let p = |x: i64| (x + 2) * (x * x - 3);
        let xs: Vec<u64> = (1..=5).map(|x| f.from_i64(x)).collect();
        let ys: Vec<u64> = (1..=5).map(|x| f.from_i64(p(x))).collect();
        let poly = interpolate(&f, &xs, &ys);
        assert_eq!(poly, vec![f.from_i64(-6), f.from_i64(-3), 2, 1]);
        let (q, r) = divrem(&f, &poly, &[2, 1]).unwrap();
        assert!(r.is_empty());
        assert_eq!(q, vec![f.from_i64(-3), 0, 1]);
        let (_, r) = divrem(&f, &poly, &[3, 1]).unwrap();
        assert!(!r.is_empty());
        assert_eq!(eval(&f, &poly, &f.from_i64(4)), f.from_i64(p(4)));
    }
}
