//! Random specializations: torus points and coefficient vectors of systems
//! with a planted common root.

use rand::Rng;
use thiserror::Error;

use crate::arith::Field;
use crate::family::SupportFamily;
use crate::geometry::LatticePoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("polynomial {0} has no free coefficient to solve for")]
    DegenerateSample(usize),
    #[error("coefficient template has {found} entries, expected {expected}")]
    TemplateLength { expected: usize, found: usize },
}

/// A point of the torus: every coordinate nonzero.
pub fn torus_point<F: Field, R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Vec<F::Elem> {
    (0..n)
        .map(|_| loop {
            let x = field.random(rng);
            if !field.is_zero(&x) {
                break x;
            }
        })
        .collect()
}

/// `x^a` for a torus point `x`; negative exponents use inverses.
pub fn monomial_value<F: Field>(field: &F, x: &[F::Elem], a: &LatticePoint) -> F::Elem {
    let mut acc = field.one();
    for (xi, &e) in x.iter().zip(a.coords()) {
        let base = if e < 0 {
            field.inv(xi).expect("torus point has nonzero coordinates")
        } else {
            xi.clone()
        };
        acc = field.mul(&acc, &field.pow(&base, e.unsigned_abs()));
    }
    acc
}

/// Value of `f_i = sum_k c_{i,k} x^{a_k}` at `x`.
pub fn eval_polynomial<F: Field>(
    family: &SupportFamily,
    field: &F,
    coeffs: &[F::Elem],
    i: usize,
    x: &[F::Elem],
) -> F::Elem {
    let off = family.offset(i);
    family
        .support(i)
        .iter()
        .enumerate()
        .fold(field.zero(), |acc, (k, a)| {
            field.add(&acc, &field.mul(&coeffs[off + k], &monomial_value(field, x, a)))
        })
}

/// Coefficients, agreeing with `template` where it is `Some`, such that all
/// polynomials vanish at a random torus point. For each polynomial the first
/// free coefficient is solved for; the others are random.
pub fn planted_root<F: Field, R: Rng + ?Sized>(
    family: &SupportFamily,
    field: &F,
    template: &[Option<F::Elem>],
    rng: &mut R,
) -> Result<(Vec<F::Elem>, Vec<F::Elem>), SampleError> {
    if template.len() != family.total_size() {
        return Err(SampleError::TemplateLength {
            expected: family.total_size(),
            found: template.len(),
        });
    }
    let x = torus_point(field, family.n(), rng);
    let mut coeffs: Vec<F::Elem> = template
        .iter()
        .map(|t| t.clone().unwrap_or_else(|| field.random(rng)))
        .collect();
    for i in 0..family.len() {
        let off = family.offset(i);
        let len = family.support(i).len();
        let solved = (0..len)
            .find(|&k| template[off + k].is_none())
            .ok_or(SampleError::DegenerateSample(i))?;
        coeffs[off + solved] = field.zero();
        let rest = eval_polynomial(family, field, &coeffs, i, &x);
        let mono = monomial_value(field, &x, &family.support(i)[solved]);
        coeffs[off + solved] = field.neg(&field.div(&rest, &mono).expect("nonzero monomial"));
    }
    Ok((coeffs, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeField;
    use rand::SeedableRng;

    #[test]
    fn planted_root_vanishes() {
        let fam = SupportFamily::from_coords(
            2,
            &[&[&[0, 0], &[1, 0], &[0, 1]], &[&[-1, 0], &[2, 1]], &[&[0, 0], &[1, 1], &[0, -2]]],
        )
        .unwrap();
        let f = PrimeField::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut template = vec![None; fam.total_size()];
        template[0] = Some(7);
        let (c, x) = planted_root(&fam, &f, &template, &mut rng).unwrap();
        assert_eq!(c[0], 7);
        for i in 0..3 {
            assert_eq!(eval_polynomial(&fam, &f, &c, i, &x), 0);
        }
        let all_fixed = vec![Some(1); fam.total_size()];
        assert_eq!(
            planted_root(&fam, &f, &all_fixed, &mut rng).unwrap_err(),
            SampleError::DegenerateSample(0)
        );
    }
}
