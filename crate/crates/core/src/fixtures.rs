//! Named example systems used by tests, the acceptance suite and the CLI.

use num_rational::BigRational;

use crate::family::SupportFamily;
use crate::geometry::LatticePoint;

/// A support family with an optional partial specialization of its
/// coefficients (`None` entries stay symbolic).
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub family: SupportFamily,
    pub template: Vec<Option<BigRational>>,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
    v.iter().map(|p| LatticePoint(p.to_vec())).collect()
}

fn symbolic(family: SupportFamily, name: &'static str) -> Fixture {
    let template = vec![None; family.total_size()];
    Fixture { name, family, template }
}

/// Template from per-support coefficient lists aligned with the sorted supports.
fn specialized(family: SupportFamily, name: &'static str, values: &[&[Option<i64>]]) -> Fixture {
    let template = values.iter().flat_map(|s| s.iter().map(|v| v.map(q))).collect::<Vec<_>>();
    assert_eq!(template.len(), family.total_size());
    Fixture { name, family, template }
}

/// Two generic univariate polynomials of degrees `d0` and `d1`.
pub fn sylvester(d0: i64, d1: i64) -> Fixture {
    let s0 = (0..=d0).map(|k| LatticePoint(vec![k])).collect();
    let s1 = (0..=d1).map(|k| LatticePoint(vec![k])).collect();
    symbolic(SupportFamily::new(1, vec![s0, s1]).unwrap(), "sylvester")
}

/// `a0 + a1 x + a2 x^2` and `b0 + b1 x^2`.
pub fn general_quadratic_and_binomial() -> Fixture {
    symbolic(
        SupportFamily::new(1, vec![pts(&[&[0], &[1], &[2]]), pts(&[&[0], &[2]])]).unwrap(),
        "quadratic-binomial",
    )
}

/// Binomials `c_i0 + c_i1 x^{a_i}` with `a = (1,1), (1,2), (2,0)`. The
/// template sets every `c_i1 = -1`, leaving `c_i0` as the implicit variables
/// of the monomial curve `(x1 x2, x1 x2^2, x1^2)`.
pub fn monomial_parameterization() -> Fixture {
    let fam = SupportFamily::new(
        2,
        vec![pts(&[&[0, 0], &[1, 1]]), pts(&[&[0, 0], &[1, 2]]), pts(&[&[0, 0], &[2, 0]])],
    )
    .unwrap();
    specialized(fam, "monomial-parameterization", &[&[None, Some(-1)], &[None, Some(-1)], &[None, Some(-1)]])
}

/// Generic linear form `u0 + u1 x1 + u2 x2` together with the circle
/// `x1^2 + x2^2 - 4` and the line `x1 - x2 - 2`.
pub fn u_resultant() -> Fixture {
    let fam = SupportFamily::new(
        2,
        vec![
            pts(&[&[0, 0], &[0, 1], &[1, 0]]),
            pts(&[&[0, 0], &[0, 2], &[2, 0]]),
            pts(&[&[0, 0], &[0, 1], &[1, 0]]),
        ],
    )
    .unwrap();
    specialized(
        fam,
        "u-resultant",
        &[&[None, None, None], &[Some(-4), Some(1), Some(1)], &[Some(-2), Some(-1), Some(1)]],
    )
}

/// Three generic bilinear polynomials in two variables.
pub fn bilinear() -> Fixture {
    let sq = pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
    symbolic(SupportFamily::new(2, vec![sq.clone(), sq.clone(), sq]).unwrap(), "bilinear")
}

/// Three generic affine linear forms in two variables.
pub fn linear() -> Fixture {
    let lin = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
    symbolic(SupportFamily::new(2, vec![lin.clone(), lin.clone(), lin]).unwrap(), "linear")
}

/// Two generic univariate trinomials `c0 + c1 x + c2 x^2`.
pub fn two_trinomials() -> Fixture {
    let t = pts(&[&[0], &[1], &[2]]);
    symbolic(SupportFamily::new(1, vec![t.clone(), t]).unwrap(), "two-trinomials")
}

/// Implicitization of a bicubic surface given by `x - X(s,t)`,
/// `y - Y(s,t)`, `z - Z(s,t)`, exponents ordered `(s, t)`. The constant
/// terms stay symbolic; all other coefficients are fixed.
pub fn bicubic_surface() -> Fixture {
    // X = 3t(t-1)^2 + (s-1)^3 + 3s
    let x_terms: &[(&[i64], i64)] = &[
        (&[0, 0], -1),
        (&[1, 0], 6),
        (&[2, 0], -3),
        (&[3, 0], 1),
        (&[0, 1], 3),
        (&[0, 2], -6),
        (&[0, 3], 3),
    ];
    // Y = 3s(s-1)^2 + t^3 + 3t
    let y_terms: &[(&[i64], i64)] = &[
        (&[1, 0], 3),
        (&[2, 0], -6),
        (&[3, 0], 3),
        (&[0, 1], 3),
        (&[0, 3], 1),
    ];
    // Z = -3s(s^2-5s+5)t^3 - 3(s^3+6s^2-9s+1)t^2 + t(6s^3+9s^2-18s+3) - 3s(s-1)
    let z_terms: &[(&[i64], i64)] = &[
        (&[3, 3], -3),
        (&[2, 3], 15),
        (&[1, 3], -15),
        (&[3, 2], -3),
        (&[2, 2], -18),
        (&[1, 2], 27),
        (&[0, 2], -3),
        (&[3, 1], 6),
        (&[2, 1], 9),
        (&[1, 1], -18),
        (&[0, 1], 3),
        (&[2, 0], -3),
        (&[1, 0], 3),
    ];
    // Each polynomial is (implicit variable) - (parameterization); the
    // constant term carries the implicit variable.
    let mut supports = Vec::new();
    let mut coeffs: Vec<Vec<(LatticePoint, Option<BigRational>)>> = Vec::new();
    for terms in [x_terms, y_terms, z_terms] {
        let mut list: Vec<(LatticePoint, Option<BigRational>)> = vec![(LatticePoint(vec![0, 0]), None)];
        for (e, c) in terms {
            if e == &[0, 0] {
                // Absorbed into the symbolic constant term.
                continue;
            }
            list.push((LatticePoint(e.to_vec()), Some(q(-c))));
        }
        list.sort_by(|a, b| a.0.cmp(&b.0));
        supports.push(list.iter().map(|(p, _)| p.clone()).collect());
        coeffs.push(list);
    }
    let family = SupportFamily::new(2, supports).unwrap();
    let template = coeffs.into_iter().flat_map(|l| l.into_iter().map(|(_, c)| c)).collect();
    Fixture {
        name: "bicubic-surface",
        family,
        template,
    }
}

/// All named fixtures, by name.
pub fn by_name(name: &str) -> Option<Fixture> {
    Some(match name {
        "quadratic-binomial" => general_quadratic_and_binomial(),
        "monomial-parameterization" => monomial_parameterization(),
        "u-resultant" => u_resultant(),
        "bilinear" => bilinear(),
        "linear" => linear(),
        "two-trinomials" => two_trinomials(),
        "bicubic-surface" => bicubic_surface(),
        "sylvester" => sylvester(2, 2),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &[
    "quadratic-binomial",
    "monomial-parameterization",
    "u-resultant",
    "bilinear",
    "linear",
    "two-trinomials",
    "bicubic-surface",
    "sylvester",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bicubic_support_sizes() {
        let f = bicubic_surface();
        let sizes: Vec<usize> = f.family.supports().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![7, 6, 14]);
        assert_eq!(f.template.iter().filter(|t| t.is_none()).count(), 3);
    }

    #[test]
    fn every_name_resolves() {
        for n in NAMES {
            assert_eq!(by_name(n).unwrap().name, *n);
        }
    }
}
