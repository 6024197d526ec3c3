//! Resultant front end: classifies the family by its essential subsets and
//! routes to the matrix formula, a power of a single coefficient, or the
//! constant 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{Field, MultiPoly, Rationals};
use crate::canny_emiris::{resultant_symbolic, resultant_value, CeError, CeOptions};
use crate::elimination::{analyze, restrict, EliminationError, FamilyAnalysis};
use crate::family::SupportFamily;
use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResultantError {
    #[error("the essential subfamily {0:?} is proper; restrict to it to compute the resultant")]
    EssentialProper(Vec<usize>),
    #[error("coefficient vector has {found} entries, expected {expected}")]
    CoefficientLength { expected: usize, found: usize },
    #[error("exponent {0} does not fit in a machine word")]
    ExponentOverflow(BigInt),
    #[error(transparent)]
    Ce(#[from] CeError),
    #[error(transparent)]
    Elimination(#[from] EliminationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl ResultantError {
    /// True when the input is well formed but violates a hypothesis of the
    /// method (as opposed to malformed input).
    pub fn is_hypothesis_failure(&self) -> bool {
        match self {
            ResultantError::EssentialProper(_) => true,
            ResultantError::Ce(e) => e.is_hypothesis_failure(),
            _ => false,
        }
    }
}

/// How the resultant of a family is obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Route {
    /// No hypersurface: the resultant is the constant 1.
    Constant { codimension: usize },
    /// A single point support is essential: the resultant is its
    /// coefficient raised to the mixed volume of the others.
    Monomial {
        coefficient: usize,
        #[serde(with = "crate::serde_util::int")]
        exponent: BigInt,
    },
    /// The whole family is essential: use the matrix formula.
    Matrix,
    /// A proper subfamily of several supports is essential.
    Proper { supports: Vec<usize> },
}

pub fn route(family: &SupportFamily) -> Result<(Route, FamilyAnalysis), ResultantError> {
    family.require_resultant_shape().map_err(EliminationError::from)?;
    let analysis = analyze(family)?;
    let route = if analysis.codimension != 1 {
        Route::Constant {
            codimension: analysis.codimension,
        }
    } else {
        let essential = analysis
            .unique_essential()
            .ok_or(EliminationError::NoHypersurface(analysis.essential.len()))?
            .to_vec();
        if essential.len() == family.len() {
            Route::Matrix
        } else if essential.len() == 1 {
            let i = essential[0];
            Route::Monomial {
                coefficient: family.offset(i),
                exponent: family.mixed_volume_without(i)?,
            }
        } else {
            Route::Proper { supports: essential }
        }
    };
    Ok((route, analysis))
}

fn exponent_u32(e: &BigInt) -> Result<u32, ResultantError> {
    e.to_u32().ok_or_else(|| ResultantError::ExponentOverflow(e.clone()))
}

/// Symbolic resultant in the coefficient variables of `family`; entries of
/// `template` that are `Some` are substituted. With `restrict_essential`, a
/// proper essential subfamily is resolved by computing the resultant of the
/// subfamily in its own lattice.
pub fn symbolic<R: Rng + ?Sized>(
    family: &SupportFamily,
    template: &[Option<BigRational>],
    opts: &CeOptions,
    restrict_essential: bool,
    rng: &mut R,
) -> Result<MultiPoly<Rationals>, ResultantError> {
    if template.len() != family.total_size() {
        return Err(ResultantError::CoefficientLength {
            expected: family.total_size(),
            found: template.len(),
        });
    }
    let names = family.coefficient_names();
    let (route, _) = route(family)?;
    match route {
        Route::Constant { .. } => Ok(MultiPoly::one(Rationals, names)),
        Route::Monomial { coefficient, exponent } => {
            let e = exponent_u32(&exponent)?;
            let base = match &template[coefficient] {
                Some(c) => MultiPoly::constant(Rationals, names, c.clone()),
                None => MultiPoly::var(Rationals, names, coefficient),
            };
            Ok(base.pow(e))
        }
        Route::Matrix => Ok(resultant_symbolic(family, template, opts, rng)?.0),
        Route::Proper { supports } if restrict_essential => {
            let r = restrict(family, &supports)?;
            let sub_template: Vec<_> = r.coefficient_map.iter().map(|&g| template[g].clone()).collect();
            let inner = symbolic(&r.family, &sub_template, &CeOptions { lifting: None, delta: None, ..opts.clone() }, false, rng)?;
            let total = family.total_size();
            let terms = inner.terms().map(|(exp, c)| {
                let mut full = vec![0u32; total];
                for (k, &e) in exp.iter().enumerate() {
                    full[r.coefficient_map[k]] = e;
                }
                (full, c.clone())
            });
            Ok(MultiPoly::from_terms(Rationals, names, terms.collect::<Vec<_>>()))
        }
        Route::Proper { supports } => Err(ResultantError::EssentialProper(supports)),
    }
}

/// The resultant evaluated at a full coefficient vector.
pub fn value<F: Field, R: Rng + ?Sized>(
    family: &SupportFamily,
    field: &F,
    coeffs: &[F::Elem],
    opts: &CeOptions,
    restrict_essential: bool,
    rng: &mut R,
) -> Result<F::Elem, ResultantError> {
    if coeffs.len() != family.total_size() {
        return Err(ResultantError::CoefficientLength {
            expected: family.total_size(),
            found: coeffs.len(),
        });
    }
    let (route, _) = route(family)?;
    match route {
        Route::Constant { .. } => Ok(field.one()),
        Route::Monomial { coefficient, exponent } => {
            Ok(field.pow(&coeffs[coefficient], u64::from(exponent_u32(&exponent)?)))
        }
        Route::Matrix => Ok(resultant_value(family, field, coeffs, opts, rng)?),
        Route::Proper { supports } if restrict_essential => {
            let r = restrict(family, &supports)?;
            let sub: Vec<F::Elem> = r.coefficient_map.iter().map(|&g| coeffs[g].clone()).collect();
            value(&r.family, field, &sub, &CeOptions { lifting: None, delta: None, ..opts.clone() }, false, rng)
        }
        Route::Proper { supports } => Err(ResultantError::EssentialProper(supports)),
    }
}

/// Total degree of the resultant in the coefficients of each polynomial,
/// `MV_{-i}`, for a family whose whole family is essential.
pub fn degrees(family: &SupportFamily) -> Result<Vec<BigInt>, ResultantError> {
    (0..family.len())
        .map(|i| family.mixed_volume_without(i).map_err(ResultantError::from))
        .collect()
}
