//! Recovers a resultant, possibly with some coefficients specialized, from
//! the lattice points of its Newton polytope by solving for the unknown
//! coefficients over a prime field.
//!
//! Two sample sources are supported. Planted roots give points on the
//! hypersurface, so the polynomial is a kernel vector of the monomial
//! matrix and is returned primitive up to sign. Evaluations pair random
//! points with resultant values from the matrix formula and recover the
//! exact normalization; this is the only option when some polynomial has
//! no free coefficient.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::field::{crt, is_prime_u64, rational_reconstruct_big};
use crate::arith::matrix::kernel;
use crate::arith::{Field, MultiPoly, PrimeField, Rationals};
use crate::canny_emiris::{certified_matrices, CeMatrices, CeOptions};
use crate::family::SupportFamily;
use crate::geometry::LatticePoint;
use crate::resultant::{self, ResultantError, Route};
use crate::sampling::{planted_root, SampleError};

/// First modulus tried; further primes are taken just below it.
pub const INTERP_PRIME: u64 = (1 << 61) - 1;
/// Primes combined before giving up on reconstruction.
pub const MAX_PRIMES: usize = 64;
/// Samples taken beyond the number of unknowns.
pub const EXTRA_SAMPLES: usize = 10;
/// Fresh samples the result is checked against.
pub const HELD_OUT_SAMPLES: usize = 10;
const MAX_ROUNDS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("kernel has dimension {corank} after {samples} samples")]
    CorankTooHigh { corank: usize, samples: usize },
    #[error("no polynomial supported on the candidate monomials fits the samples")]
    EmptyKernel,
    #[error("polynomial {0} has no free coefficient to plant a root with")]
    NoFreeCoefficient(usize),
    #[error("monomial {index} has {found} coordinates, expected {expected}")]
    MonomialDimension { index: usize, expected: usize, found: usize },
    #[error("monomial {0} has a negative exponent")]
    NegativeExponent(usize),
    #[error("template has {found} entries, expected {expected}")]
    TemplateLength { expected: usize, found: usize },
    #[error("template value for coefficient {0} is not defined modulo the prime")]
    BadTemplateValue(usize),
    #[error("rational reconstruction did not stabilize within {MAX_PRIMES} primes")]
    Reconstruction,
    #[error("recovered polynomial does not fit held-out samples")]
    HeldOut,
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Resultant(#[from] ResultantError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    PlantedRoot,
    Evaluation,
}

/// Unknown polynomial in the free coefficients of a family.
#[derive(Clone, Debug)]
pub struct InterpProblem {
    family: SupportFamily,
    template: Vec<Option<BigRational>>,
    free: Vec<usize>,
    monomials: Vec<LatticePoint>,
}

impl InterpProblem {
    /// `monomials` are exponent vectors over the free (`None`) entries of
    /// `template`, in increasing coefficient order.
    pub fn new(
        family: &SupportFamily,
        template: Vec<Option<BigRational>>,
        monomials: Vec<LatticePoint>,
    ) -> Result<Self, InterpError> {
        if template.len() != family.total_size() {
            return Err(InterpError::TemplateLength {
                expected: family.total_size(),
                found: template.len(),
            });
        }
        let free: Vec<usize> = (0..template.len()).filter(|&g| template[g].is_none()).collect();
        for (index, m) in monomials.iter().enumerate() {
            if m.dim() != free.len() {
                return Err(InterpError::MonomialDimension {
                    index,
                    expected: free.len(),
                    found: m.dim(),
                });
            }
            if m.coords().iter().any(|&e| e < 0) {
                return Err(InterpError::NegativeExponent(index));
            }
        }
        Ok(InterpProblem {
            family: family.clone(),
            template,
            free,
            monomials,
        })
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn monomials(&self) -> &[LatticePoint] {
        &self.monomials
    }

    /// Planted roots when every polynomial has a free coefficient,
    /// evaluations otherwise.
    pub fn default_source(&self) -> SampleSource {
        let all_have_free = (0..self.family.len()).all(|i| {
            let off = self.family.offset(i);
            (0..self.family.support(i).len()).any(|k| self.template[off + k].is_none())
        });
        if all_have_free {
            SampleSource::PlantedRoot
        } else {
            SampleSource::Evaluation
        }
    }

    fn variable_names(&self) -> std::sync::Arc<Vec<String>> {
        let names = self.family.coefficient_names();
        std::sync::Arc::new(self.free.iter().map(|&g| names[g].clone()).collect())
    }

    fn template_mod(&self, field: &PrimeField) -> Result<Vec<Option<u64>>, InterpError> {
        self.template
            .iter()
            .enumerate()
            .map(|(g, t)| match t {
                None => Ok(None),
                Some(r) => field.from_rational(r).map(Some).ok_or(InterpError::BadTemplateValue(g)),
            })
            .collect()
    }

    fn monomial_row(&self, field: &PrimeField, coeffs: &[u64]) -> Vec<u64> {
        let vals: Vec<u64> = self.free.iter().map(|&g| coeffs[g]).collect();
        self.monomials
            .iter()
            .map(|m| {
                m.coords()
                    .iter()
                    .zip(&vals)
                    .fold(1u64, |acc, (&e, v)| field.mul(&acc, &field.pow(v, e as u64)))
            })
            .collect()
    }
}

/// Coefficient vectors on the resultant hypersurface obtained by planting a
/// common torus root.
pub fn sample_on_resultant<F: Field, R: Rng + ?Sized>(
    family: &SupportFamily,
    field: &F,
    template: &[Option<F::Elem>],
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<F::Elem>>, InterpError> {
    (0..count)
        .map(|_| Ok(planted_root(family, field, template, rng)?.0))
        .collect()
}

/// Evaluates the resultant at specializations of one family, building the
/// matrix pair once.
struct Evaluator {
    matrices: Option<CeMatrices>,
    opts: CeOptions,
}

impl Evaluator {
    fn new<R: Rng + ?Sized>(family: &SupportFamily, opts: &CeOptions, rng: &mut R) -> Result<Self, InterpError> {
        let (route, _) = resultant::route(family)?;
        let matrices = match route {
            Route::Matrix => Some(certified_matrices(family, opts, rng).map_err(ResultantError::from)?.1),
            _ => None,
        };
        Ok(Evaluator {
            matrices,
            opts: opts.clone(),
        })
    }

    fn value<R: Rng + ?Sized>(
        &self,
        family: &SupportFamily,
        field: &PrimeField,
        coeffs: &[u64],
        rng: &mut R,
    ) -> Result<u64, InterpError> {
        Ok(match &self.matrices {
            Some(m) => m.evaluate(field, coeffs, rng).map_err(ResultantError::from)?,
            None => resultant::value(family, field, coeffs, &self.opts, true, rng)?,
        })
    }
}

/// A random specialization of the free coefficients with nonzero entries.
fn random_point<R: Rng + ?Sized>(field: &PrimeField, template: &[Option<u64>], rng: &mut R) -> Vec<u64> {
    template.iter().map(|t| t.unwrap_or_else(|| field.random(rng))).collect()
}

#[derive(Clone, Debug)]
pub struct Interpolant {
    pub polynomial: MultiPoly<Rationals>,
    pub source: SampleSource,
    /// Samples per prime.
    pub samples: usize,
    /// Number of primes combined.
    pub primes: usize,
}

/// Primes below `2^61`, from the top down.
fn moduli() -> impl Iterator<Item = u64> {
    std::iter::once(INTERP_PRIME).chain((1..).map(|k| INTERP_PRIME - 2 * k).filter(|&p| is_prime_u64(p)))
}

/// One random row of the sample matrix.
fn sample_row<R: Rng + ?Sized>(
    problem: &InterpProblem,
    field: &PrimeField,
    template: &[Option<u64>],
    evaluator: Option<&Evaluator>,
    rng: &mut R,
) -> Result<Vec<u64>, InterpError> {
    match evaluator {
        None => {
            let c = sample_on_resultant(&problem.family, field, template, 1, rng)?.remove(0);
            Ok(problem.monomial_row(field, &c))
        }
        Some(ev) => {
            let c = random_point(field, template, rng);
            let mut row = problem.monomial_row(field, &c);
            row.push(field.neg(&ev.value(&problem.family, field, &c, rng)?));
            Ok(row)
        }
    }
}

/// The unique kernel vector of the sample matrix modulo one prime.
fn modular_kernel<R: Rng + ?Sized>(
    problem: &InterpProblem,
    field: &PrimeField,
    evaluator: Option<&Evaluator>,
    rng: &mut R,
) -> Result<(Vec<u64>, usize), InterpError> {
    let template = problem.template_mod(field)?;
    let unknowns = problem.monomials.len() + usize::from(evaluator.is_some());
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut target = unknowns + EXTRA_SAMPLES;
    for _ in 0..MAX_ROUNDS {
        while rows.len() < target {
            rows.push(sample_row(problem, field, &template, evaluator, rng)?);
        }
        let flat: Vec<u64> = rows.iter().flatten().copied().collect();
        let ker = kernel(field, rows.len(), unknowns, &flat);
        match ker.len() {
            0 => return Err(InterpError::EmptyKernel),
            1 => return Ok((ker.into_iter().next().unwrap(), rows.len())),
            _ => target *= 2,
        }
    }
    let flat: Vec<u64> = rows.iter().flatten().copied().collect();
    Err(InterpError::CorankTooHigh {
        corank: kernel(field, rows.len(), unknowns, &flat).len(),
        samples: rows.len(),
    })
}

/// Solves for the polynomial on the problem's monomials, combining
/// solutions modulo several primes until the reconstruction stabilizes.
pub fn interpolate<R: Rng + ?Sized>(
    problem: &InterpProblem,
    source: SampleSource,
    opts: &CeOptions,
    rng: &mut R,
) -> Result<Interpolant, InterpError> {
    let evaluator = match source {
        SampleSource::Evaluation => Some(Evaluator::new(&problem.family, opts, rng)?),
        SampleSource::PlantedRoot => None,
    };
    let evaluator = evaluator.as_ref();
    let mut primes = moduli();
    let mut pivot: Option<usize> = None;
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<BigRational>> = None;
    let mut used = 0;
    let mut samples;
    let solution = loop {
        if used == MAX_PRIMES {
            return Err(InterpError::Reconstruction);
        }
        let p = primes.next().expect("enough primes below 2^61");
        let field = PrimeField::new(p).expect("prime modulus");
        let (v, rows) = modular_kernel(problem, &field, evaluator, rng)?;
        samples = rows;
        let piv = *pivot.get_or_insert_with(|| match source {
            SampleSource::PlantedRoot => v.iter().rposition(|x| *x != 0).expect("nonzero kernel vector"),
            SampleSource::Evaluation => problem.monomials.len(),
        });
        let Some(inv) = field.inv(&v[piv]) else {
            if source == SampleSource::Evaluation {
                return Err(InterpError::EmptyKernel);
            }
            continue;
        };
        let normalized: Vec<u64> = v[..problem.monomials.len()].iter().map(|x| field.mul(x, &inv)).collect();
        if residues.is_empty() {
            residues = normalized.iter().map(|&x| BigInt::from(x)).collect();
        } else {
            for (r, &x) in residues.iter_mut().zip(&normalized) {
                *r = crt(r, &modulus, x, p);
            }
        }
        modulus *= p;
        used += 1;
        let current: Option<Vec<BigRational>> = residues.iter().map(|r| rational_reconstruct_big(r, &modulus)).collect();
        if let Some(c) = &current {
            if previous.as_ref() == Some(c) {
                break c.clone();
            }
        }
        previous = current;
    };

    let coefficients = match source {
        SampleSource::PlantedRoot => primitive_integer(&solution),
        SampleSource::Evaluation => solution,
    };
    let vars = problem.variable_names();
    let terms = problem
        .monomials
        .iter()
        .zip(coefficients)
        .map(|(m, c)| (m.coords().iter().map(|&e| e as u32).collect(), c));
    let polynomial = MultiPoly::from_terms(Rationals, vars, terms.collect::<Vec<_>>());
    held_out_check(problem, &polynomial, evaluator, primes.next().expect("enough primes"), rng)?;
    Ok(Interpolant {
        polynomial,
        source,
        samples,
        primes: used,
    })
}

/// Checks the polynomial against fresh samples modulo an unused prime.
fn held_out_check<R: Rng + ?Sized>(
    problem: &InterpProblem,
    polynomial: &MultiPoly<Rationals>,
    evaluator: Option<&Evaluator>,
    p: u64,
    rng: &mut R,
) -> Result<(), InterpError> {
    let field = PrimeField::new(p).expect("prime modulus");
    let template = problem.template_mod(&field)?;
    let index: HashMap<Vec<u32>, usize> = problem
        .monomials
        .iter()
        .enumerate()
        .map(|(k, m)| (m.coords().iter().map(|&e| e as u32).collect(), k))
        .collect();
    let reduced: Vec<(usize, u64)> = polynomial
        .terms()
        .map(|(exp, c)| Ok((index[exp], field.from_rational(c).ok_or(InterpError::Reconstruction)?)))
        .collect::<Result<_, InterpError>>()?;
    for _ in 0..HELD_OUT_SAMPLES {
        let row = sample_row(problem, &field, &template, evaluator, rng)?;
        let value = reduced.iter().fold(0u64, |acc, (k, c)| field.add(&acc, &field.mul(c, &row[*k])));
        let expected = match evaluator {
            None => 0,
            Some(_) => field.neg(&row[problem.monomials.len()]),
        };
        if value != expected {
            return Err(InterpError::HeldOut);
        }
    }
    Ok(())
}

/// Scales a rational vector to a primitive integer vector whose last
/// nonzero entry is positive.
fn primitive_integer(v: &[BigRational]) -> Vec<BigRational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let last_negative = ints.iter().rev().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let sign = if last_negative { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|x| BigRational::from_integer(x / &gcd * &sign)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_determinant_from_planted_roots() {
        let fam = SupportFamily::from_coords(1, &[&[&[0], &[1]], &[&[0], &[1]]]).unwrap();
        let monomials = [[1, 0, 0, 1], [0, 1, 1, 0]].iter().map(|m| LatticePoint(m.to_vec())).collect();
        let problem = InterpProblem::new(&fam, vec![None; 4], monomials).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = interpolate(&problem, SampleSource::PlantedRoot, &CeOptions::default(), &mut rng).unwrap();
        let coeffs: Vec<BigRational> = r.polynomial.terms().map(|(_, c)| c.clone()).collect();
        let one = BigRational::one();
        assert!(coeffs == vec![one.clone(), -one.clone()] || coeffs == vec![-one.clone(), one]);
    }

    #[test]
    fn evaluation_recovers_normalization() {
        let fx = fixtures::general_quadratic_and_binomial();
        let monomials = [[0, 0, 2, 2, 0], [0, 2, 0, 1, 1], [2, 0, 0, 0, 2], [1, 0, 1, 1, 1]]
            .iter()
            .map(|m| LatticePoint(m.to_vec()))
            .collect();
        let problem = InterpProblem::new(&fx.family, vec![None; 5], monomials).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let r = interpolate(&problem, SampleSource::Evaluation, &CeOptions::default(), &mut rng).unwrap();
        assert_eq!(r.polynomial.num_terms(), 4);
        let abs: Vec<BigRational> = r.polynomial.terms().map(|(_, c)| c.abs()).collect();
        assert!(abs.iter().filter(|c| c.is_one()).count() == 3);
    }

    #[test]
    fn too_few_monomials_give_empty_kernel() {
        let fam = SupportFamily::from_coords(1, &[&[&[0], &[1]], &[&[0], &[1]]]).unwrap();
        let monomials = vec![LatticePoint(vec![1, 0, 0, 1])];
        let problem = InterpProblem::new(&fam, vec![None; 4], monomials).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let err = interpolate(&problem, SampleSource::PlantedRoot, &CeOptions::default(), &mut rng).unwrap_err();
        assert_eq!(err, InterpError::EmptyKernel);
    }
}
