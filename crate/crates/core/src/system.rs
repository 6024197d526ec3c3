//! JSON description of a polynomial system: supports, optional coefficient
//! values, specialization flags and variable names.
//!
//! Supports may list their points in any order. The parsed [`System`]
//! stores everything in the sorted order used by [`SupportFamily`], so
//! coefficient indices in all outputs refer to that order.

use std::collections::HashSet;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::field::{format_rational, parse_rational};
use crate::arith::poly::pointer;
use crate::family::SupportFamily;
use crate::geometry::LatticePoint;

/// Coordinates are bounded so that every derived quantity fits in `i64`.
pub const MAX_COORDINATE: i64 = 1 << 20;
pub const MAX_DIMENSION: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pointer}: {message}")]
pub struct SystemError {
    pub pointer: String,
    pub message: String,
}

fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> SystemError {
    SystemError {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// A coefficient entry: an integer, a rational string, or `"symbolic"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientSpec {
    Integer(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub n: usize,
    pub supports: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Vec<CoefficientSpec>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specialized: Option<Vec<Vec<bool>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A validated system with all per-coefficient data in family order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub family: SupportFamily,
    /// Fixed coefficient values; `None` is symbolic.
    pub template: Vec<Option<BigRational>>,
    /// Coefficients treated as specialized when projecting.
    pub specialized: Vec<bool>,
    pub names: Arc<Vec<String>>,
    pub seed: Option<u64>,
}

/// Checks that `list` has one entry per support point.
fn check_shape<T>(field: &str, list: &[Vec<T>], supports: &[Vec<Vec<i64>>]) -> Result<(), SystemError> {
    if list.len() != supports.len() {
        return Err(invalid(format!("/{field}"), format!("expected {} lists, found {}", supports.len(), list.len())));
    }
    for (i, (l, s)) in list.iter().zip(supports).enumerate() {
        if l.len() != s.len() {
            return Err(invalid(format!("/{field}/{i}"), format!("expected {} entries, found {}", s.len(), l.len())));
        }
    }
    Ok(())
}

impl SystemSpec {
    pub fn validate(&self) -> Result<System, SystemError> {
        if self.n > MAX_DIMENSION {
            return Err(invalid("/n", format!("dimension above {MAX_DIMENSION}")));
        }
        if self.supports.is_empty() {
            return Err(invalid("/supports", "no supports"));
        }
        let mut points: Vec<Vec<LatticePoint>> = Vec::with_capacity(self.supports.len());
        for (i, s) in self.supports.iter().enumerate() {
            if s.is_empty() {
                return Err(invalid(format!("/supports/{i}"), "empty support"));
            }
            let mut seen = HashSet::new();
            for (k, p) in s.iter().enumerate() {
                if p.len() != self.n {
                    return Err(invalid(format!("/supports/{i}/{k}"), format!("expected {} coordinates, found {}", self.n, p.len())));
                }
                if let Some(j) = p.iter().position(|c| c.abs() > MAX_COORDINATE) {
                    return Err(invalid(format!("/supports/{i}/{k}/{j}"), format!("coordinate exceeds {MAX_COORDINATE} in absolute value")));
                }
                if !seen.insert(p.clone()) {
                    return Err(invalid(format!("/supports/{i}/{k}"), "duplicate point"));
                }
            }
            points.push(s.iter().map(|p| LatticePoint(p.clone())).collect());
        }
        let family = SupportFamily::new(self.n, points).map_err(|e| invalid("/supports", e.to_string()))?;
        // Sorted position of each listed point.
        let sorted_index = |i: usize, k: usize| {
            family.global_index(i, family.position(i, &LatticePoint(self.supports[i][k].clone())).expect("point in support"))
        };

        let mut template = vec![None; family.total_size()];
        if let Some(coeffs) = &self.coefficients {
            check_shape("coefficients", coeffs, &self.supports)?;
            for (i, list) in coeffs.iter().enumerate() {
                for (k, c) in list.iter().enumerate() {
                    template[sorted_index(i, k)] = match c {
                        CoefficientSpec::Integer(v) => Some(BigRational::from_integer((*v).into())),
                        CoefficientSpec::Text(t) if t == "symbolic" => None,
                        CoefficientSpec::Text(t) => Some(
                            parse_rational(t)
                                .ok_or_else(|| invalid(format!("/coefficients/{i}/{k}"), format!("invalid rational {t:?}")))?,
                        ),
                    };
                }
            }
        }
        let specialized = match &self.specialized {
            Some(flags) => {
                check_shape("specialized", flags, &self.supports)?;
                let mut out = vec![false; family.total_size()];
                for (i, list) in flags.iter().enumerate() {
                    for (k, &f) in list.iter().enumerate() {
                        out[sorted_index(i, k)] = f;
                    }
                }
                out
            }
            None => template.iter().map(Option::is_some).collect(),
        };
        let names = match &self.names {
            Some(names) => {
                check_shape("names", names, &self.supports)?;
                let mut out = vec![String::new(); family.total_size()];
                let mut seen = HashSet::new();
                for (i, list) in names.iter().enumerate() {
                    for (k, name) in list.iter().enumerate() {
                        let ok = !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                        if !ok {
                            return Err(invalid(format!("/names/{i}/{k}"), "names must be nonempty and alphanumeric"));
                        }
                        if !seen.insert(name.clone()) {
                            return Err(invalid(format!("/names/{i}/{k}"), format!("duplicate name {name:?}")));
                        }
                        out[sorted_index(i, k)] = name.clone();
                    }
                }
                Arc::new(out)
            }
            None => family.coefficient_names(),
        };
        Ok(System {
            family,
            template,
            specialized,
            names,
            seed: self.seed,
        })
    }
}

/// Parses and validates a system description. Errors carry a JSON pointer.
pub fn parse_system(text: &[u8]) -> Result<System, SystemError> {
    let de = &mut serde_json::Deserializer::from_slice(text);
    let spec: SystemSpec =
        serde_path_to_error::deserialize(de).map_err(|e| invalid(pointer(e.path()), e.inner().to_string()))?;
    spec.validate()
}

impl System {
    /// The description of this system in family order; parsing it gives
    /// back an equal system.
    pub fn to_spec(&self) -> SystemSpec {
        let fam = &self.family;
        let per_support = |f: &dyn Fn(usize) -> CoefficientSpec| -> Vec<Vec<CoefficientSpec>> {
            (0..fam.len())
                .map(|i| (0..fam.support(i).len()).map(|k| f(fam.global_index(i, k))).collect())
                .collect()
        };
        let coefficients = self.template.iter().any(Option::is_some).then(|| {
            per_support(&|g| match &self.template[g] {
                None => CoefficientSpec::Text("symbolic".into()),
                Some(r) => CoefficientSpec::Text(format_rational(r)),
            })
        });
        let derived: Vec<bool> = self.template.iter().map(Option::is_some).collect();
        let specialized = (self.specialized != derived).then(|| {
            (0..fam.len())
                .map(|i| (0..fam.support(i).len()).map(|k| self.specialized[fam.global_index(i, k)]).collect())
                .collect()
        });
        let names = (self.names != fam.coefficient_names()).then(|| {
            (0..fam.len())
                .map(|i| (0..fam.support(i).len()).map(|k| self.names[fam.global_index(i, k)].clone()).collect())
                .collect()
        });
        SystemSpec {
            n: fam.n(),
            supports: fam.supports().iter().map(|s| s.iter().map(|a| a.0.clone()).collect()).collect(),
            coefficients,
            specialized,
            names,
            seed: self.seed,
        }
    }

    /// Fully specified coefficient values, if no coefficient is symbolic.
    pub fn values(&self) -> Option<Vec<BigRational>> {
        self.template.iter().cloned().collect()
    }
}
