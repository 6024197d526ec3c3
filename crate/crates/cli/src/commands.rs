//! The subcommands as functions from a parsed system to an output document.

use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sparseres::arith::field::format_rational;
use sparseres::arith::{Field, MultiPoly, PolyJson, PrimeField, Rationals};
use sparseres::canny_emiris::{certified_matrices, CeError, CeOptions};
use sparseres::elimination::analyze;
use sparseres::family::SupportFamily;
use sparseres::geometry::{mixed_volume, LatticePoint, Polytope};
use sparseres::interp::{interpolate, InterpError, InterpProblem, SampleSource};
use sparseres::koszul::{build_complex, degree_choice};
use sparseres::respoly::{compute_polytope, preprocess_specialized, ResPolyError, ResultantPolytope, RunStats, VertexOracle};
use sparseres::resultant::{self, ResultantError, Route};
use sparseres::subdivision::MixedSubdivision;
use sparseres::system::System;

use crate::report::*;

/// Flags shared by all subcommands.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub seed: Option<u64>,
    pub prime: Option<u64>,
    pub greedy: bool,
}

impl Options {
    fn rng(&self, sys: &System) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed_for(sys))
    }

    fn seed_for(&self, sys: &System) -> u64 {
        self.seed.or(sys.seed).unwrap_or(0)
    }

    fn ce(&self) -> CeOptions {
        CeOptions {
            greedy: self.greedy,
            ..CeOptions::default()
        }
    }

    fn field(&self) -> Result<Option<PrimeField>> {
        self.prime
            .map(|p| PrimeField::new(p).with_context(|| format!("--prime {p} is not a prime below 2^63")))
            .transpose()
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

/// True when the error is a failure of a mathematical hypothesis on
/// well-formed input rather than bad input.
pub fn is_hypothesis_failure(err: &anyhow::Error) -> bool {
    err.chain().any(|c| {
        if let Some(e) = c.downcast_ref::<ResultantError>() {
            e.is_hypothesis_failure()
        } else if let Some(e) = c.downcast_ref::<CeError>() {
            e.is_hypothesis_failure()
        } else if let Some(e) = c.downcast_ref::<InterpError>() {
            match e {
                InterpError::Resultant(r) => r.is_hypothesis_failure(),
                InterpError::CorankTooHigh { .. }
                | InterpError::EmptyKernel
                | InterpError::HeldOut
                | InterpError::Reconstruction => true,
                _ => false,
            }
        } else {
            matches!(c.downcast_ref::<ResPolyError>(), Some(ResPolyError::NonGenericLifting(_)))
        }
    })
}

/// Renames the coefficient variables of a polynomial over `family` order.
fn named(poly: &MultiPoly<Rationals>, indices: &[usize], names: &[String]) -> PolyJson {
    let vars = Arc::new(indices.iter().map(|&g| names[g].clone()).collect());
    let keep: Vec<usize> = (0..poly.nvars()).collect();
    poly.restrict_vars(&keep, vars).expect("same variable count").to_json()
}

pub fn analyze_cmd(sys: &System) -> Result<AnalyzeReport> {
    let analysis = analyze(&sys.family)?;
    let route = match sys.family.require_resultant_shape() {
        Ok(()) => Some(resultant::route(&sys.family)?.0),
        Err(_) => None,
    };
    Ok(AnalyzeReport { analysis, route })
}

pub fn mixedvol_cmd(sys: &System) -> Result<MixedVolumeReport> {
    let fam = &sys.family;
    if fam.len() == fam.n() {
        let mv = mixed_volume(&fam.newton_polytopes()?)?;
        Ok(MixedVolumeReport {
            mixed_volume: Some(mv.to_string()),
            without: None,
        })
    } else if fam.len() == fam.n() + 1 {
        let without = (0..fam.len())
            .map(|i| Ok(fam.mixed_volume_without(i)?.to_string()))
            .collect::<Result<_>>()?;
        Ok(MixedVolumeReport {
            mixed_volume: None,
            without: Some(without),
        })
    } else {
        bail!("mixed volumes need n or n + 1 supports, found {} in dimension {}", fam.len(), fam.n());
    }
}

pub fn subdivision_cmd(sys: &System, opts: &Options) -> Result<MixedSubdivision> {
    Ok(MixedSubdivision::generic(&sys.family, &mut opts.rng(sys))?)
}

/// Fails with `EssentialProper` when the matrix formula does not apply to
/// the whole family.
fn require_whole_family_essential(sys: &System) -> Result<()> {
    if let Route::Proper { supports } = resultant::route(&sys.family)?.0 {
        return Err(ResultantError::EssentialProper(supports).into());
    }
    Ok(())
}

pub fn ce_matrix_cmd(sys: &System, opts: &Options) -> Result<MatrixReport> {
    require_whole_family_essential(sys)?;
    let (_, m) = certified_matrices(&sys.family, &opts.ce(), &mut opts.rng(sys))?;
    let h = (0..m.h.nrows())
        .map(|r| m.h.row(r).iter().map(|e| e.map(|g| sys.names[g].clone())).collect())
        .collect();
    Ok(MatrixReport {
        delta: m.delta.iter().map(format_rational).collect(),
        columns: m.h.col_labels().to_vec(),
        rows: m.rows.clone(),
        h,
        e_labels: m.e_labels.clone(),
        full_size: m.full_size,
    })
}

/// Coefficient values: the system's where given, random elsewhere.
fn specialize<F: Field>(field: &F, sys: &System, rng: &mut ChaCha8Rng) -> Result<Vec<F::Elem>> {
    sys.template
        .iter()
        .enumerate()
        .map(|(g, t)| match t {
            Some(r) => field
                .from_rational(r)
                .with_context(|| format!("coefficient {} is not defined in the chosen field", sys.names[g])),
            None => Ok(field.random(rng)),
        })
        .collect()
}

fn report<F: Field>(field: &F, label: String, point: &[F::Elem], value: &F::Elem) -> ValueReport {
    let show = |a: &F::Elem| format_rational(&field.to_rational(a));
    ValueReport {
        field: label,
        point: point.iter().map(show).collect(),
        value: show(value),
    }
}

fn resultant_value<F: Field>(field: &F, label: String, sys: &System, restrict: bool, opts: &Options) -> Result<ValueReport> {
    let mut rng = opts.rng(sys);
    let point = specialize(field, sys, &mut rng)?;
    let v = resultant::value(&sys.family, field, &point, &opts.ce(), restrict, &mut rng)?;
    Ok(report(field, label, &point, &v))
}

pub fn resultant_symbolic_cmd(sys: &System, restrict: bool, opts: &Options) -> Result<PolyJson> {
    let poly = resultant::symbolic(&sys.family, &sys.template, &opts.ce(), restrict, &mut opts.rng(sys))?;
    let all: Vec<usize> = (0..sys.family.total_size()).collect();
    Ok(named(&poly, &all, &sys.names))
}

pub fn resultant_value_cmd(sys: &System, restrict: bool, opts: &Options) -> Result<ValueReport> {
    match opts.field()? {
        Some(f) => resultant_value(&f, format!("mod {}", f.modulus()), sys, restrict, opts),
        None => resultant_value(&Rationals, "rationals".into(), sys, restrict, opts),
    }
}

fn koszul_in<F: Field>(field: &F, label: String, sys: &System, opts: &Options) -> Result<KoszulReport> {
    require_whole_family_essential(sys)?;
    let mut rng = opts.rng(sys);
    let (_, m) = certified_matrices(&sys.family, &opts.ce(), &mut rng)?;
    let degree = degree_choice(&sys.family, &m.delta)?;
    let complex = build_complex(&sys.family, &degree)?;
    let point = specialize(field, sys, &mut rng)?;
    let det = complex.determinant(field, &point, &mut rng)?;
    Ok(KoszulReport {
        rays: degree.rays.clone(),
        degree: degree.offsets.clone(),
        dims: complex.dims(),
        determinant: report(field, label, &point, &det),
    })
}

pub fn koszul_cmd(sys: &System, opts: &Options) -> Result<KoszulReport> {
    match opts.field()? {
        Some(f) => koszul_in(&f, format!("mod {}", f.modulus()), sys, opts),
        None => koszul_in(&Rationals, "rationals".into(), sys, opts),
    }
}

/// Which coefficients the resultant polytope is projected onto.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    All,
    Indices(Vec<usize>),
    /// The coefficients not marked as specialized.
    Specialized,
}

impl Projection {
    /// Parses `specialized` or a comma separated list of coefficient
    /// indices or names.
    pub fn parse(text: &str, sys: &System) -> Result<Projection> {
        if text == "specialized" {
            return Ok(Projection::Specialized);
        }
        let mut out = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let g = match tok.parse::<usize>() {
                Ok(g) => g,
                Err(_) => sys
                    .names
                    .iter()
                    .position(|n| n == tok)
                    .with_context(|| format!("--project: unknown coefficient {tok:?}"))?,
            };
            ensure!(g < sys.family.total_size(), "--project: index {g} is out of range");
            out.push(g);
        }
        out.sort_unstable();
        let before = out.len();
        out.dedup();
        ensure!(out.len() == before, "--project: repeated coefficient");
        Ok(Projection::Indices(out))
    }
}

/// Resultant polytope of a family, projected onto `kept`; a polytope that
/// is a single point is returned as such.
fn polytope_or_point(family: &SupportFamily, kept: &[usize], seed: u64) -> Result<ResultantPolytope> {
    match compute_polytope(family, kept, seed) {
        Err(ResPolyError::ZeroDimensional(_)) => {
            let mut oracle = VertexOracle::new(family, kept, seed)?;
            let v = oracle.query(&vec![Zero::zero(); kept.len()])?;
            let polytope = Polytope::hull(&[LatticePoint(v.projected.clone())])?;
            Ok(ResultantPolytope {
                kept: kept.to_vec(),
                polytope,
                triangulation: vec![vec![0]],
                full_vertices: vec![v.full],
                coefficients: (0..family.total_size()).collect(),
                stats: RunStats {
                    dimension: 0,
                    vertices: 1,
                    facets: 0,
                    oracle_calls_init: oracle.calls(),
                    oracle_calls_loop: 0,
                },
            })
        }
        r => Ok(r?),
    }
}

pub fn respoly_cmd(sys: &System, projection: &Projection, opts: &Options) -> Result<ResultantPolytope> {
    let seed = opts.seed_for(sys);
    match projection {
        Projection::All => {
            let all: Vec<usize> = (0..sys.family.total_size()).collect();
            polytope_or_point(&sys.family, &all, seed)
        }
        Projection::Indices(kept) => polytope_or_point(&sys.family, kept, seed),
        Projection::Specialized => specialized(sys, &sys.specialized, seed),
    }
}

fn specialized(sys: &System, flags: &[bool], seed: u64) -> Result<ResultantPolytope> {
    let (reduced, map, flags) = preprocess_specialized(&sys.family, flags)?;
    let kept: Vec<usize> = (0..flags.len()).filter(|&g| !flags[g]).collect();
    let mut r = polytope_or_point(&reduced, &kept, seed)?;
    r.kept = kept.iter().map(|&g| map[g]).collect();
    r.coefficients = map;
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    VRep,
    HRep,
    Triangulation,
    Stats,
    All,
}

pub fn emit(r: &ResultantPolytope, what: Emit) -> String {
    match what {
        Emit::VRep => to_json(&VRep {
            kept: r.kept.clone(),
            vertices: r.polytope.vertices.clone(),
        }),
        Emit::HRep => to_json(&HRep {
            kept: r.kept.clone(),
            facets: r.polytope.facets.clone(),
            equations: r.polytope.equations.clone(),
        }),
        Emit::Triangulation => to_json(&TriangulationReport {
            kept: r.kept.clone(),
            vertices: r.polytope.vertices.clone(),
            simplices: r.triangulation.clone(),
        }),
        Emit::Stats => to_json(&StatsReport {
            stats: r.stats.clone(),
            call_bound: r.stats.vertices + r.stats.facets,
        }),
        Emit::All => to_json(r),
    }
}

/// Implicit polynomial in the symbolic coefficients of the system, on the
/// lattice points of the given (or computed) projected resultant polytope.
pub fn interp_cmd(
    sys: &System,
    polytope: Option<ResultantPolytope>,
    source: Option<SampleSource>,
    opts: &Options,
) -> Result<PolyJson> {
    let free: Vec<usize> = (0..sys.template.len()).filter(|&g| sys.template[g].is_none()).collect();
    ensure!(!free.is_empty(), "the system has no symbolic coefficient to interpolate in");
    let polytope = match polytope {
        Some(p) => p,
        None => {
            let flags: Vec<bool> = sys.template.iter().map(Option::is_some).collect();
            specialized(sys, &flags, opts.seed_for(sys))?
        }
    };
    ensure!(
        polytope.kept == free,
        "the polytope is projected onto coefficients {:?} but the symbolic coefficients are {:?}",
        polytope.kept,
        free
    );
    let monomials = polytope.polytope.lattice_points();
    let problem = InterpProblem::new(&sys.family, sys.template.clone(), monomials)?;
    let source = source.unwrap_or_else(|| problem.default_source());
    let result = interpolate(&problem, source, &opts.ce(), &mut opts.rng(sys))?;
    Ok(named(&result.polynomial, &free, &sys.names))
}

/// SVG or OBJ scene of a polytope or resultant polytope document.
pub fn plot_cmd(text: &[u8]) -> Result<String> {
    let value: serde_json::Value = serde_json::from_slice(text).context("input is not JSON")?;
    let polytope = if value.get("polytope").is_some() {
        ResultantPolytope::from_json_bytes(text)?.polytope
    } else {
        Polytope::from_json_bytes(text)?
    };
    match polytope.ambient_dim() {
        2 => crate::plot::svg(&polytope),
        3 => crate::plot::obj(&polytope),
        d => bail!("can only plot polytopes in 2 or 3 dimensions, not {d}"),
    }
}
