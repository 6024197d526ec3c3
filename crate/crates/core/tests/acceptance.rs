//! Acceptance suite: one PASS/FAIL line per criterion with its tolerance
//! and time budget. Set `SPARSERES_SLOW=1` to run the bicubic criterion.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparseres::arith::{Field, MultiPoly, PrimeField, Rationals};
use sparseres::canny_emiris::{build_matrices, certified_matrices, resultant_symbolic, CeOptions};
use sparseres::elimination::analyze;
use sparseres::family::SupportFamily;
use sparseres::fixtures;
use sparseres::geometry::LatticePoint;
use sparseres::interp::{interpolate, InterpProblem};
use sparseres::koszul::{build_complex, degree_choice};
use sparseres::respoly::{compute_polytope, mixed_volume_vector, specialized_polytope, ResultantPolytope};
use sparseres::sampling::planted_root;
use sparseres::subdivision::{cayley_cells, random_lifting, MixedSubdivision};

use common::{q, staircase};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn all(family: &SupportFamily) -> Vec<usize> {
    (0..family.total_size()).collect()
}

fn lp(rows: &[&[i64]]) -> Vec<LatticePoint> {
    let mut v: Vec<LatticePoint> = rows.iter().map(|r| LatticePoint(r.to_vec())).collect();
    v.sort();
    v
}

fn flags(template: &[Option<BigRational>]) -> Vec<bool> {
    template.iter().map(Option::is_some).collect()
}

fn interpolate_on(family: &SupportFamily, template: &[Option<BigRational>], pi: &ResultantPolytope, seed: u64) -> Result<MultiPoly<Rationals>, String> {
    let problem = InterpProblem::new(family, template.to_vec(), pi.polytope.lattice_points()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    interpolate(&problem, problem.default_source(), &CeOptions::default(), &mut rng)
        .map(|r| r.polynomial)
        .map_err(|e| e.to_string())
}

fn same_up_to_sign(a: &MultiPoly<Rationals>, b: &MultiPoly<Rationals>) -> bool {
    a == b || *a == b.neg()
}

/// Determinant modulo `p` by Gaussian elimination on `u128` entries.
fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else { return 0 };
        if piv != c {
            m.swap(piv, c);
            det = (p - det) % p;
        }
        det = mul(det, m[c][c]);
        let inv = pow(m[c][c], p - 2);
        for r in c + 1..n {
            let f = mul(m[r][c], inv);
            for k in c..n {
                let sub = mul(f, m[c][k]);
                m[r][k] = (m[r][k] + p - sub) % p;
            }
        }
    }
    det
}

fn sylvester_mod(a: &[u64], b: &[u64], p: u64) -> u64 {
    let (d0, d1) = (a.len() - 1, b.len() - 1);
    let size = d0 + d1;
    let mut m = vec![vec![0u64; size]; size];
    for row in 0..d1 {
        for (k, &c) in a.iter().enumerate() {
            m[row][row + d0 - k] = c;
        }
    }
    for row in 0..d0 {
        for (k, &c) in b.iter().enumerate() {
            m[d1 + row][row + d1 - k] = c;
        }
    }
    det_mod(m, p)
}

fn sylvester_equivalence() -> Outcome {
    let f = PrimeField::default();
    let p = f.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut count = 0;
    for d0 in 1..=4 {
        for d1 in 1..=4 {
            let fam = fixtures::sylvester(d0, d1).family;
            let (_, ce) = certified_matrices(&fam, &CeOptions::default(), &mut rng).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let c: Vec<u64> = (0..fam.total_size()).map(|_| f.random(&mut rng)).collect();
                let (a, b) = c.split_at(d0 as usize + 1);
                let expected = sylvester_mod(a, b, p);
                let got = ce.evaluate(&f, &c, &mut rng).map_err(|e| e.to_string())?;
                check(got == expected || got == f.neg(&expected), format!("degrees ({d0},{d1}): {got} vs {expected}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} specializations over 16 degree pairs"))
}

fn quadratic_binomial_end_to_end() -> Outcome {
    let fx = fixtures::general_quadratic_and_binomial();
    let pi = compute_polytope(&fx.family, &all(&fx.family), 1).map_err(|e| e.to_string())?;
    check(
        pi.polytope.vertices == lp(&[&[0, 2, 0, 1, 1], &[0, 0, 2, 2, 0], &[2, 0, 0, 0, 2]]),
        format!("vertices {:?}", pi.polytope.vertices),
    )?;
    let pts = pi.polytope.lattice_points();
    check(pts.len() == 4, format!("{} lattice points", pts.len()))?;
    let res = interpolate_on(&fx.family, &fx.template, &pi, 1)?;
    // Kernel in the order a1^2 b0 b1, a0^2 b1^2, a0 a2 b0 b1, a2^2 b0^2.
    let order = [[0u32, 2, 0, 1, 1], [2, 0, 0, 0, 2], [1, 0, 1, 1, 1], [0, 0, 2, 2, 0]];
    let kernel: Vec<BigRational> = order.iter().map(|e| res.coeff(e)).collect();
    let expected: Vec<BigRational> = [1, 1, -2, 1].iter().map(|&x| q(x)).collect();
    let negated: Vec<BigRational> = expected.iter().map(|x| -x).collect();
    check(res.num_terms() == 4 && (kernel == expected || kernel == negated), format!("kernel {kernel:?}"))?;
    Ok("3 vertices, 4 lattice points, kernel (1,1,-2,1)".into())
}

fn monomial_curve() -> Outcome {
    let fx = fixtures::monomial_parameterization();
    let pi = compute_polytope(&fx.family, &all(&fx.family), 1).map_err(|e| e.to_string())?;
    check(
        pi.polytope.vertices == lp(&[&[4, 0, 0, 2, 0, 1], &[0, 4, 2, 0, 1, 0]]),
        format!("segment {:?}", pi.polytope.vertices),
    )?;
    let spec = specialized_polytope(&fx.family, &flags(&fx.template), 1).map_err(|e| e.to_string())?;
    check(spec.polytope.vertices == lp(&[&[4, 0, 0], &[0, 2, 1]]), format!("projection {:?}", spec.polytope.vertices))?;
    let res = interpolate_on(&fx.family, &fx.template, &spec, 1)?;
    let y = |i| MultiPoly::var(Rationals, res.vars().clone(), i);
    let expected = y(1).pow(2).mul(&y(2)).sub(&y(0).pow(4));
    check(same_up_to_sign(&res, &expected), format!("implicit equation {res}"))?;
    Ok("segment, projection and -y1^4 + y2^2 y3".into())
}

fn u_resultant() -> Outcome {
    let fx = fixtures::u_resultant();
    let spec = specialized_polytope(&fx.family, &flags(&fx.template), 1).map_err(|e| e.to_string())?;
    check(
        spec.polytope.vertices == lp(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]),
        format!("polygon {:?}", spec.polytope.vertices),
    )?;
    let res = interpolate_on(&fx.family, &fx.template, &spec, 1)?;
    // Variables are ordered u0, u2, u1 by the sorted support.
    let u = |i| MultiPoly::var(Rationals, res.vars().clone(), i);
    let (u0, u2, u1) = (u(0), u(1), u(2));
    let expected = u0
        .pow(2)
        .scale(&q(2))
        .add(&u0.mul(&u1).scale(&q(4)))
        .sub(&u0.mul(&u2).scale(&q(4)))
        .sub(&u1.mul(&u2).scale(&q(8)));
    check(same_up_to_sign(&res, &expected), format!("interpolated {res}"))?;
    Ok("triangle and 2u0^2 + 4u0u1 - 4u0u2 - 8u1u2".into())
}

fn bilinear() -> Outcome {
    let fam = fixtures::bilinear().family;
    let quarter = vec![BigRational::new(1.into(), 4.into()); 2];
    let sub = MixedSubdivision::new(&fam, vec![staircase(&fam)]).map_err(|e| e.to_string())?;
    let full = build_matrices(&sub, &quarter, false).map_err(|e| e.to_string())?;
    check(full.size() == 9, format!("|B| = {}", full.size()))?;
    let greedy = build_matrices(&sub, &quarter, true).map_err(|e| e.to_string())?;
    check(greedy.size() == 8, format!("greedy size {}", greedy.size()))?;
    for i in 0..3 {
        let from_cells = sub.mixed_volume_from_cells(i);
        let mv = fam.mixed_volume_without(i).map_err(|e| e.to_string())?;
        check(from_cells == BigRational::from_integer(mv.clone()) && mv == BigInt::from(2), format!("support {i}: cells {from_cells}, MV {mv}"))?;
    }
    let opts = CeOptions {
        greedy: true,
        lifting: Some(vec![staircase(&fam)]),
        delta: Some(quarter),
        ..CeOptions::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    resultant_symbolic(&fam, &vec![None; 12], &opts, &mut rng).map_err(|e| e.to_string())?;
    // Degree in each group by probing along a line: third finite
    // differences vanish, second do not.
    let f = PrimeField::default();
    for i in 0..3 {
        let base: Vec<u64> = (0..12).map(|_| f.random(&mut rng)).collect();
        let dir: Vec<u64> = (0..4).map(|_| f.random(&mut rng)).collect();
        let values: Vec<u64> = (0..5u64)
            .map(|t| {
                let mut c = base.clone();
                for k in 0..4 {
                    c[4 * i + k] = f.add(&base[4 * i + k], &f.mul(&t, &dir[k]));
                }
                greedy.evaluate(&f, &c, &mut rng).unwrap()
            })
            .collect();
        let mut diffs = values;
        let mut orders = Vec::new();
        while diffs.len() > 1 {
            diffs = diffs.windows(2).map(|w| f.sub(&w[1], &w[0])).collect();
            orders.push(diffs.iter().all(|&d| d == 0));
        }
        check(!orders[1] && orders[2], format!("group {i}: vanishing differences {orders:?}"))?;
    }
    Ok("|B| = 9, greedy 8x8, MV_-i = 2, exact quotient of degree 2 per group".into())
}

fn random_family(rng: &mut ChaCha8Rng) -> SupportFamily {
    loop {
        let n = rng.gen_range(1..=2usize);
        let mut sizes = vec![2usize; n + 1];
        let mut total = 2 * (n + 1);
        let room = 4usize.pow(n as u32);
        while total < 7 && rng.gen_bool(0.6) {
            let i = rng.gen_range(0..=n);
            if sizes[i] < room {
                sizes[i] += 1;
                total += 1;
            }
        }
        let supports: Vec<Vec<LatticePoint>> = sizes
            .iter()
            .map(|&s| {
                let mut pts = BTreeSet::new();
                while pts.len() < s {
                    pts.insert(LatticePoint((0..n).map(|_| rng.gen_range(0..4)).collect()));
                }
                pts.into_iter().collect()
            })
            .collect();
        let fam = SupportFamily::new(n, supports).unwrap();
        if analyze(&fam).unwrap().unique_essential().is_some_and(|e| e.len() == n + 1) {
            return fam;
        }
    }
}

fn oracle_hull_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut max_ratio = (0, 0);
    for round in 0..50 {
        let fam = random_family(&mut rng);
        let pi = compute_polytope(&fam, &all(&fam), round).map_err(|e| e.to_string())?;
        let computed: BTreeSet<Vec<i64>> = pi.polytope.vertices.iter().map(|v| v.0.clone()).collect();
        let simplex = fam.cayley_dim() + 1;
        let mut brute = BTreeSet::new();
        for _ in 0..500 {
            let cells = cayley_cells(&fam, &[random_lifting(fam.total_size(), &mut rng)]).map_err(|e| e.to_string())?;
            if cells.iter().all(|c| c.len() == simplex) {
                brute.insert(mixed_volume_vector(&fam, &cells));
            }
        }
        check(computed == brute, format!("family {:?}: {} vs {} vertices", fam.supports(), computed.len(), brute.len()))?;
        let s = &pi.stats;
        let bound = s.vertices + s.facets;
        check(s.oracle_calls_loop <= bound, format!("{} calls, bound {bound}", s.oracle_calls_loop))?;
        if s.oracle_calls_loop * max_ratio.1 >= max_ratio.0 * bound {
            max_ratio = (s.oracle_calls_loop, bound);
        }
    }
    Ok(format!("50 families; worst call count {} against bound {}", max_ratio.0, max_ratio.1))
}

fn gkz_counts() -> Outcome {
    let fx = fixtures::two_trinomials();
    let pi = compute_polytope(&fx.family, &all(&fx.family), 1).map_err(|e| e.to_string())?;
    let (v, f) = (pi.polytope.vertices.len(), pi.polytope.facets.len());
    check(v == 6 && f == 7, format!("{v} vertices, {f} facets"))?;
    Ok("6 vertices, 7 facets".into())
}

fn koszul_cross_validation() -> Outcome {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut fams: Vec<SupportFamily> = [(1, 1), (2, 1), (2, 2), (3, 2), (4, 3)].iter().map(|&(a, b)| fixtures::sylvester(a, b).family).collect();
    fams.push(fixtures::general_quadratic_and_binomial().family);
    fams.push(fixtures::two_trinomials().family);
    fams.push(fixtures::bilinear().family);
    for fam in &fams {
        let (_, ce) = certified_matrices(fam, &CeOptions::default(), &mut rng).map_err(|e| e.to_string())?;
        let degree = degree_choice(fam, &ce.delta).map_err(|e| e.to_string())?;
        let cx = build_complex(fam, &degree).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let c: Vec<u64> = (0..fam.total_size()).map(|_| f.random(&mut rng)).collect();
            check(cx.compositions_vanish(&f, &c), format!("{:?}: nonzero composition", fam.supports()))?;
        }
        for _ in 0..3 {
            let c: Vec<u64> = (0..fam.total_size()).map(|_| f.random(&mut rng)).collect();
            let k = cx.determinant(&f, &c, &mut rng).map_err(|e| e.to_string())?;
            let r = ce.evaluate(&f, &c, &mut rng).map_err(|e| e.to_string())?;
            check(k == r || k == f.neg(&r), format!("{:?}: {k} vs {r}", fam.supports()))?;
        }
        let (c, _) = planted_root(fam, &f, &vec![None; fam.total_size()], &mut rng).map_err(|e| e.to_string())?;
        check(cx.determinant(&f, &c, &mut rng).map_err(|e| e.to_string())? == 0, "planted root not detected")?;
    }
    Ok(format!("{} families", fams.len()))
}

fn dimension_law() -> Outcome {
    let fixtures = [
        fixtures::general_quadratic_and_binomial(),
        fixtures::two_trinomials(),
        fixtures::linear(),
        fixtures::bilinear(),
        fixtures::monomial_parameterization(),
        fixtures::sylvester(3, 2),
    ];
    for fx in &fixtures {
        let fam = &fx.family;
        let pi = compute_polytope(fam, &all(fam), 1).map_err(|e| e.to_string())?;
        let expected = fam.total_size() - 2 * fam.n() - 1;
        check(pi.stats.dimension == expected, format!("{}: dim {} vs {expected}", fx.name, pi.stats.dimension))?;
    }
    Ok(format!("{} fixtures", fixtures.len()))
}

fn bicubic() -> Outcome {
    let fx = fixtures::bicubic_surface();
    let pi = specialized_polytope(&fx.family, &flags(&fx.template), 1).map_err(|e| e.to_string())?;
    check(pi.polytope.vertices.len() == 6, format!("{} vertices", pi.polytope.vertices.len()))?;
    let candidates = pi.polytope.lattice_points().len();
    let res = interpolate_on(&fx.family, &fx.template, &pi, 1)?;
    let (deg, terms) = (res.total_degree(), res.num_terms());
    check(deg == Some(18) && terms == 715 && terms <= candidates, format!("degree {deg:?}, {terms} terms, {candidates} candidates"))?;
    Ok(format!("6 vertices, degree 18, 715 terms of {candidates} candidates"))
}

fn main() {
    let slow = std::env::var("SPARSERES_SLOW").is_ok_and(|v| v == "1");
    type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        ("1 sylvester equivalence", "exact up to sign", Duration::from_secs(5), sylvester_equivalence),
        ("2 quadratic-binomial end to end", "exact", Duration::from_secs(5), quadratic_binomial_end_to_end),
        ("3 monomial curve", "exact", Duration::from_secs(5), monomial_curve),
        ("4 u-resultant", "exact up to sign", Duration::from_secs(5), u_resultant),
        ("5 bilinear matrices", "exact", Duration::from_secs(10), bilinear),
        ("6 oracle and hull suite", "exact", Duration::from_secs(60), oracle_hull_suite),
        ("7 trinomial counts", "exact", Duration::from_secs(5), gkz_counts),
        ("8 koszul cross-validation", "exact up to sign", Duration::from_secs(30), koszul_cross_validation),
        ("9 dimension law", "exact", Duration::from_secs(60), dimension_law),
        ("10 bicubic surface (slow)", "exact", Duration::from_secs(600), bicubic),
    ];
    let mut failed = 0;
    for (name, tolerance, budget, run) in criteria {
        if name.contains("(slow)") && !slow {
            println!("SKIP  {name}: set SPARSERES_SLOW=1 to run");
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name} [{tolerance}, {elapsed:.2?} of {budget:?}]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} [{tolerance}, {elapsed:.2?} of {budget:?}]: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
