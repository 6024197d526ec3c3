use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sparseres::canny_emiris::CeOptions;
use sparseres::fixtures;
use sparseres::geometry::LatticePoint;
use sparseres::interp::{interpolate, InterpProblem};
use sparseres::respoly::specialized_polytope;

#[test]
#[ignore = "slow: about 20 s with the test profile"]
fn bicubic_implicit_equation() {
    let fx = fixtures::bicubic_surface();
    let flags: Vec<bool> = fx.template.iter().map(Option::is_some).collect();
    let start = Instant::now();
    let pi = specialized_polytope(&fx.family, &flags, 1).unwrap();
    eprintln!("polytope: {:?} in {:?}", pi.stats, start.elapsed());
    let mut expected: Vec<LatticePoint> = [[0, 0, 1], [0, 1, 0], [1, 0, 0], [0, 0, 9], [0, 18, 0], [18, 0, 0]]
        .iter()
        .map(|v| LatticePoint(v.to_vec()))
        .collect();
    expected.sort();
    assert_eq!(pi.polytope.vertices, expected);
    let monomials = pi.polytope.lattice_points();
    eprintln!("{} candidate monomials", monomials.len());
    let problem = InterpProblem::new(&fx.family, fx.template.clone(), monomials.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let res = interpolate(&problem, problem.default_source(), &CeOptions::default(), &mut rng).unwrap();
    eprintln!("interpolated in {:?}", start.elapsed());
    assert_eq!(res.polynomial.total_degree(), Some(18));
    eprintln!("{} terms from {} primes", res.polynomial.num_terms(), res.primes);
    assert_eq!(monomials.len(), 714);
    assert_eq!(res.polynomial.num_terms(), 713);
}
