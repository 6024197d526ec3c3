use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sparseres::arith::{Field, PrimeField};
use sparseres::canny_emiris::{certified_matrices, CeOptions};
use sparseres::family::SupportFamily;
use sparseres::fixtures;
use sparseres::koszul::{build_complex, degree_choice, KoszulComplex};
use sparseres::sampling::planted_root;

fn families() -> Vec<(String, SupportFamily)> {
    let mut out: Vec<(String, SupportFamily)> = Vec::new();
    for (d0, d1) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
        out.push((format!("sylvester-{d0}-{d1}"), fixtures::sylvester(d0, d1).family));
    }
    for fx in [
        fixtures::general_quadratic_and_binomial(),
        fixtures::two_trinomials(),
        fixtures::bilinear(),
    ] {
        out.push((fx.name.to_string(), fx.family));
    }
    out
}

fn setup(fam: &SupportFamily, rng: &mut ChaCha8Rng) -> (KoszulComplex, sparseres::canny_emiris::CeMatrices) {
    let (_, ce) = certified_matrices(fam, &CeOptions::default(), rng).unwrap();
    let degree = degree_choice(fam, &ce.delta).unwrap();
    (build_complex(fam, &degree).unwrap(), ce)
}

#[test]
fn differentials_compose_to_zero() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (name, fam) in families() {
        let (cx, _) = setup(&fam, &mut rng);
        for _ in 0..5 {
            let c: Vec<u64> = (0..fam.total_size()).map(|_| f.random(&mut rng)).collect();
            assert!(cx.compositions_vanish(&f, &c), "{name}");
        }
    }
}

#[test]
fn complex_determinant_matches_matrix_formula() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for (name, fam) in families() {
        let (cx, ce) = setup(&fam, &mut rng);
        for _ in 0..3 {
            let c: Vec<u64> = (0..fam.total_size()).map(|_| f.random(&mut rng)).collect();
            let k = cx.determinant(&f, &c, &mut rng).unwrap();
            let r = ce.evaluate(&f, &c, &mut rng).unwrap();
            assert!(k == r || k == f.neg(&r), "{name}: {k} vs {r}");
            assert_ne!(k, 0, "{name}");
        }
    }
}

#[test]
fn complex_detects_common_roots() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for (name, fam) in families() {
        let (cx, _) = setup(&fam, &mut rng);
        let template = vec![None; fam.total_size()];
        let (c, _) = planted_root(&fam, &f, &template, &mut rng).unwrap();
        assert_eq!(cx.determinant(&f, &c, &mut rng).unwrap(), 0, "{name}");
    }
}
