use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sparseres::arith::PolyJson;
use sparseres::respoly::ResultantPolytope;
use sparseres::subdivision::MixedSubdivision;
use sparseres_cli::report::*;

fn system(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparseres")).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sparseres"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Parses the output and checks that writing it back gives the same text.
fn round_trip<T: DeserializeOwned + Serialize>(text: &str) -> T {
    let value: T = serde_json::from_str(text).unwrap();
    let mut again = serde_json::to_string_pretty(&value).unwrap();
    again.push('\n');
    assert_eq!(again, text);
    value
}

fn path(name: &str) -> String {
    system(name).to_str().unwrap().to_string()
}

/// Terms as `(exponents, numerator)` with unit denominators.
fn terms(p: &PolyJson) -> Vec<(Vec<u32>, i64)> {
    p.terms
        .iter()
        .map(|t| {
            assert_eq!(t.den, "1");
            (t.exp.clone(), t.num.parse().unwrap())
        })
        .collect()
}

#[test]
fn analyze_finds_proper_essential_subfamily() {
    let r: AnalyzeReport = round_trip(&ok(&["analyze", &path("proper_essential.json")]));
    assert_eq!(r.analysis.essential, vec![vec![1, 2]]);
    assert_eq!(r.analysis.codimension, 1);
    assert_eq!(r.route, Some(sparseres::resultant::Route::Proper { supports: vec![1, 2] }));
}

#[test]
fn proper_essential_exits_with_hypothesis_failure() {
    let out = run(&["resultant", &path("proper_essential.json")]);
    assert_eq!(out.status.code(), Some(2));
    let p: PolyJson = round_trip(&ok(&["resultant", "--restrict", &path("proper_essential.json")]));
    // u10 u21 - u11 u20, up to sign.
    let t = terms(&p);
    assert_eq!(t.len(), 2);
    assert_eq!(t[0].1, -t[1].1);
}

#[test]
fn quadratic_binomial_resultant_has_four_terms() {
    let p: PolyJson = round_trip(&ok(&["resultant", &path("quadratic_binomial.json")]));
    assert_eq!(p.vars, ["a0", "a1", "a2", "b0", "b2"]);
    let mut t = terms(&p);
    t.sort();
    let mut expected: Vec<(Vec<u32>, i64)> = vec![
        (vec![0, 0, 2, 2, 0], 1),
        (vec![0, 2, 0, 1, 1], 1),
        (vec![1, 0, 1, 1, 1], -2),
        (vec![2, 0, 0, 0, 2], 1),
    ];
    expected.sort();
    // Equal up to an overall sign.
    let sign = t[0].1.signum() * expected[0].1.signum();
    let t: Vec<_> = t.into_iter().map(|(e, c)| (e, c * sign)).collect();
    assert_eq!(t, expected);
}

#[test]
fn u_resultant_projection_is_a_triangle() {
    let v: VRep = round_trip(&ok(&["respoly", "--project", "0,1,2", "--emit", "vrep", &path("u_resultant.json")]));
    let coords: Vec<Vec<i64>> = v.vertices.iter().map(|p| p.0.clone()).collect();
    assert_eq!(coords, vec![vec![0, 0, 2], vec![0, 2, 0], vec![2, 0, 0]]);
    // Names select the same coefficients.
    let by_name = ok(&["respoly", "--project", "u0,u1,u2", "--emit", "vrep", &path("u_resultant.json")]);
    assert_eq!(by_name, ok(&["respoly", "--project", "0,1,2", "--emit", "vrep", &path("u_resultant.json")]));
}

#[test]
fn u_resultant_interpolates_to_product_of_lines() {
    let p: PolyJson = round_trip(&ok(&["interp", &path("u_resultant.json")]));
    // Sorted coefficient order puts the x2 coefficient before the x1 one.
    assert_eq!(p.vars, ["u0", "u2", "u1"]);
    let mut t = terms(&p);
    t.sort();
    assert_eq!(
        t,
        vec![(vec![0, 1, 1], -8), (vec![1, 0, 1], 4), (vec![1, 1, 0], -4), (vec![2, 0, 0], 2)]
    );
}

#[test]
fn monomial_curve_pipeline_through_files() {
    let dir = std::env::temp_dir().join(format!("sparseres-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let poly_file = dir.join("curve.json");
    let poly_path = poly_file.to_str().unwrap();
    ok(&["respoly", "--project", "specialized", "-o", poly_path, &path("monomial_curve.json")]);
    let text = std::fs::read(&poly_file).unwrap();
    let rp = ResultantPolytope::from_json_bytes(&text).unwrap();
    assert_eq!(rp.stats.dimension, 1);
    let p: PolyJson = round_trip(&ok(&["interp", "--polytope", poly_path, &path("monomial_curve.json")]));
    let mut t = terms(&p);
    t.sort();
    assert_eq!(t, vec![(vec![0, 2, 1], -1), (vec![4, 0, 0], 1)]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn every_output_round_trips() {
    let tri = path("two_trinomials.json");
    round_trip::<MixedVolumeReport>(&ok(&["mixedvol", &path("bilinear.json")]));
    let sub = ok(&["subdivision", &tri]);
    let parsed = MixedSubdivision::from_json_bytes(sub.as_bytes()).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", sub);
    round_trip::<MatrixReport>(&ok(&["ce-matrix", &tri]));
    round_trip::<ValueReport>(&ok(&["resultant", "--mode", "specialized", &tri]));
    round_trip::<KoszulReport>(&ok(&["koszul", "--prime", "1000003", &tri]));
    round_trip::<HRep>(&ok(&["respoly", "--emit", "hrep", &tri]));
    round_trip::<TriangulationReport>(&ok(&["respoly", "--emit", "triangulation", &tri]));
    round_trip::<StatsReport>(&ok(&["respoly", "--emit", "stats", &tri]));
    let all = ok(&["respoly", &tri]);
    let rp: ResultantPolytope = round_trip(&all);
    assert_eq!(ResultantPolytope::from_json_bytes(all.as_bytes()).unwrap(), rp);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let bil = path("bilinear.json");
    for args in [
        vec!["subdivision", bil.as_str()],
        vec!["ce-matrix", bil.as_str()],
        vec!["respoly", "--project", "0,5,10", bil.as_str()],
        vec!["resultant", "--mode", "specialized", "--prime", "101", bil.as_str()],
    ] {
        let mut with_seed = args.clone();
        with_seed.extend(["--seed", "9"]);
        assert_eq!(ok(&with_seed), ok(&with_seed), "{args:?}");
    }
}

#[test]
fn koszul_determinant_matches_resultant_value() {
    let sys = br#"{"n":1,"supports":[[[0],[1],[2]],[[0],[1],[2]]],
        "coefficients":[[3,-1,2],[1,4,-5]]}"#;
    let k: KoszulReport = round_trip(&String::from_utf8(run_stdin(&["koszul"], sys).stdout).unwrap());
    let r: ValueReport =
        round_trip(&String::from_utf8(run_stdin(&["resultant", "--mode", "specialized", "-"], sys).stdout).unwrap());
    assert_eq!(k.determinant.point, r.point);
    let kv: i64 = k.determinant.value.parse().unwrap();
    let rv: i64 = r.value.parse().unwrap();
    assert_ne!(rv, 0);
    assert_eq!(kv.abs(), rv.abs());
}

#[test]
fn input_errors_exit_with_one_and_a_pointer() {
    let out = run_stdin(&["analyze"], br#"{"n":2,"supports":[[[0,0],[1]]]}"#);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("/supports/0/1"), "{err}");
    let out = run_stdin(&["analyze"], br#"{"n":1,"supports":[[[0]]],"coeffs":[]}"#);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["respoly", "--project", "nope", &path("bilinear.json")]).status.code(), Some(1));
    assert_eq!(run(&["resultant", "--prime", "100", "--mode", "specialized", &path("bilinear.json")]).status.code(), Some(1));
}

#[test]
fn plot_writes_svg_and_obj() {
    let tri = ok(&["respoly", "--project", "0,1", &path("two_trinomials.json")]);
    let svg = String::from_utf8(run_stdin(&["plot"], tri.as_bytes()).stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    let solid = ok(&["respoly", "--project", "0,5,10", &path("bilinear.json")]);
    let obj = String::from_utf8(run_stdin(&["plot"], solid.as_bytes()).stdout).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 12);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 11);
}
