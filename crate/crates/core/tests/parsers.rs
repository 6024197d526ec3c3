//! Parsers must reject malformed input with an error, never a panic. The
//! seeds are the fuzz corpus; mutations flip, drop and duplicate bytes.

use std::path::PathBuf;

use proptest::prelude::*;
use sparseres::arith::field::parse_rational;
use sparseres::arith::{MultiPoly, Rationals};
use sparseres::geometry::Polytope;
use sparseres::respoly::ResultantPolytope;
use sparseres::subdivision::MixedSubdivision;
use sparseres::system::parse_system;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    out
}

fn parse_all(data: &[u8]) {
    let _ = parse_system(data);
    let _ = MultiPoly::parse_json(Rationals, data);
    let _ = Polytope::from_json_bytes(data);
    let _ = MixedSubdivision::from_json_bytes(data);
    let _ = ResultantPolytope::from_json_bytes(data);
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_rational(s);
    }
}

#[test]
fn seeds_parse_with_their_own_parser() {
    for s in seeds("system") {
        parse_system(&s).unwrap();
    }
    for s in seeds("polynomial") {
        MultiPoly::parse_json(Rationals, &s).unwrap();
    }
    for s in seeds("polytope") {
        Polytope::from_json_bytes(&s).unwrap();
    }
    for s in seeds("subdivision") {
        MixedSubdivision::from_json_bytes(&s).unwrap();
    }
    for s in seeds("resultant_polytope") {
        ResultantPolytope::from_json_bytes(&s).unwrap();
    }
}

#[derive(Clone, Debug)]
enum Edit {
    Flip(usize, u8),
    Drop(usize, usize),
    Repeat(usize, usize),
    Insert(usize, &'static str),
}

fn apply(data: &[u8], edits: &[Edit]) -> Vec<u8> {
    let mut d = data.to_vec();
    for e in edits {
        if d.is_empty() {
            break;
        }
        match *e {
            Edit::Flip(i, b) => {
                let i = i % d.len();
                d[i] ^= b;
            }
            Edit::Drop(i, n) => {
                let i = i % d.len();
                let end = (i + n).min(d.len());
                d.drain(i..end);
            }
            Edit::Repeat(i, n) => {
                let i = i % d.len();
                let end = (i + n).min(d.len());
                let chunk = d[i..end].to_vec();
                d.splice(i..i, chunk);
            }
            Edit::Insert(i, s) => {
                let i = i % (d.len() + 1);
                d.splice(i..i, s.bytes());
            }
        }
    }
    d
}

fn edit() -> impl Strategy<Value = Edit> {
    let tokens = prop::sample::select(vec!["-", "0", "9999999999", "[]", "[[", "null", "\"symbolic\"", "/0", ",", "1e9"]);
    prop_oneof![
        (any::<usize>(), 1u8..).prop_map(|(i, b)| Edit::Flip(i, b)),
        (any::<usize>(), 1usize..20).prop_map(|(i, n)| Edit::Drop(i, n)),
        (any::<usize>(), 1usize..20).prop_map(|(i, n)| Edit::Repeat(i, n)),
        (any::<usize>(), tokens).prop_map(|(i, s)| Edit::Insert(i, s)),
    ]
}

fn all_seeds() -> Vec<Vec<u8>> {
    ["system", "polynomial", "polytope", "subdivision", "resultant_polytope", "rational"]
        .iter()
        .flat_map(|t| seeds(t))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn mutated_seeds_do_not_panic(k in any::<usize>(), edits in prop::collection::vec(edit(), 1..6)) {
        let seeds = all_seeds();
        parse_all(&apply(&seeds[k % seeds.len()], &edits));
    }

    #[test]
    fn arbitrary_bytes_do_not_panic(data in prop::collection::vec(any::<u8>(), 0..200)) {
        parse_all(&data);
    }
}
