#![no_main]
use libfuzzer_sys::fuzz_target;
use sparseres::arith::{MultiPoly, Rationals};

fuzz_target!(|data: &[u8]| {
    let _ = MultiPoly::parse_json(Rationals, data);
});
