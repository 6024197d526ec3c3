#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = sparseres::subdivision::MixedSubdivision::from_json_bytes(data);
});
