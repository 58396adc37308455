#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(edges) = senseforge::clustering::parse_weighted_edges(text) {
        assert!(edges.iter().all(|e| e.weight > 0.0 && e.weight.is_finite()));
    }
});
