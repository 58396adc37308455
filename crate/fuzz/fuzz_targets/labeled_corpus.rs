#![no_main]
use libfuzzer_sys::fuzz_target;
use senseforge::pipeline::{format_labeled, parse_labeled};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sentences) = parse_labeled(text) {
        let again = parse_labeled(&format_labeled(&sentences)).expect("formatted output parses");
        assert_eq!(sentences, again);
    }
});
