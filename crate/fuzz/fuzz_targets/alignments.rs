#![no_main]
use libfuzzer_sys::fuzz_target;
use senseforge::eval::{parse_alignment_line, parse_alignments};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(all) = parse_alignments(text) {
        for (line, parsed) in text.lines().zip(&all) {
            assert_eq!(parse_alignment_line(line).as_ref(), Ok(parsed));
        }
    }
});
