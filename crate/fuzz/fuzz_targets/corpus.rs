#![no_main]
use libfuzzer_sys::fuzz_target;
use senseforge::pipeline::{format_corpus, parse_corpus, ProperNouns};

// Anything that parses must survive a format/parse round trip unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_corpus(text, ProperNouns::Drop);
    if let Ok(corpus) = parse_corpus(text, ProperNouns::Keep) {
        let again = parse_corpus(&format_corpus(&corpus), ProperNouns::Keep)
            .expect("formatted corpus parses");
        assert_eq!(corpus, again);
    }
});
