#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let words = senseforge::embeddings::parse_stopwords(text);
        assert!(words.iter().all(|w| !w.is_empty()));
    }
});
