#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(store) = senseforge::embeddings::parse_embeddings(text) {
        assert!(store.dim() > 0);
    }
});
