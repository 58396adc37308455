#![no_main]
use libfuzzer_sys::fuzz_target;
use senseforge::sense_select::SenseEmbeddingTable;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = SenseEmbeddingTable::from_json(text);
    }
});
