#![no_main]
use libfuzzer_sys::fuzz_target;
use senseforge::pipeline::{instance_key, predicted_rows};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = predicted_rows(text) {
        for (id, _) in &rows {
            let _ = instance_key(id);
        }
    }
});
