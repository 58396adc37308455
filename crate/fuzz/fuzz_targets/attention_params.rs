#![no_main]
use libfuzzer_sys::fuzz_target;
use senseforge::sense_select::AttentionParams;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(params) = AttentionParams::from_json(text) {
        AttentionParams::from_json(&params.to_json()).expect("serialized parameters reload");
    }
});
