#![no_main]
use libfuzzer_sys::fuzz_target;
use senseforge::pipeline::PipelineConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = PipelineConfig::from_toml(text) {
            let _ = config.validate();
            let _ = config.run_name();
        }
    }
});
