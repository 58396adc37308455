#![no_main]
use libfuzzer_sys::fuzz_target;
use senseforge::clustering::ClusterModel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(model) = ClusterModel::from_json(text) {
        ClusterModel::from_json(&model.to_json()).expect("serialized model reloads");
    }
});
