#![no_main]

use fracdyn_cli::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Any JSON that deserializes into a run configuration must survive a
    // serialize/deserialize round trip without drift.
    let Ok(config) = serde_json::from_slice::<RunConfig>(data) else {
        return;
    };
    let json = serde_json::to_string(&config).expect("config serializes");
    let back: RunConfig = serde_json::from_str(&json).expect("round trip parses");
    assert_eq!(config, back);
});
