#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(values) = fracdyn_cli::config::parse_f64_list(s) {
        assert!(values.iter().all(|v| v.is_finite()), "{s:?} -> {values:?}");
    }
    if let Ok(state) = fracdyn_cli::config::parse_state3(s) {
        assert_eq!(state.dim(), 3);
    }
});
