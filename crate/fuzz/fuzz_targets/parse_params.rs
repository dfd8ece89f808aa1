#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = fracdyn_cli::config::parse_params(s) {
        for v in [p.a, p.b, p.c, p.d, p.h] {
            assert!(v.is_finite() && v > 0.0, "{s:?} -> {p:?}");
        }
    }
});
