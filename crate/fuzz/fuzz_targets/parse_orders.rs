#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(order) = fracdyn_cli::config::parse_order(s) {
        // Accepted orders are reduced fractions in (0, 1].
        let v = order.value();
        assert!(v > 0.0 && v <= 1.0, "{s:?} -> {order}");
        assert!(order.numerator() <= order.denominator());
    }
    if let Ok(orders) = fracdyn_cli::config::parse_orders3(s) {
        assert_eq!(orders.len(), 3);
    }
});
