#![no_main]

use branchstat::charpoly::{abs_coeffs, IntPolynomial, PolynomialJson};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(json) = serde_json::from_slice::<PolynomialJson>(data) else {
        return;
    };
    if let Ok(poly) = IntPolynomial::from_json(&json) {
        let _ = poly.to_string();
        let _ = abs_coeffs(&poly);
        let back = IntPolynomial::from_json(&poly.to_json()).unwrap();
        assert_eq!(back, poly);
    }
});
