#![no_main]

use branchstat::Triangle;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = Triangle::from_csv("fuzz", text) {
        assert_eq!(Triangle::from_csv("fuzz", &t.to_csv()).unwrap(), t);
    }
});
