#![no_main]

use branchstat::setsys::parse_set_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = parse_set_spec(text) {
        let listed = s
            .elements()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",");
        assert_eq!(parse_set_spec(&listed).expect("element list reparses"), s);
        if s.m() <= 64 {
            let _ = s.is_transitive();
        }
    }
});
