#![no_main]

use branchstat::dyck::LabeledDyckPath;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(path) = LabeledDyckPath::from_json_str(text) {
        let json = serde_json::to_string(&path.to_json()).unwrap();
        assert_eq!(LabeledDyckPath::from_json_str(&json).unwrap(), path);
        let _ = path.primitive_parts();
    }
});
