#![no_main]

use branchstat::dyck::{path_to_tree, tree_to_path, LabeledDyckPath};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&m, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(path) = LabeledDyckPath::parse(text, usize::from(m % 4)) {
        assert_eq!(
            LabeledDyckPath::parse(&path.to_string(), path.m()).unwrap(),
            path
        );
        let _ = path.compartments();
        let _ = path.rl_maxima();
        if let Ok(tree) = path_to_tree(&path) {
            assert_eq!(tree_to_path(&tree).unwrap(), path);
        }
    }
});
