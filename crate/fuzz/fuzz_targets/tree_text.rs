#![no_main]

use branchstat::LabeledTree;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(tree) = LabeledTree::parse(text) {
        let again = LabeledTree::parse(&tree.serialize()).expect("serialized tree reparses");
        assert_eq!(again, tree);
        let _ = tree.trunk_labels();
        let _ = tree.twigs();
    }
});
