//! Replays the checked-in fuzz seeds through the parsers they target.

use std::fs;
use std::path::PathBuf;

use branchstat::charpoly::{IntPolynomial, PolynomialJson};
use branchstat::dyck::{path_to_tree, tree_to_path, LabeledDyckPath};
use branchstat::setsys::parse_set_spec;
use branchstat::{LabeledTree, Triangle};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            (
                path.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&path).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(data: &[u8]) -> &str {
    std::str::from_utf8(data).unwrap()
}

#[test]
fn tree_seeds() {
    let mut parsed = 0;
    for (name, data) in seeds("tree_text") {
        if let Ok(t) = LabeledTree::parse(text(&data)) {
            assert_eq!(LabeledTree::parse(&t.serialize()).unwrap(), t, "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn set_spec_seeds() {
    for (name, data) in seeds("set_spec") {
        let s = parse_set_spec(text(&data)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let listed = s
            .elements()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",");
        assert_eq!(parse_set_spec(&listed).unwrap(), s);
    }
}

#[test]
fn dyck_text_seeds() {
    let mut parsed = 0;
    for (name, data) in seeds("dyck_text") {
        let (&m, rest) = data.split_first().unwrap();
        if let Ok(p) = LabeledDyckPath::parse(text(rest), usize::from(m % 4)) {
            assert_eq!(
                tree_to_path(&path_to_tree(&p).unwrap()).unwrap(),
                p,
                "{name}"
            );
            parsed += 1;
        }
    }
    assert!(parsed >= 2);
}

#[test]
fn dyck_json_seeds() {
    let results: Vec<bool> = seeds("dyck_json")
        .iter()
        .map(|(_, d)| LabeledDyckPath::from_json_str(text(d)).is_ok())
        .collect();
    assert!(results.contains(&true) && results.contains(&false));
}

#[test]
fn polynomial_seeds() {
    let mut ok = 0;
    for (_, data) in seeds("polynomial_json") {
        let json: PolynomialJson = serde_json::from_slice(&data).unwrap();
        if IntPolynomial::from_json(&json).is_ok() {
            ok += 1;
        }
    }
    assert_eq!(ok, 2);
}

#[test]
fn triangle_seeds() {
    let seeds = seeds("triangle_csv");
    let parsed: Vec<bool> = seeds
        .iter()
        .map(|(_, d)| Triangle::from_csv("seed", text(d)).is_ok())
        .collect();
    assert_eq!(parsed, vec![true, false]);
}
