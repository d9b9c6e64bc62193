use branchstat::charpoly::{interpolate, IntPolynomial};
use branchstat::dyck::{self, LabeledDyckPath};
use branchstat::enumerate::{branch_count, decompose_branches, glue_branches};
use branchstat::setsys::{parse_set_spec, OffsetSet};
use branchstat::tree::{parse_subtree, Child, Label, LabeledTree, NodeId, Subtree, Vertex};
use branchstat::Triangle;
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

/// Grows a tree by hanging node `i` on the leaf picked by `picks[i - 1]`,
/// then labels nodes in creation order.
fn build(m: usize, picks: &[usize], labels: &[Label]) -> LabeledTree {
    let arity = m + 1;
    let mut kids: Vec<Vec<Option<usize>>> = vec![vec![None; arity]];
    let mut leaves: Vec<(usize, usize)> = (0..arity).map(|s| (0, s)).collect();
    for &pick in picks {
        let (parent, slot) = leaves.swap_remove(pick % leaves.len());
        let id = kids.len();
        kids.push(vec![None; arity]);
        kids[parent][slot] = Some(id);
        leaves.extend((0..arity).map(|s| (id, s)));
    }
    fn to_subtree(v: usize, kids: &[Vec<Option<usize>>], labels: &[Label]) -> Subtree {
        Subtree::node(
            labels[v],
            kids[v]
                .iter()
                .map(|k| k.map_or(Subtree::Leaf, |c| to_subtree(c, kids, labels)))
                .collect(),
        )
    }
    LabeledTree::from_subtree(m, &to_subtree(0, &kids, labels)).unwrap()
}

fn arb_tree(max_m: usize, max_n: usize) -> impl Strategy<Value = LabeledTree> {
    (0..=max_m, 1..=max_n)
        .prop_flat_map(|(m, n)| {
            let labels = Just((1..=n as Label).collect::<Vec<_>>()).prop_shuffle();
            (
                Just(m),
                prop::collection::vec(any::<usize>(), n - 1),
                labels,
            )
        })
        .prop_map(|(m, picks, labels)| build(m, &picks, &labels))
}

fn all_vertices(t: &LabeledTree) -> Vec<Vertex> {
    let mut out = Vec::new();
    for (id, node) in t.nodes() {
        out.push(Vertex::Node(id));
        for (slot, c) in node.children().iter().enumerate() {
            if *c == Child::Leaf {
                out.push(Vertex::Leaf { parent: id, slot });
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn serialize_parse_round_trip(t in arb_tree(3, 12)) {
        let text = t.serialize();
        prop_assert_eq!(&LabeledTree::parse(&text).unwrap(), &t);
        prop_assert_eq!(&LabeledTree::parse_with_m(&text, t.m()).unwrap(), &t);
        prop_assert_eq!(text, t.to_string());
    }

    #[test]
    fn drift_is_sum_of_lsib_on_path(t in arb_tree(3, 10)) {
        for v in all_vertices(&t) {
            let (node, extra) = match v {
                Vertex::Node(id) => (id, 0),
                Vertex::Leaf { parent, slot } => (parent, slot),
            };
            let direct: usize = t
                .path_to(node)
                .into_iter()
                .skip(1)
                .map(|u| t.lsib(Vertex::Node(u)).unwrap())
                .sum();
            prop_assert_eq!(t.drift(v).unwrap(), direct + extra);
        }
    }

    #[test]
    fn twigs_partition_the_nodes(t in arb_tree(3, 12)) {
        let twigs = t.twigs();
        let trunk = t.trunk();
        prop_assert_eq!(twigs.len(), trunk.len());
        let mut seen: Vec<NodeId> = Vec::new();
        for (twig, &v) in twigs.iter().zip(&trunk) {
            prop_assert_eq!(twig.trunk_node, v);
            prop_assert_eq!(twig.nodes[0], v);
            seen.extend(&twig.nodes);
        }
        seen.sort();
        let all: Vec<NodeId> = t.nodes().map(|(id, _)| id).collect();
        prop_assert_eq!(seen, all);
    }

    #[test]
    fn glue_inverts_decompose(t in arb_tree(3, 12)) {
        let parts = decompose_branches(&t);
        prop_assert_eq!(parts.len(), branch_count(&t));
        for p in &parts {
            prop_assert_eq!(branch_count(p), 1);
        }
        prop_assert_eq!(glue_branches(&parts).unwrap(), t);
    }

    #[test]
    fn tree_path_round_trip(t in arb_tree(3, 12).prop_filter("m >= 1", |t| t.m() >= 1)) {
        let p = dyck::tree_to_path(&t).unwrap();
        prop_assert_eq!(p.n(), t.len());
        let reparsed = LabeledDyckPath::parse(&p.to_string(), t.m()).unwrap();
        prop_assert_eq!(&reparsed, &p);
        prop_assert_eq!(p.primitive_parts().concat(), p.steps().to_vec());
        prop_assert_eq!(dyck::path_to_tree(&p).unwrap(), t);
    }

    #[test]
    fn set_spec_round_trip(xs in prop::collection::vec(-6i64..=6, 0..8)) {
        let s = OffsetSet::new(xs.iter().copied());
        let spec = s.elements().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        prop_assert_eq!(&parse_set_spec(&spec).unwrap(), &s);
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<OffsetSet>(&json).unwrap(), s);
    }

    #[test]
    fn triangle_csv_round_trip(rows in prop::collection::vec(any::<u64>(), 1..30)) {
        let mut it = rows.into_iter();
        let mut tri = Vec::new();
        'fill: for n in 1.. {
            let mut row = Vec::new();
            for _ in 0..n {
                match it.next() {
                    Some(x) => row.push(BigUint::from(x)),
                    None => break 'fill,
                }
            }
            tri.push(row);
        }
        let t = Triangle { family: "x".into(), rows: tri };
        prop_assert_eq!(Triangle::from_csv("x", &t.to_csv()).unwrap(), t);
    }

    #[test]
    fn polynomial_json_and_interpolation(coeffs in prop::collection::vec(-1000i64..1000, 1..7)) {
        let p = IntPolynomial::from_i64(&coeffs);
        let back = IntPolynomial::from_json(&p.to_json()).unwrap();
        prop_assert_eq!(&back, &p);
        let points: Vec<(BigInt, BigInt)> = (0..=p.degree() as i64)
            .map(|x| {
                let x = BigInt::from(3 * x - 5);
                let y = p.eval(&x);
                (x, y)
            })
            .collect();
        prop_assert_eq!(interpolate(&points).unwrap(), p);
    }

    #[test]
    fn tree_parser_never_panics(text in "[()0-9:,* ]{0,40}") {
        let _ = parse_subtree(&text);
        if let Ok(t) = LabeledTree::parse(&text) {
            prop_assert_eq!(LabeledTree::parse(&t.serialize()).unwrap(), t);
        }
    }

    #[test]
    fn other_parsers_never_panic(text in "[-+0-9a-z:, \n]{0,40}", m in 0usize..4) {
        let _ = parse_set_spec(&text);
        let _ = LabeledDyckPath::parse(&text, m);
        let _ = Triangle::from_csv("x", &text);
        let _ = LabeledDyckPath::from_json_str(&text);
    }
}
