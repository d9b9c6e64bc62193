//! Enumeration of `T_S(n)` and the branch and compartment statistics.
//!
//! Trees are generated shape by shape. For each unlabeled `(m+1)`-ary shape
//! the cadet positions are fixed, so Condition S reduces to an order
//! relation between each node and its cadet. Shapes where some cadet slot
//! demands both `parent < cadet` and `parent > cadet` are dropped before any
//! label is placed; the rest are labeled by a depth-first search over
//! preorder positions that checks each relation as soon as both ends are
//! labeled.
//!
//! Work is sharded over `(shape, root label)` pairs with rayon. Counts are
//! merged by addition, and listings are sorted by serialization afterwards,
//! so results do not depend on the number of workers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::setsys::OffsetSet;
use crate::tree::{Child, Label, LabeledTree, NodeId, Subtree, TreeError};

/// Largest instance size the bitmask-based labeler supports.
pub const MAX_NODES: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("tree has arity {tree}, but S needs arity {expected}")]
    ArityMismatch { tree: usize, expected: usize },
    #[error("instance size {0} exceeds the supported maximum of {MAX_NODES}")]
    TooLarge(usize),
    #[error("label set must be nonempty and contain distinct positive labels")]
    BadLabelSet,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlueError {
    #[error("nothing to glue")]
    Empty,
    #[error("part {index} has arity {found}, expected {expected}")]
    ArityMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("label {0} appears in more than one part")]
    OverlappingLabels(Label),
    #[error("part {index} has {branches} branches, expected exactly one")]
    NotConnected { index: usize, branches: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("the lift needs 0 in S")]
    ZeroNotInS,
    #[error("offset {0} is not a valid choice: need k >= 1 with k and -k in S")]
    BadOffset(usize),
    #[error("tree is not in T_S")]
    NotInFamily,
    #[error("tree has a single compartment")]
    AlreadyConnected,
    #[error("tree is not the image of a disconnected tree")]
    NotInImage,
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// An unlabeled `(m+1)`-ary rooted plane tree, nodes in preorder.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    m: usize,
    /// `children[v][slot]` is the preorder index of a node child, or `None`.
    children: Vec<Vec<Option<usize>>>,
}

impl Shape {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of nodes (0 for the bare leaf).
    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn children(&self, v: usize) -> &[Option<usize>] {
        &self.children[v]
    }

    /// Number of nodes on the leftmost path from the root.
    pub fn trunk_len(&self) -> usize {
        let mut len = 0;
        let mut cursor = if self.is_empty() { None } else { Some(0) };
        while let Some(v) = cursor {
            len += 1;
            cursor = self.children[v][0];
        }
        len
    }

    /// Attaches labels (indexed by preorder position) to the shape.
    pub fn label(&self, labels: &[Label]) -> Result<LabeledTree, TreeError> {
        if labels.len() != self.len() {
            return Err(TreeError::LabelCount {
                expected: self.len(),
                found: labels.len(),
            });
        }
        if self.is_empty() {
            return Err(TreeError::Empty);
        }
        LabeledTree::from_subtree(self.m, &self.to_subtree(0, labels))
    }

    fn to_subtree(&self, v: usize, labels: &[Label]) -> Subtree {
        Subtree::Node {
            label: labels[v],
            children: self.children[v]
                .iter()
                .map(|c| match c {
                    None => Subtree::Leaf,
                    Some(c) => self.to_subtree(*c, labels),
                })
                .collect(),
        }
    }

    /// The shape underlying a labeled tree.
    pub fn of(tree: &LabeledTree) -> Shape {
        Shape {
            m: tree.m(),
            children: tree
                .nodes()
                .map(|(_, node)| {
                    node.children()
                        .iter()
                        .map(|c| c.node().map(|id| id.0))
                        .collect()
                })
                .collect(),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write(shape: &Shape, v: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("(")?;
            for (i, c) in shape.children[v].iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                match c {
                    None => f.write_str("*")?,
                    Some(c) => write(shape, *c, f)?,
                }
            }
            f.write_str(")")
        }
        if self.is_empty() {
            f.write_str("*")
        } else {
            write(self, 0, f)
        }
    }
}

#[derive(Clone)]
enum Nested {
    Leaf,
    Node(Vec<Nested>),
}

fn nested_shapes(m: usize, n: usize, memo: &mut BTreeMap<usize, Vec<Nested>>) -> Vec<Nested> {
    if let Some(found) = memo.get(&n) {
        return found.clone();
    }
    let out = if n == 0 {
        vec![Nested::Leaf]
    } else {
        let mut out = Vec::new();
        let mut sizes = vec![0usize; m + 1];
        distribute(m, n - 1, 0, &mut sizes, memo, &mut out);
        out
    };
    memo.insert(n, out.clone());
    out
}

// Enumerates every way to split `remaining` nodes over the m+1 child slots.
fn distribute(
    m: usize,
    remaining: usize,
    slot: usize,
    sizes: &mut Vec<usize>,
    memo: &mut BTreeMap<usize, Vec<Nested>>,
    out: &mut Vec<Nested>,
) {
    if slot == m {
        sizes[slot] = remaining;
        let per_slot: Vec<Vec<Nested>> = sizes.iter().map(|&s| nested_shapes(m, s, memo)).collect();
        let mut pick = vec![0usize; m + 1];
        loop {
            out.push(Nested::Node(
                pick.iter()
                    .enumerate()
                    .map(|(i, &p)| per_slot[i][p].clone())
                    .collect(),
            ));
            let mut i = m + 1;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < per_slot[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }
    for s in 0..=remaining {
        sizes[slot] = s;
        distribute(m, remaining - s, slot + 1, sizes, memo, out);
    }
}

fn flatten(nested: &Nested, children: &mut Vec<Vec<Option<usize>>>) -> Option<usize> {
    match nested {
        Nested::Leaf => None,
        Nested::Node(kids) => {
            let id = children.len();
            children.push(Vec::new());
            let mapped: Vec<Option<usize>> = kids.iter().map(|k| flatten(k, children)).collect();
            children[id] = mapped;
            Some(id)
        }
    }
}

/// All unlabeled `(m+1)`-ary shapes with `n` nodes, in canonical
/// (serialization) order. There are `binom((m+1)n, n) / (mn+1)` of them.
pub fn enumerate_shapes(m: usize, n: usize) -> impl Iterator<Item = Shape> {
    let mut memo = BTreeMap::new();
    let mut shapes: Vec<(String, Shape)> = nested_shapes(m, n, &mut memo)
        .iter()
        .map(|nested| {
            let mut children = Vec::new();
            flatten(nested, &mut children);
            let shape = Shape { m, children };
            (shape.to_string(), shape)
        })
        .collect();
    shapes.sort_by(|a, b| a.0.cmp(&b.0));
    shapes.into_iter().map(|(_, s)| s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    Free,
    /// the parent's label must be smaller
    ParentSmaller,
    /// the parent's label must be larger
    ParentLarger,
}

/// What a cadet sitting in slot `lsib` demands of its parent under S:
/// `None` when the two implications contradict each other.
fn cadet_relation(s: &OffsetSet, lsib: usize) -> Option<Relation> {
    let l = lsib as i64;
    let need_smaller = l != 0 && !s.contains(l);
    let need_larger = !s.contains(-l);
    match (need_smaller, need_larger) {
        (true, true) => None,
        (true, false) => Some(Relation::ParentSmaller),
        (false, true) => Some(Relation::ParentLarger),
        (false, false) => Some(Relation::Free),
    }
}

/// Whether every node/cadet pair of `tree` satisfies Condition S.
pub fn satisfies_condition_s(tree: &LabeledTree, s: &OffsetSet) -> Result<bool, EnumError> {
    if tree.m() != s.m() {
        return Err(EnumError::ArityMismatch {
            tree: tree.arity(),
            expected: s.m() + 1,
        });
    }
    for (id, node) in tree.nodes() {
        let Some(cadet) = tree.cadet(id) else {
            continue;
        };
        let (_, slot) = tree.node(cadet).parent().expect("cadet has a parent");
        let ok = match cadet_relation(s, slot) {
            None => false,
            Some(Relation::Free) => true,
            Some(Relation::ParentSmaller) => node.label() < tree.label(cadet),
            Some(Relation::ParentLarger) => node.label() > tree.label(cadet),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A shape prepared for labeling under a fixed S.
pub(crate) struct Prepared {
    pub(crate) shape: Shape,
    parent: Vec<usize>,
    relation: Vec<Relation>,
    pub(crate) trunk: Vec<usize>,
    pub(crate) twig_of: Vec<usize>,
}

impl Prepared {
    fn new(shape: Shape, s: &OffsetSet) -> Option<Self> {
        let n = shape.len();
        let mut parent = vec![usize::MAX; n];
        let mut relation = vec![Relation::Free; n];
        for v in 0..n {
            let kids = &shape.children[v];
            for c in kids.iter().flatten() {
                parent[*c] = v;
            }
            if let Some(slot) = kids.iter().rposition(|c| c.is_some()) {
                let cadet = kids[slot].expect("rposition found a node");
                relation[cadet] = cadet_relation(s, slot)?;
            }
        }
        let mut trunk = Vec::new();
        let mut twig_of = vec![0; n];
        if n > 0 {
            let mut cursor = Some(0);
            while let Some(v) = cursor {
                trunk.push(v);
                cursor = shape.children[v][0];
            }
            // preorder: each non-trunk node inherits the twig of its parent
            for v in 0..n {
                twig_of[v] = match trunk.iter().position(|&t| t == v) {
                    Some(i) => i,
                    None => twig_of[parent[v]],
                };
            }
        }
        Some(Prepared {
            shape,
            parent,
            relation,
            trunk,
            twig_of,
        })
    }

    fn accepts(&self, v: usize, label: Label, labels: &[Label]) -> bool {
        match self.relation[v] {
            Relation::Free => true,
            Relation::ParentSmaller => labels[self.parent[v]] < label,
            Relation::ParentLarger => labels[self.parent[v]] > label,
        }
    }

    /// Calls `visit` with every admissible labeling whose root label is
    /// `root`. Labels are `1..=n`, indexed by preorder position.
    fn for_each_labeling(&self, root: Label, visit: &mut impl FnMut(&[Label])) {
        let n = self.shape.len();
        let mut labels = vec![0; n];
        labels[0] = root;
        let used = 1u64 << (root - 1);
        self.extend(1, used, &mut labels, visit);
    }

    fn extend(&self, v: usize, used: u64, labels: &mut [Label], visit: &mut impl FnMut(&[Label])) {
        let n = labels.len();
        if v == n {
            visit(labels);
            return;
        }
        let mut free = !used & ((1u64 << n) - 1);
        while free != 0 {
            let bit = free.trailing_zeros();
            free &= free - 1;
            let label = bit + 1;
            if self.accepts(v, label, labels) {
                labels[v] = label;
                self.extend(v + 1, used | 1 << bit, labels, visit);
            }
        }
    }

    pub(crate) fn branch_count(&self, labels: &[Label]) -> usize {
        rl_maxima(self.trunk.iter().map(|&v| labels[v]))
    }

    pub(crate) fn compartment_count(&self, labels: &[Label]) -> usize {
        let mut twig_max = vec![0; self.trunk.len()];
        for (v, &l) in labels.iter().enumerate() {
            let t = self.twig_of[v];
            twig_max[t] = twig_max[t].max(l);
        }
        greedy_groups(&twig_max)
    }
}

/// Number of right-to-left maxima of a sequence.
pub fn rl_maxima(seq: impl DoubleEndedIterator<Item = Label>) -> usize {
    let mut best = 0;
    let mut count = 0;
    for x in seq.rev() {
        if x > best {
            best = x;
            count += 1;
        }
    }
    count
}

/// Groups a sequence of blocks left to right, closing each group at the
/// block holding the largest label among the blocks not yet grouped.
/// `block_max[i]` is the largest label in block `i`.
pub(crate) fn greedy_groups(block_max: &[Label]) -> usize {
    let mut groups = 0;
    let mut start = 0;
    while start < block_max.len() {
        let (end, _) = block_max[start..]
            .iter()
            .enumerate()
            .max_by_key(|(_, &l)| l)
            .expect("nonempty");
        start += end + 1;
        groups += 1;
    }
    groups
}

fn prepared_shapes(s: &OffsetSet, n: usize) -> Vec<Prepared> {
    enumerate_shapes(s.m(), n)
        .filter_map(|shape| Prepared::new(shape, s))
        .collect()
}

fn check_size(n: usize) -> Result<(), EnumError> {
    if n > MAX_NODES {
        Err(EnumError::TooLarge(n))
    } else {
        Ok(())
    }
}

/// Folds a per-tree value over `T_S(n)` in parallel.
pub(crate) fn fold_trees<T, F, M>(s: &OffsetSet, n: usize, init: fn() -> T, visit: F, merge: M) -> T
where
    T: Send,
    F: Fn(&mut T, &Prepared, &[Label]) + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    if n == 0 {
        return init();
    }
    let prepared = prepared_shapes(s, n);
    let jobs: Vec<(usize, Label)> = (0..prepared.len())
        .flat_map(|i| (1..=n as Label).map(move |r| (i, r)))
        .collect();
    jobs.par_iter()
        .fold(init, |mut acc, &(i, root)| {
            let p = &prepared[i];
            p.for_each_labeling(root, &mut |labels| visit(&mut acc, p, labels));
            acc
        })
        .reduce(init, merge)
}

/// Every tree of `T_S(n)`, sorted by serialization.
pub fn enumerate_trees(s: &OffsetSet, n: usize) -> Result<Vec<LabeledTree>, EnumError> {
    check_size(n)?;
    let mut trees = fold_trees(
        s,
        n,
        Vec::new,
        |acc: &mut Vec<(String, LabeledTree)>, p, labels| {
            let tree = LabeledTree::from_preorder_unchecked(p.shape.m(), labels, &p.shape.children);
            acc.push((tree.serialize(), tree));
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    );
    trees.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(trees.into_iter().map(|(_, t)| t).collect())
}

/// Every tree of `T_S(V)` for an arbitrary label set `V`, sorted by
/// serialization.
pub fn enumerate_trees_on(
    s: &OffsetSet,
    labels: &BTreeSet<Label>,
) -> Result<Vec<LabeledTree>, EnumError> {
    if labels.is_empty() || labels.contains(&0) {
        return Err(EnumError::BadLabelSet);
    }
    let sorted: Vec<Label> = labels.iter().copied().collect();
    let mut trees: Vec<(String, LabeledTree)> = enumerate_trees(s, sorted.len())?
        .into_iter()
        .map(|t| {
            let t = t
                .relabel(|l| sorted[l as usize - 1])
                .expect("order-preserving relabeling is injective");
            (t.serialize(), t)
        })
        .collect();
    trees.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(trees.into_iter().map(|(_, t)| t).collect())
}

/// `|T_S(n)|`, without materializing the trees.
pub fn count_trees(s: &OffsetSet, n: usize) -> Result<BigUint, EnumError> {
    check_size(n)?;
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }
    let total = fold_trees(s, n, || 0u64, |acc, _, _| *acc += 1, |a, b| a + b);
    Ok(BigUint::from(total))
}

/// Which tree statistic a distribution tabulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    Branches,
    Compartments,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Branches => "branches",
            Statistic::Compartments => "compartments",
        }
    }
}

/// Number of objects of size `n` with statistic value `j`, for `j = 1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatisticDistribution {
    pub n: usize,
    pub counts: BTreeMap<usize, BigUint>,
}

impl StatisticDistribution {
    /// A distribution with every `j` in `1..=n` present (zeros included).
    pub fn from_counts(n: usize, raw: &[u64]) -> Self {
        let counts = (1..=n)
            .map(|j| (j, BigUint::from(raw.get(j).copied().unwrap_or(0))))
            .collect();
        StatisticDistribution { n, counts }
    }

    pub fn get(&self, j: usize) -> BigUint {
        self.counts.get(&j).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Counts for `j = 1..=n` as a vector.
    pub fn row(&self) -> Vec<BigUint> {
        (1..=self.n).map(|j| self.get(j)).collect()
    }

    pub fn to_json(&self, s: &OffsetSet, stat: Statistic) -> DistributionJson {
        DistributionJson {
            s: s.elements().to_vec(),
            n: self.n,
            stat: stat.name().to_string(),
            counts: self
                .counts
                .iter()
                .map(|(j, c)| (j.to_string(), c.to_string()))
                .collect(),
        }
    }
}

/// Wire form of a distribution; counts are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionJson {
    #[serde(rename = "S")]
    pub s: Vec<i64>,
    pub n: usize,
    pub stat: String,
    pub counts: BTreeMap<String, String>,
}

fn distribution(
    s: &OffsetSet,
    n: usize,
    stat: Statistic,
) -> Result<StatisticDistribution, EnumError> {
    check_size(n)?;
    let raw = fold_trees(
        s,
        n,
        Vec::new,
        |acc: &mut Vec<u64>, p, labels| {
            let j = match stat {
                Statistic::Branches => p.branch_count(labels),
                Statistic::Compartments => p.compartment_count(labels),
            };
            if acc.len() <= j {
                acc.resize(j + 1, 0);
            }
            acc[j] += 1;
        },
        |mut a, b| {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    Ok(StatisticDistribution::from_counts(n, &raw))
}

/// `counts[j]` = number of trees in `T_S(n)` with `j` branches.
pub fn branch_distribution(s: &OffsetSet, n: usize) -> Result<StatisticDistribution, EnumError> {
    distribution(s, n, Statistic::Branches)
}

/// `counts[j]` = number of trees in `T_S(n)` with `j` compartments.
pub fn compartment_distribution(
    s: &OffsetSet,
    n: usize,
) -> Result<StatisticDistribution, EnumError> {
    distribution(s, n, Statistic::Compartments)
}

/// Trunk nodes whose label exceeds every label further along the trunk.
pub fn branch_nodes(tree: &LabeledTree) -> Vec<NodeId> {
    let trunk = tree.trunk();
    let mut best = 0;
    let mut out = Vec::new();
    for &v in trunk.iter().rev() {
        if tree.label(v) > best {
            best = tree.label(v);
            out.push(v);
        }
    }
    out.reverse();
    out
}

pub fn branch_count(tree: &LabeledTree) -> usize {
    rl_maxima(tree.trunk_labels().into_iter())
}

/// Cuts the trunk after every branch node. Each piece keeps its twigs; the
/// leftmost child of its last trunk node becomes a leaf.
pub fn decompose_branches(tree: &LabeledTree) -> Vec<LabeledTree> {
    let trunk = tree.trunk();
    let cut_after: Vec<usize> = branch_nodes(tree)
        .into_iter()
        .map(|b| {
            trunk
                .iter()
                .position(|&v| v == b)
                .expect("branch node on trunk")
        })
        .collect();
    let mut rest = tree.to_subtree();
    let mut start = 0;
    let mut pieces = Vec::with_capacity(cut_after.len());
    for b in cut_after {
        let slots = vec![0; b - start + 1];
        let next = rest.take_at(&slots).expect("trunk path exists");
        pieces.push(LabeledTree::from_subtree(tree.m(), &rest).expect("piece of a valid tree"));
        rest = next;
        start = b + 1;
    }
    pieces
}

/// Glues one-branch trees into the unique tree whose branches they are.
pub fn glue_branches(parts: &[LabeledTree]) -> Result<LabeledTree, GlueError> {
    let first = parts.first().ok_or(GlueError::Empty)?;
    let m = first.m();
    let mut seen = BTreeSet::new();
    for (index, part) in parts.iter().enumerate() {
        if part.m() != m {
            return Err(GlueError::ArityMismatch {
                index,
                expected: m + 1,
                found: part.arity(),
            });
        }
        let branches = branch_count(part);
        if branches != 1 {
            return Err(GlueError::NotConnected { index, branches });
        }
        for label in part.labels() {
            if !seen.insert(label) {
                return Err(GlueError::OverlappingLabels(label));
            }
        }
    }
    // a one-branch tree carries its largest trunk label on its last trunk node
    let mut order: Vec<&LabeledTree> = parts.iter().collect();
    order.sort_by_key(|p| std::cmp::Reverse(p.trunk_labels().into_iter().max()));
    let mut glued = order[0].to_subtree();
    for part in &order[1..] {
        glued.replace_leftmost_leaf(part.to_subtree());
    }
    Ok(LabeledTree::from_subtree(m, &glued).expect("disjoint parts glue to a valid tree"))
}

/// Number of compartments: twigs grouped left to right, each group closed
/// at the twig holding the largest label not yet grouped.
pub fn compartments(tree: &LabeledTree) -> usize {
    let twig_max: Vec<Label> = tree
        .twigs()
        .iter()
        .map(|t| t.nodes.iter().map(|&v| tree.label(v)).max().unwrap_or(0))
        .collect();
    greedy_groups(&twig_max)
}

fn check_lift_offset(s: &OffsetSet, k: usize) -> Result<(), LiftError> {
    if !s.contains(0) {
        return Err(LiftError::ZeroNotInS);
    }
    let ki = k as i64;
    if k == 0 || !s.contains(ki) || !s.contains(-ki) {
        return Err(LiftError::BadOffset(k));
    }
    Ok(())
}

/// Sends a tree of `T_S(n)` with at least two compartments to a tree with
/// one compartment, injectively.
///
/// Let `v_1..v_r` be the trunk and `v_p` the trunk node whose twig holds the
/// largest label. If `p > 1`, the subtree at `v_p` is cut from its parent
/// `v_{p-1}` and put in place of the leftmost leaf of the parent's child in
/// slot `k`. If `p = 1`, the first twig (the root with a leaf in slot 0) is
/// put in place of the leftmost leaf of the slot-`k` child of the last
/// trunk node, and `v_2` becomes the root.
pub fn lift_disconnected(
    tree: &LabeledTree,
    s: &OffsetSet,
    k: usize,
) -> Result<LabeledTree, LiftError> {
    check_lift_offset(s, k)?;
    if !satisfies_condition_s(tree, s)? {
        return Err(LiftError::NotInFamily);
    }
    if compartments(tree) < 2 {
        return Err(LiftError::AlreadyConnected);
    }
    let top = tree.find(tree.max_label()).expect("max label present");
    let twigs = tree.twigs();
    let p = twigs
        .iter()
        .position(|t| t.nodes.contains(&top))
        .expect("twigs partition the nodes");
    let r = twigs.len();
    let mut whole = tree.to_subtree();
    let lifted = if p > 0 {
        let moved = whole.take_at(&vec![0; p]).expect("trunk path exists");
        let mut target = vec![0; p - 1];
        target.push(k);
        whole
            .at_path_mut(&target)
            .expect("slot k exists")
            .replace_leftmost_leaf(moved);
        whole
    } else {
        let mut rest = whole.take_at(&[0]).expect("root has a trunk child");
        let mut target = vec![0; r - 2];
        target.push(k);
        rest.at_path_mut(&target)
            .expect("slot k exists")
            .replace_leftmost_leaf(whole);
        rest
    };
    Ok(LabeledTree::from_subtree(tree.m(), &lifted)?)
}

/// Inverse of [`lift_disconnected`]: recovers the disconnected tree from
/// its connected image.
///
/// The moved vertex is the vertex of drift `k` furthest from the root on
/// the path to the largest label. If its leftmost child is a node it came
/// from the trunk and goes back in place of the leftmost leaf; otherwise it
/// was the old root and the rest of the tree is hung back in its slot 0.
pub fn lower_connected(tree: &LabeledTree, k: usize) -> Result<LabeledTree, LiftError> {
    let top = tree.find(tree.max_label()).expect("max label present");
    let path = tree.path_to(top);
    let mut drift = 0;
    let mut moved = None;
    for &v in &path {
        if let Some((_, slot)) = tree.node(v).parent() {
            drift += slot;
        }
        if drift == k {
            moved = Some(v);
        }
    }
    let moved = moved.ok_or(LiftError::NotInImage)?;
    if moved == tree.root() {
        return Err(LiftError::NotInImage);
    }
    let mut whole = tree.to_subtree();
    let mut piece = whole.take_at(&tree.slot_path(moved)).expect("path exists");
    let lowered = match tree.node(moved).children()[0] {
        Child::Node(_) => {
            whole.replace_leftmost_leaf(piece);
            whole
        }
        Child::Leaf => {
            *piece.at_path_mut(&[0]).expect("slot 0 exists") = whole;
            piece
        }
    };
    Ok(LabeledTree::from_subtree(tree.m(), &lowered)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsys::{family, Family};
    use crate::tree::fixtures::{fig1, fig2};

    fn set(xs: &[i64]) -> OffsetSet {
        OffsetSet::new(xs.iter().copied())
    }

    fn labels_of(tree: &LabeledTree, ids: &[NodeId]) -> Vec<Label> {
        ids.iter().map(|&v| tree.label(v)).collect()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn shape_counts_are_fuss_catalan() {
        assert_eq!(enumerate_shapes(1, 3).count(), 5);
        assert_eq!(enumerate_shapes(2, 2).count(), 3);
        assert_eq!(enumerate_shapes(1, 0).count(), 1);
        assert_eq!(enumerate_shapes(1, 0).next().unwrap().to_string(), "*");
        for m in 0..=3u64 {
            for n in 0..=6u64 {
                let expect = binom((m + 1) * n, n) / (m * n + 1);
                assert_eq!(
                    enumerate_shapes(m as usize, n as usize).count() as u64,
                    expect,
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn shapes_are_distinct_and_sorted() {
        let names: Vec<String> = enumerate_shapes(2, 4).map(|s| s.to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
    }

    #[test]
    fn condition_s_examples() {
        assert!(satisfies_condition_s(&fig1(), &set(&[0, 1])).unwrap());
        let t = LabeledTree::parse("(1:(2:*,*),*)").unwrap();
        assert!(!satisfies_condition_s(&t, &set(&[1])).unwrap());
        assert!(satisfies_condition_s(&t, &set(&[-1, 0, 1])).unwrap());
        assert_eq!(
            satisfies_condition_s(&t, &set(&[0])),
            Err(EnumError::ArityMismatch {
                tree: 2,
                expected: 1
            })
        );
    }

    #[test]
    fn catalan_accepts_every_tree() {
        let s = family(Family::Catalan, 2).unwrap();
        for shape in enumerate_shapes(2, 3) {
            let t = shape.label(&[3, 1, 2]).unwrap();
            assert!(satisfies_condition_s(&t, &s).unwrap());
        }
    }

    #[test]
    fn tree_counts() {
        assert_eq!(enumerate_trees(&set(&[0, 1]), 3).unwrap().len(), 16);
        assert_eq!(enumerate_trees(&set(&[0]), 3).unwrap().len(), 6);
        assert_eq!(enumerate_trees(&set(&[-1, 0, 1]), 3).unwrap().len(), 30);
        assert_eq!(enumerate_trees(&set(&[1]), 3).unwrap().len(), 7);
        assert_eq!(enumerate_trees(&OffsetSet::empty(), 4).unwrap().len(), 1);
        assert_eq!(
            count_trees(&set(&[0, 1]), 4).unwrap(),
            BigUint::from(125u32)
        );
    }

    #[test]
    fn shi_minus_linial_has_nine_trees() {
        let shi: BTreeSet<String> = enumerate_trees(&set(&[0, 1]), 3)
            .unwrap()
            .iter()
            .map(|t| t.serialize())
            .collect();
        let linial: BTreeSet<String> = enumerate_trees(&set(&[1]), 3)
            .unwrap()
            .iter()
            .map(|t| t.serialize())
            .collect();
        assert!(linial.is_subset(&shi));
        assert_eq!(shi.difference(&linial).count(), 9);
    }

    #[test]
    fn enumeration_matches_filtering_all_labelings() {
        for s in [
            set(&[0, 1]),
            set(&[1]),
            set(&[-1, 1]),
            set(&[0, 2]),
            set(&[-2, 2]),
        ] {
            for n in 1..=4 {
                let mut brute = BTreeSet::new();
                for shape in enumerate_shapes(s.m(), n) {
                    for perm in permutations(n) {
                        let t = shape.label(&perm).unwrap();
                        if satisfies_condition_s(&t, &s).unwrap() {
                            brute.insert(t.serialize());
                        }
                    }
                }
                let fast: Vec<String> = enumerate_trees(&s, n)
                    .unwrap()
                    .iter()
                    .map(|t| t.serialize())
                    .collect();
                let brute: Vec<String> = brute.into_iter().collect();
                assert_eq!(fast, brute, "S={s} n={n}");
            }
        }
    }

    fn permutations(n: usize) -> Vec<Vec<Label>> {
        let mut out = Vec::new();
        let mut cur: Vec<Label> = (1..=n as Label).collect();
        heap(n, &mut cur, &mut out);
        out
    }

    fn heap(k: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            cur.swap(j, k - 1);
        }
    }

    #[test]
    fn labeled_over_arbitrary_label_set() {
        let v: BTreeSet<Label> = [3, 10, 42].into_iter().collect();
        let trees = enumerate_trees_on(&set(&[0, 1]), &v).unwrap();
        assert_eq!(trees.len(), 16);
        assert!(trees.iter().all(|t| t.labels() == v));
        assert!(enumerate_trees_on(&set(&[0]), &BTreeSet::new()).is_err());
    }

    #[test]
    fn branch_node_examples() {
        let t = fig1();
        assert_eq!(labels_of(&t, &branch_nodes(&t)), vec![4, 3]);
        let t = fig2();
        assert_eq!(labels_of(&t, &branch_nodes(&t)), vec![6, 5]);
        let t = LabeledTree::parse("(1:(2:(3:*,*),*),*)").unwrap();
        assert_eq!(labels_of(&t, &branch_nodes(&t)), vec![3]);
    }

    #[test]
    fn branch_distribution_examples() {
        let d = branch_distribution(&set(&[0, 1]), 3).unwrap();
        assert_eq!(d.row(), vec![9u32.into(), 6u32.into(), 1u32.into()]);
        let d = branch_distribution(&set(&[1]), 3).unwrap();
        assert_eq!(d.row(), vec![3u32.into(), 3u32.into(), 1u32.into()]);
        let d = branch_distribution(&set(&[0]), 3).unwrap();
        assert_eq!(d.row(), vec![2u32.into(), 3u32.into(), 1u32.into()]);
        let d = branch_distribution(&OffsetSet::empty(), 4).unwrap();
        assert_eq!(
            d.row(),
            vec![0u32.into(), 0u32.into(), 0u32.into(), 1u32.into()]
        );
    }

    #[test]
    fn distribution_json_shape() {
        let d = branch_distribution(&set(&[0, 1]), 3).unwrap();
        let json = serde_json::to_string(&d.to_json(&set(&[0, 1]), Statistic::Branches)).unwrap();
        assert_eq!(
            json,
            r#"{"S":[0,1],"n":3,"stat":"branches","counts":{"1":"9","2":"6","3":"1"}}"#
        );
    }

    #[test]
    fn decompose_fig2() {
        let pieces: Vec<String> = decompose_branches(&fig2())
            .iter()
            .map(|t| t.serialize())
            .collect();
        assert_eq!(
            pieces,
            vec![
                "(6:*,(3:*,*,*),(2:*,(7:*,*,*),*))".to_string(),
                "(4:(5:*,*,(8:*,*,*)),(1:*,*,*),*)".to_string(),
            ]
        );
    }

    #[test]
    fn decompose_single_branch_is_identity() {
        let t = LabeledTree::parse("(2:(1:(3:*)))").unwrap();
        assert_eq!(decompose_branches(&t), vec![t]);
    }

    #[test]
    fn glue_collection_of_connected_trees() {
        let parts: Vec<LabeledTree> = [
            "(6:*,(3:*,*,*),(2:*,*,*))",
            "(4:(5:*,*,(8:*,*,*)),(1:*,*,*),*)",
            "(7:*,*,*)",
        ]
        .iter()
        .map(|s| LabeledTree::parse(s).unwrap())
        .collect();
        let glued = glue_branches(&parts).unwrap();
        assert_eq!(
            glued.serialize(),
            "(7:(6:(4:(5:*,*,(8:*,*,*)),(1:*,*,*),*),(3:*,*,*),(2:*,*,*)),*,*)"
        );
        let mut reversed = parts.clone();
        reversed.reverse();
        assert_eq!(glue_branches(&reversed).unwrap(), glued);
        assert_eq!(compartments(&glued), 1);
    }

    #[test]
    fn glue_errors() {
        let a = LabeledTree::parse("(2:*,*)").unwrap();
        let b = LabeledTree::parse("(2:*,*)").unwrap();
        assert_eq!(
            glue_branches(&[a.clone(), b]),
            Err(GlueError::OverlappingLabels(2))
        );
        let two = LabeledTree::parse("(2:(1:*,*),*)").unwrap();
        assert!(matches!(
            glue_branches(&[two]),
            Err(GlueError::NotConnected { .. })
        ));
        let c = LabeledTree::parse("(3:*,*,*)").unwrap();
        assert!(matches!(
            glue_branches(&[a.clone(), c]),
            Err(GlueError::ArityMismatch { .. })
        ));
        assert_eq!(glue_branches(&[]), Err(GlueError::Empty));
        assert_eq!(glue_branches(std::slice::from_ref(&a)).unwrap(), a);
    }

    #[test]
    fn compartment_examples() {
        assert_eq!(compartments(&fig1()), 2);
        assert_eq!(compartments(&LabeledTree::parse("(1:*,*)").unwrap()), 1);
    }

    #[test]
    fn lift_largest_label_off_first_twig() {
        let t =
            LabeledTree::parse("(7:(6:(4:(5:*,*,(2:*,*,*)),(8:*,*,*),*),(3:*,*,*),(1:*,*,*)),*,*)")
                .unwrap();
        let s = family(Family::Catalan, 2).unwrap();
        let lifted = lift_disconnected(&t, &s, 1).unwrap();
        assert_eq!(
            lifted.serialize(),
            "(7:(6:*,(3:(4:(5:*,*,(2:*,*,*)),(8:*,*,*),*),*,*),(1:*,*,*)),*,*)"
        );
        assert_eq!(lower_connected(&lifted, 1).unwrap(), t);
    }

    #[test]
    fn lift_largest_label_in_first_twig() {
        let s = family(Family::Catalan, 1).unwrap();
        let lifted = lift_disconnected(&fig1(), &s, 1).unwrap();
        assert_eq!(lifted.serialize(), "(2:(3:*,(4:*,*)),(1:*,*))");
        assert_eq!(lower_connected(&lifted, 1).unwrap(), fig1());
    }

    #[test]
    fn lift_preconditions() {
        let t = fig1();
        assert_eq!(
            lift_disconnected(&t, &set(&[-1, 1]), 1),
            Err(LiftError::ZeroNotInS)
        );
        assert_eq!(
            lift_disconnected(&t, &set(&[0, 1]), 1),
            Err(LiftError::BadOffset(1))
        );
        let connected = LabeledTree::parse("(1:(2:*,*),*)").unwrap();
        assert_eq!(
            lift_disconnected(&connected, &set(&[-1, 0, 1]), 1),
            Err(LiftError::AlreadyConnected)
        );
    }
}
