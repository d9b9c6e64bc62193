//! Labeled `(m+1)`-ary rooted plane trees.
//!
//! A [`LabeledTree`] stores its nodes in an arena in preorder, so node `0` is
//! always the root and two trees are structurally equal exactly when their
//! arenas are equal. Leaves are stored explicitly as [`Child::Leaf`] so that
//! the position of every child (and therefore `lsib`) is fixed by the data.
//!
//! Surgery on trees (cutting branches, gluing, moving subtrees) is done on
//! the owned nested form [`Subtree`] and converted back with
//! [`LabeledTree::from_subtree`], which re-validates every invariant.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Node label. Labels are positive.
pub type Label = u32;

/// Index of a node in the preorder arena of a [`LabeledTree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

/// One child slot of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Child {
    Leaf,
    Node(NodeId),
}

impl Child {
    pub fn node(self) -> Option<NodeId> {
        match self {
            Child::Leaf => None,
            Child::Node(id) => Some(id),
        }
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, Child::Leaf)
    }
}

/// Any vertex of a tree: a node, or the leaf sitting in `slot` of `parent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Node(NodeId),
    Leaf { parent: NodeId, slot: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    label: Label,
    children: Vec<Child>,
    parent: Option<(NodeId, usize)>,
}

impl Node {
    pub fn label(&self) -> Label {
        self.label
    }

    pub fn children(&self) -> &[Child] {
        &self.children
    }

    /// Parent node and the slot this node occupies in it.
    pub fn parent(&self) -> Option<(NodeId, usize)> {
        self.parent
    }
}

/// Owned nested form used to build trees and to perform surgery on them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Subtree {
    Leaf,
    Node {
        label: Label,
        children: Vec<Subtree>,
    },
}

impl Subtree {
    pub fn node(label: Label, children: Vec<Subtree>) -> Self {
        Subtree::Node { label, children }
    }

    /// A node whose `m + 1` children are all leaves.
    pub fn bud(label: Label, m: usize) -> Self {
        Subtree::Node {
            label,
            children: vec![Subtree::Leaf; m + 1],
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Subtree::Leaf)
    }

    /// The subtree reached by following `slots` from this one.
    pub fn at_path_mut(&mut self, slots: &[usize]) -> Option<&mut Subtree> {
        let mut cursor = self;
        for &slot in slots {
            match cursor {
                Subtree::Leaf => return None,
                Subtree::Node { children, .. } => cursor = children.get_mut(slot)?,
            }
        }
        Some(cursor)
    }

    /// Swaps the subtree at `slots` for a leaf and returns it.
    pub fn take_at(&mut self, slots: &[usize]) -> Option<Subtree> {
        self.at_path_mut(slots)
            .map(|s| std::mem::replace(s, Subtree::Leaf))
    }

    /// Replaces the leftmost leaf (found by following first children) with
    /// `replacement`.
    pub fn replace_leftmost_leaf(&mut self, replacement: Subtree) {
        let mut cursor = self;
        loop {
            match cursor {
                Subtree::Leaf => {
                    *cursor = replacement;
                    return;
                }
                Subtree::Node { children, .. } => cursor = &mut children[0],
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("a labeled tree needs at least one node")]
    Empty,
    #[error("node {label} has {found} children, expected {expected}")]
    Arity {
        label: Label,
        expected: usize,
        found: usize,
    },
    #[error("label {0} occurs more than once")]
    DuplicateLabel(Label),
    #[error("labels must be positive")]
    ZeroLabel,
    #[error("the root has no siblings")]
    RootHasNoSiblings,
    #[error("no node labeled {0}")]
    UnknownLabel(Label),
    #[error("vertex does not belong to this tree")]
    UnknownVertex,
    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: &'static str },
    #[error("node {label} has {found} children, expected {expected}")]
    Arity {
        label: Label,
        expected: usize,
        found: usize,
    },
    #[error("label {0} occurs more than once")]
    DuplicateLabel(Label),
    #[error("labels must be positive")]
    ZeroLabel,
}

impl ParseError {
    /// Stable machine-readable code for each failure class.
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "syntax",
            ParseError::Arity { .. } => "arity",
            ParseError::DuplicateLabel(_) => "duplicate-label",
            ParseError::ZeroLabel => "zero-label",
        }
    }
}

impl From<TreeError> for ParseError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::Arity {
                label,
                expected,
                found,
            } => ParseError::Arity {
                label,
                expected,
                found,
            },
            TreeError::DuplicateLabel(l) => ParseError::DuplicateLabel(l),
            TreeError::ZeroLabel => ParseError::ZeroLabel,
            _ => ParseError::Syntax {
                pos: 0,
                msg: "empty tree",
            },
        }
    }
}

/// A labeled `(m+1)`-ary rooted plane tree with at least one node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    m: usize,
    nodes: Vec<Node>,
}

impl LabeledTree {
    /// Builds a tree from its nested form, checking arity and label
    /// distinctness. Nodes end up in preorder.
    pub fn from_subtree(m: usize, subtree: &Subtree) -> Result<Self, TreeError> {
        if subtree.is_leaf() {
            return Err(TreeError::Empty);
        }
        let mut nodes = Vec::new();
        let mut seen = BTreeSet::new();
        Self::push_subtree(m, subtree, None, &mut nodes, &mut seen)?;
        Ok(LabeledTree { m, nodes })
    }

    fn push_subtree(
        m: usize,
        subtree: &Subtree,
        parent: Option<(NodeId, usize)>,
        nodes: &mut Vec<Node>,
        seen: &mut BTreeSet<Label>,
    ) -> Result<Child, TreeError> {
        let (label, children) = match subtree {
            Subtree::Leaf => return Ok(Child::Leaf),
            Subtree::Node { label, children } => (*label, children),
        };
        if label == 0 {
            return Err(TreeError::ZeroLabel);
        }
        if children.len() != m + 1 {
            return Err(TreeError::Arity {
                label,
                expected: m + 1,
                found: children.len(),
            });
        }
        if !seen.insert(label) {
            return Err(TreeError::DuplicateLabel(label));
        }
        let id = NodeId(nodes.len());
        nodes.push(Node {
            label,
            children: Vec::with_capacity(m + 1),
            parent,
        });
        for (slot, child) in children.iter().enumerate() {
            let c = Self::push_subtree(m, child, Some((id, slot)), nodes, seen)?;
            nodes[id.0].children.push(c);
        }
        Ok(Child::Node(id))
    }

    /// Builds a tree straight from preorder arrays. `children[v]` lists the
    /// preorder index of each node child, `None` for a leaf. Callers
    /// guarantee the arrays describe a valid preorder tree with distinct
    /// positive labels.
    pub(crate) fn from_preorder_unchecked(
        m: usize,
        labels: &[Label],
        children: &[Vec<Option<usize>>],
    ) -> Self {
        let mut nodes: Vec<Node> = labels
            .iter()
            .zip(children)
            .map(|(&label, kids)| Node {
                label,
                children: kids
                    .iter()
                    .map(|k| k.map_or(Child::Leaf, |c| Child::Node(NodeId(c))))
                    .collect(),
                parent: None,
            })
            .collect();
        for (v, kids) in children.iter().enumerate() {
            for (slot, k) in kids.iter().enumerate() {
                if let Some(c) = k {
                    nodes[*c].parent = Some((NodeId(v), slot));
                }
            }
        }
        LabeledTree { m, nodes }
    }

    /// Child slots leading from the root to `id`.
    pub fn slot_path(&self, id: NodeId) -> Vec<usize> {
        let mut slots = Vec::new();
        let mut cursor = id;
        while let Some((parent, slot)) = self.nodes[cursor.0].parent {
            slots.push(slot);
            cursor = parent;
        }
        slots.reverse();
        slots
    }

    pub fn to_subtree(&self) -> Subtree {
        self.subtree_at(self.root())
    }

    /// Nested copy of the subtree rooted at `id`.
    pub fn subtree_at(&self, id: NodeId) -> Subtree {
        let node = &self.nodes[id.0];
        Subtree::Node {
            label: node.label,
            children: node
                .children
                .iter()
                .map(|c| match c {
                    Child::Leaf => Subtree::Leaf,
                    Child::Node(child) => self.subtree_at(*child),
                })
                .collect(),
        }
    }

    /// `m`, so that every node has `m + 1` children.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn arity(&self) -> usize {
        self.m + 1
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    pub fn label(&self, id: NodeId) -> Label {
        self.nodes[id.0].label
    }

    pub fn find(&self, label: Label) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.label == label).map(NodeId)
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.nodes.iter().map(|n| n.label).collect()
    }

    pub fn max_label(&self) -> Label {
        self.nodes.iter().map(|n| n.label).max().unwrap_or(0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .flat_map(|n| n.children.iter())
            .filter(|c| c.is_leaf())
            .count()
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), TreeError> {
        let ok = match v {
            Vertex::Node(id) => id.0 < self.nodes.len(),
            Vertex::Leaf { parent, slot } => {
                parent.0 < self.nodes.len()
                    && self.nodes[parent.0]
                        .children
                        .get(slot)
                        .is_some_and(|c| c.is_leaf())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(TreeError::UnknownVertex)
        }
    }

    /// Number of left siblings of a non-root vertex.
    pub fn lsib(&self, v: Vertex) -> Result<usize, TreeError> {
        self.check_vertex(v)?;
        match v {
            Vertex::Node(id) => self.nodes[id.0]
                .parent
                .map(|(_, slot)| slot)
                .ok_or(TreeError::RootHasNoSiblings),
            Vertex::Leaf { slot, .. } => Ok(slot),
        }
    }

    /// Rightmost child of `id` that is a node.
    pub fn cadet(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.0]
            .children
            .iter()
            .rev()
            .find_map(|c| c.node())
    }

    /// Root-to-leftmost-leaf path, as nodes `v_1, ..., v_k`.
    pub fn trunk(&self) -> Vec<NodeId> {
        let mut trunk = vec![self.root()];
        let mut cursor = self.root();
        while let Child::Node(next) = self.nodes[cursor.0].children[0] {
            trunk.push(next);
            cursor = next;
        }
        trunk
    }

    pub fn trunk_labels(&self) -> Vec<Label> {
        self.trunk().into_iter().map(|id| self.label(id)).collect()
    }

    /// Splits the nodes into one twig per trunk node: the trunk node together
    /// with everything hanging off its non-leftmost children.
    pub fn twigs(&self) -> Vec<Twig> {
        self.trunk()
            .into_iter()
            .map(|v| {
                let mut nodes = vec![v];
                for child in &self.nodes[v.0].children[1..] {
                    if let Child::Node(c) = child {
                        self.collect_descendants(*c, &mut nodes);
                    }
                }
                Twig {
                    trunk_node: v,
                    nodes,
                }
            })
            .collect()
    }

    fn collect_descendants(&self, id: NodeId, out: &mut Vec<NodeId>) {
        out.push(id);
        for child in &self.nodes[id.0].children {
            if let Child::Node(c) = child {
                self.collect_descendants(*c, out);
            }
        }
    }

    /// Sum of `lsib` along the path from the root to `v`.
    pub fn drift(&self, v: Vertex) -> Result<usize, TreeError> {
        self.check_vertex(v)?;
        let (mut total, mut cursor) = match v {
            Vertex::Node(id) => (0, id),
            Vertex::Leaf { parent, slot } => (slot, parent),
        };
        while let Some((parent, slot)) = self.nodes[cursor.0].parent {
            total += slot;
            cursor = parent;
        }
        Ok(total)
    }

    /// Nodes from the root down to `id`, inclusive.
    pub fn path_to(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = vec![id];
        let mut cursor = id;
        while let Some((parent, _)) = self.nodes[cursor.0].parent {
            path.push(parent);
            cursor = parent;
        }
        path.reverse();
        path
    }

    /// Canonical text form, e.g. `(2:(1:*,*),*)`.
    pub fn serialize(&self) -> String {
        self.to_string()
    }

    /// Parses the canonical text form; `m` is taken from the root's arity.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let subtree = parse_subtree(text)?;
        let m = match &subtree {
            Subtree::Node { children, .. } if !children.is_empty() => children.len() - 1,
            Subtree::Node { label, .. } => {
                return Err(ParseError::Arity {
                    label: *label,
                    expected: 1,
                    found: 0,
                })
            }
            Subtree::Leaf => {
                return Err(ParseError::Syntax {
                    pos: 0,
                    msg: "expected a node, found a bare leaf",
                })
            }
        };
        Ok(Self::from_subtree(m, &subtree)?)
    }

    /// Parses the canonical text form and requires every node to have
    /// `m + 1` children.
    pub fn parse_with_m(text: &str, m: usize) -> Result<Self, ParseError> {
        let subtree = parse_subtree(text)?;
        if subtree.is_leaf() {
            return Err(ParseError::Syntax {
                pos: 0,
                msg: "expected a node, found a bare leaf",
            });
        }
        Ok(Self::from_subtree(m, &subtree)?)
    }

    /// Rewrites labels through `f`, which must be injective on the label set.
    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Result<Self, TreeError> {
        let mut nodes = self.nodes.clone();
        let mut seen = BTreeSet::new();
        for node in &mut nodes {
            node.label = f(node.label);
            if node.label == 0 {
                return Err(TreeError::ZeroLabel);
            }
            if !seen.insert(node.label) {
                return Err(TreeError::DuplicateLabel(node.label));
            }
        }
        Ok(LabeledTree { m: self.m, nodes })
    }
}

/// The nodes of one twig; `nodes[0]` is the trunk node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twig {
    pub trunk_node: NodeId,
    pub nodes: Vec<NodeId>,
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(self, self.root(), f)
    }
}

fn write_node(tree: &LabeledTree, id: NodeId, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let node = tree.node(id);
    write!(f, "({}:", node.label)?;
    for (i, child) in node.children.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        match child {
            Child::Leaf => f.write_str("*")?,
            Child::Node(c) => write_node(tree, *c, f)?,
        }
    }
    f.write_str(")")
}

impl fmt::Display for Subtree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subtree::Leaf => f.write_str("*"),
            Subtree::Node { label, children } => {
                write!(f, "({label}:")?;
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{child}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl std::str::FromStr for LabeledTree {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LabeledTree::parse(s)
    }
}

// Nesting deeper than this is rejected rather than risking the stack.
const MAX_DEPTH: usize = 4096;

/// Parses the nested text form without checking arity or labels.
pub fn parse_subtree(text: &str) -> Result<Subtree, ParseError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    parser.skip_ws();
    let tree = parser.subtree(0)?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(tree)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &'static str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8, msg: &'static str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(msg))
        }
    }

    fn subtree(&mut self, depth: usize) -> Result<Subtree, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.err("nesting too deep"));
        }
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'*') => {
                self.pos += 1;
                Ok(Subtree::Leaf)
            }
            Some(b'(') => {
                self.pos += 1;
                let label = self.label()?;
                self.expect(b':', "expected ':' after label")?;
                let mut children = vec![self.subtree(depth + 1)?];
                loop {
                    self.skip_ws();
                    match self.bytes.get(self.pos) {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.subtree(depth + 1)?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Subtree::Node { label, children });
                        }
                        _ => return Err(self.err("expected ',' or ')'")),
                    }
                }
            }
            _ => Err(self.err("expected '(' or '*'")),
        }
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a label"));
        }
        // digits only, so this is valid UTF-8
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
        let label: Label = digits.parse().map_err(|_| ParseError::Syntax {
            pos: start,
            msg: "label out of range",
        })?;
        if label == 0 {
            return Err(ParseError::ZeroLabel);
        }
        Ok(label)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The binary tree with trunk 4, 2, 3.
    pub fn fig1() -> LabeledTree {
        LabeledTree::parse("(4:(2:(3:*,*),(1:*,*)),*)").unwrap()
    }

    /// The ternary tree with trunk 6, 4, 5.
    pub fn fig2() -> LabeledTree {
        LabeledTree::parse("(6:(4:(5:*,*,(8:*,*,*)),(1:*,*,*),*),(3:*,*,*),(2:*,(7:*,*,*),*))")
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn id(t: &LabeledTree, l: Label) -> NodeId {
        t.find(l).unwrap()
    }

    #[test]
    fn lsib_on_fig1() {
        let t = fig1();
        assert_eq!(t.lsib(Vertex::Node(id(&t, 1))).unwrap(), 1);
        assert_eq!(t.lsib(Vertex::Node(id(&t, 2))).unwrap(), 0);
        assert_eq!(t.lsib(Vertex::Node(id(&t, 3))).unwrap(), 0);
        let root_leaf = Vertex::Leaf {
            parent: id(&t, 4),
            slot: 1,
        };
        assert_eq!(t.lsib(root_leaf).unwrap(), 1);
        assert_eq!(
            t.lsib(Vertex::Node(t.root())),
            Err(TreeError::RootHasNoSiblings)
        );
    }

    #[test]
    fn lsib_rejects_foreign_vertices() {
        let t = fig1();
        let bogus = Vertex::Leaf {
            parent: id(&t, 4),
            slot: 0,
        };
        assert_eq!(t.lsib(bogus), Err(TreeError::UnknownVertex));
    }

    #[test]
    fn cadet_on_fig1() {
        let t = fig1();
        assert_eq!(t.cadet(id(&t, 4)), Some(id(&t, 2)));
        assert_eq!(t.cadet(id(&t, 2)), Some(id(&t, 1)));
        assert_eq!(t.cadet(id(&t, 3)), None);
    }

    #[test]
    fn trunk_examples() {
        assert_eq!(fig1().trunk_labels(), vec![4, 2, 3]);
        assert_eq!(fig2().trunk_labels(), vec![6, 4, 5]);
        let single = LabeledTree::parse("(1:*,*,*)").unwrap();
        assert_eq!(single.trunk_labels(), vec![1]);
    }

    #[test]
    fn twigs_of_fig2() {
        let t = fig2();
        let twigs: Vec<BTreeSet<Label>> = t
            .twigs()
            .iter()
            .map(|tw| tw.nodes.iter().map(|&n| t.label(n)).collect())
            .collect();
        let expect: Vec<BTreeSet<Label>> = vec![
            [6, 3, 2, 7].into_iter().collect(),
            [4, 1].into_iter().collect(),
            [5, 8].into_iter().collect(),
        ];
        assert_eq!(twigs, expect);
    }

    #[test]
    fn drift_examples() {
        let t = fig1();
        assert_eq!(t.drift(Vertex::Node(t.root())).unwrap(), 0);
        assert_eq!(t.drift(Vertex::Node(id(&t, 2))).unwrap(), 0);
        assert_eq!(t.drift(Vertex::Node(id(&t, 1))).unwrap(), 1);
        // second child of the root's second child
        let t = LabeledTree::parse("(1:*,(2:*,(3:*,*)))").unwrap();
        assert_eq!(t.drift(Vertex::Node(id(&t, 3))).unwrap(), 2);
        let leaf = Vertex::Leaf {
            parent: id(&t, 3),
            slot: 1,
        };
        assert_eq!(t.drift(leaf).unwrap(), 3);
    }

    #[test]
    fn serialize_examples() {
        let t = LabeledTree::from_subtree(1, &Subtree::bud(1, 1)).unwrap();
        assert_eq!(t.serialize(), "(1:*,*)");
        assert_eq!(
            LabeledTree::parse("(1:*,*)").unwrap().serialize(),
            "(1:*,*)"
        );
        assert_eq!(
            LabeledTree::parse(" ( 1 : * , * ) ").unwrap().serialize(),
            "(1:*,*)"
        );
    }

    #[test]
    fn parse_errors_have_distinct_codes() {
        let arity = LabeledTree::parse_with_m("(1:*)", 1).unwrap_err();
        assert_eq!(arity.code(), "arity");
        let inner = LabeledTree::parse("(1:(2:*),*)").unwrap_err();
        assert_eq!(inner.code(), "arity");
        let dup = LabeledTree::parse("(1:(1:*,*),*)").unwrap_err();
        assert_eq!(dup, ParseError::DuplicateLabel(1));
        assert_eq!(
            LabeledTree::parse("(0:*,*)").unwrap_err().code(),
            "zero-label"
        );
        for bad in [
            "",
            "*",
            "(1*,*)",
            "(1:*,*",
            "(1:*,*))",
            "(x:*,*)",
            "(99999999999:*)",
        ] {
            assert_eq!(
                LabeledTree::parse(bad).unwrap_err().code(),
                "syntax",
                "{bad}"
            );
        }
    }

    #[test]
    fn m_zero_paths() {
        let t = LabeledTree::parse("(3:(1:(2:*)))").unwrap();
        assert_eq!(t.m(), 0);
        assert_eq!(t.trunk_labels(), vec![3, 1, 2]);
        assert_eq!(t.leaf_count(), 1);
        assert_eq!(t.cadet(t.root()), t.find(1));
    }

    #[test]
    fn leftmost_leaf_replacement() {
        let mut s = fig1().to_subtree();
        s.replace_leftmost_leaf(Subtree::bud(9, 1));
        assert_eq!(s.to_string(), "(4:(2:(3:(9:*,*),*),(1:*,*)),*)");
    }

    #[test]
    fn relabel_checks_injectivity() {
        let t = fig1();
        assert_eq!(
            t.relabel(|l| l + 10).unwrap().serialize(),
            "(14:(12:(13:*,*),(11:*,*)),*)"
        );
        assert!(t.relabel(|_| 5).is_err());
    }
}
