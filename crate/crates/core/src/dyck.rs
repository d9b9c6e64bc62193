//! Labeled m-Dyck paths: `n` up steps worth `+m`, each carrying a distinct
//! label from `[n]`, and `mn` down steps worth `-1`, with every prefix sum
//! nonnegative.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{greedy_groups, rl_maxima, StatisticDistribution};
use crate::tree::{Label, LabeledTree, Subtree, TreeError};

/// Largest path accepted by [`path_to_tree`]; tree construction recurses.
pub const MAX_TREE_NODES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Up(Label),
    Down,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DyckError {
    #[error("m must be at least 1")]
    ZeroM,
    #[error("a path needs at least one up step")]
    Empty,
    #[error("expected {expected} down steps for {ups} up steps, found {found}")]
    StepCount {
        ups: usize,
        expected: usize,
        found: usize,
    },
    #[error("prefix ending at step {0} goes below zero")]
    Negative(usize),
    #[error("up labels must be exactly 1..={n}; offending label {label}")]
    Labels { n: usize, label: Label },
    #[error("bad token {token:?} at position {pos}")]
    Token { pos: usize, token: String },
    #[error("n field {claimed} disagrees with {actual} up steps")]
    NMismatch { claimed: usize, actual: usize },
    #[error("path has {0} up steps, more than the tree conversion limit")]
    TooLarge(usize),
    #[error("tree arity {0} has no m-Dyck counterpart")]
    TreeArity(usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("invalid path JSON: {0}")]
    Json(String),
}

/// A validated labeled m-Dyck path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledDyckPath {
    m: usize,
    steps: Vec<Step>,
}

impl LabeledDyckPath {
    pub fn new(m: usize, steps: Vec<Step>) -> Result<Self, DyckError> {
        if m == 0 {
            return Err(DyckError::ZeroM);
        }
        let n = steps.iter().filter(|s| matches!(s, Step::Up(_))).count();
        if n == 0 {
            return Err(DyckError::Empty);
        }
        let downs = steps.len() - n;
        if m.checked_mul(n) != Some(downs) {
            return Err(DyckError::StepCount {
                ups: n,
                expected: m.saturating_mul(n),
                found: downs,
            });
        }
        let mut height = 0usize;
        let mut seen = vec![false; n + 1];
        for (i, step) in steps.iter().enumerate() {
            match *step {
                Step::Up(label) => {
                    let idx = label as usize;
                    if label == 0 || idx > n || seen[idx] {
                        return Err(DyckError::Labels { n, label });
                    }
                    seen[idx] = true;
                    height += m;
                }
                Step::Down => {
                    height = height.checked_sub(1).ok_or(DyckError::Negative(i))?;
                }
            }
        }
        Ok(LabeledDyckPath { m, steps })
    }

    /// Parses the text form, e.g. `"+4 +7 +2 - - +6 - -"`.
    pub fn parse(text: &str, m: usize) -> Result<Self, DyckError> {
        let steps = text
            .split_whitespace()
            .enumerate()
            .map(|(pos, tok)| {
                let bad = || DyckError::Token {
                    pos,
                    token: tok.chars().take(32).collect(),
                };
                if tok == "-" {
                    Ok(Step::Down)
                } else if let Some(rest) = tok.strip_prefix('+') {
                    if rest.starts_with('+') {
                        return Err(bad());
                    }
                    rest.parse().map(Step::Up).map_err(|_| bad())
                } else {
                    Err(bad())
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(m, steps)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.steps.len() / (self.m + 1)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Labels of the up steps before the first down step.
    pub fn initial_run(&self) -> Vec<Label> {
        self.steps
            .iter()
            .map_while(|s| match s {
                Step::Up(l) => Some(*l),
                Step::Down => None,
            })
            .collect()
    }

    /// Maximal segments between consecutive visits to height zero.
    pub fn primitive_parts(&self) -> Vec<&[Step]> {
        let mut parts = Vec::new();
        let mut start = 0;
        let mut height = 0usize;
        for (i, step) in self.steps.iter().enumerate() {
            match step {
                Step::Up(_) => height += self.m,
                Step::Down => height -= 1,
            }
            if height == 0 {
                parts.push(&self.steps[start..=i]);
                start = i + 1;
            }
        }
        parts
    }

    /// Compartments: primitive parts grouped left to right, each group
    /// closing at the part holding the largest label not yet grouped.
    pub fn compartments(&self) -> usize {
        let part_max: Vec<Label> = self
            .primitive_parts()
            .iter()
            .map(|part| {
                part.iter()
                    .filter_map(|s| match s {
                        Step::Up(l) => Some(*l),
                        Step::Down => None,
                    })
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        greedy_groups(&part_max)
    }

    /// Right-to-left maxima of the labels before the first down step.
    pub fn rl_maxima(&self) -> usize {
        rl_maxima(self.initial_run().into_iter())
    }

    pub fn to_json(&self) -> PathJson {
        PathJson {
            m: self.m,
            n: self.n(),
            steps: self.steps.clone(),
        }
    }

    pub fn from_json(json: &PathJson) -> Result<Self, DyckError> {
        let path = Self::new(json.m, json.steps.clone())?;
        if path.n() != json.n {
            return Err(DyckError::NMismatch {
                claimed: json.n,
                actual: path.n(),
            });
        }
        Ok(path)
    }

    pub fn from_json_str(text: &str) -> Result<Self, DyckError> {
        let json: PathJson =
            serde_json::from_str(text).map_err(|e| DyckError::Json(e.to_string()))?;
        Self::from_json(&json)
    }
}

impl fmt::Display for LabeledDyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match step {
                Step::Up(l) => write!(f, "+{l}")?,
                Step::Down => f.write_str("-")?,
            }
        }
        Ok(())
    }
}

/// Wire form: `{"m":1,"n":2,"steps":[{"up":2},{"up":1},"down","down"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathJson {
    pub m: usize,
    pub n: usize,
    pub steps: Vec<Step>,
}

/// Which path statistic a distribution tabulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathStatistic {
    Compartments,
    RlMaxima,
}

impl PathStatistic {
    pub fn name(self) -> &'static str {
        match self {
            PathStatistic::Compartments => "compartments",
            PathStatistic::RlMaxima => "rl-maxima",
        }
    }

    pub fn of(self, path: &LabeledDyckPath) -> usize {
        match self {
            PathStatistic::Compartments => path.compartments(),
            PathStatistic::RlMaxima => path.rl_maxima(),
        }
    }
}

impl FromStr for PathStatistic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "compartments" => Ok(PathStatistic::Compartments),
            "rl-maxima" => Ok(PathStatistic::RlMaxima),
            other => Err(format!("unknown path statistic {other:?}")),
        }
    }
}

/// Up/down patterns of m-Dyck words with `n` ups, `true` meaning up.
fn word_shapes(m: usize, n: usize) -> Vec<Vec<bool>> {
    fn go(
        m: usize,
        ups: usize,
        downs: usize,
        height: usize,
        word: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if ups == 0 && downs == 0 {
            out.push(word.clone());
            return;
        }
        if ups > 0 {
            word.push(true);
            go(m, ups - 1, downs, height + m, word, out);
            word.pop();
        }
        if downs > 0 && height > 0 {
            word.push(false);
            go(m, ups, downs - 1, height - 1, word, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    go(m, n, m * n, 0, &mut Vec::new(), &mut out);
    out
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(p: &mut [Label]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn for_each_path(m: usize, n: usize, visit: impl Fn(LabeledDyckPath) + Sync) {
    word_shapes(m, n).par_iter().for_each(|shape| {
        let mut perm: Vec<Label> = (1..=n as Label).collect();
        loop {
            let mut labels = perm.iter();
            let steps = shape
                .iter()
                .map(|&up| {
                    if up {
                        Step::Up(*labels.next().unwrap())
                    } else {
                        Step::Down
                    }
                })
                .collect();
            visit(LabeledDyckPath { m, steps });
            if !next_permutation(&mut perm) {
                break;
            }
        }
    });
}

/// Every labeled m-Dyck path on `[n]`, ordered by text form. Empty when
/// `m` or `n` is zero.
pub fn enumerate_paths(m: usize, n: usize) -> Vec<LabeledDyckPath> {
    if m == 0 || n == 0 {
        return Vec::new();
    }
    let out = std::sync::Mutex::new(Vec::new());
    for_each_path(m, n, |p| out.lock().unwrap().push((p.to_string(), p)));
    let mut keyed = out.into_inner().unwrap();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, p)| p).collect()
}

/// Distribution of a path statistic over all labeled m-Dyck paths on `[n]`.
pub fn path_distribution(m: usize, n: usize, stat: PathStatistic) -> StatisticDistribution {
    if m == 0 || n == 0 {
        return StatisticDistribution::from_counts(n, &[]);
    }
    let counts: Vec<std::sync::atomic::AtomicU64> = (0..=n).map(|_| Default::default()).collect();
    for_each_path(m, n, |p| {
        counts[stat.of(&p)].fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    });
    let raw: Vec<u64> = counts.into_iter().map(|c| c.into_inner()).collect();
    StatisticDistribution::from_counts(n, &raw)
}

/// Encodes a tree as `Up(label)` followed by the words of children
/// `1..=m`, then child `0`; leaves give a down step and the last one is
/// dropped.
pub fn tree_to_path(tree: &LabeledTree) -> Result<LabeledDyckPath, DyckError> {
    if tree.m() == 0 {
        return Err(DyckError::TreeArity(tree.arity()));
    }
    let mut steps = Vec::with_capacity(tree.len() * (tree.m() + 1) + 1);
    let mut stack = vec![Some(tree.root())];
    while let Some(top) = stack.pop() {
        match top {
            None => steps.push(Step::Down),
            Some(id) => {
                let node = tree.node(id);
                steps.push(Step::Up(node.label()));
                let kids = node.children();
                stack.push(kids[0].node());
                stack.extend(kids[1..].iter().rev().map(|c| c.node()));
            }
        }
    }
    steps.pop();
    LabeledDyckPath::new(tree.m(), steps)
}

/// Inverse of [`tree_to_path`].
pub fn path_to_tree(path: &LabeledDyckPath) -> Result<LabeledTree, DyckError> {
    let n = path.n();
    if n > MAX_TREE_NODES {
        return Err(DyckError::TooLarge(n));
    }
    let arity = path.m() + 1;
    let mut frames: Vec<(Label, Vec<Subtree>)> = Vec::new();
    let mut done = None;
    for step in path.steps().iter().chain(std::iter::once(&Step::Down)) {
        let mut item = match *step {
            Step::Up(label) => {
                frames.push((label, Vec::with_capacity(arity)));
                continue;
            }
            Step::Down => Subtree::Leaf,
        };
        loop {
            let Some((label, kids)) = frames.last_mut() else {
                done = Some(item);
                break;
            };
            kids.push(item);
            if kids.len() < arity {
                break;
            }
            let label = *label;
            let mut kids = frames.pop().expect("frame present").1;
            kids.rotate_right(1);
            item = Subtree::node(label, kids);
        }
    }
    // validation guarantees the word closes exactly at the appended step
    let root = done.expect("valid path encodes a tree");
    Ok(LabeledTree::from_subtree(path.m(), &root)?)
}
