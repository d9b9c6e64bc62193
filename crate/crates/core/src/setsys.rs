//! Offset sets `S` defining the deformation `A_S(n)` with hyperplanes
//! `x_i - x_j = s` for `s` in `S`, `i < j`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A finite sorted set of integer offsets together with `m = max |s|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct OffsetSet {
    elements: Vec<i64>,
    m: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("unknown family {0:?} (expected braid, catalan, shi, linial or semiorder)")]
    UnknownFamily(String),
    #[error("family {0} needs m >= 1")]
    BadFamilyParameter(String),
    #[error("cannot parse offset {0:?}")]
    BadOffset(String),
    #[error("offset {0} appears twice")]
    DuplicateOffset(i64),
    #[error("offset {0} is too large")]
    OffsetTooLarge(i64),
}

// Offsets beyond this would make every derived computation infeasible.
const MAX_OFFSET: i64 = 1 << 20;

/// The named families of deformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Braid,
    Catalan,
    Shi,
    Linial,
    Semiorder,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Braid => "braid",
            Family::Catalan => "catalan",
            Family::Shi => "shi",
            Family::Linial => "linial",
            Family::Semiorder => "semiorder",
        }
    }
}

impl FromStr for Family {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "braid" => Ok(Family::Braid),
            "catalan" => Ok(Family::Catalan),
            "shi" => Ok(Family::Shi),
            "linial" => Ok(Family::Linial),
            "semiorder" => Ok(Family::Semiorder),
            other => Err(SetError::UnknownFamily(other.to_string())),
        }
    }
}

impl OffsetSet {
    pub fn new(elements: impl IntoIterator<Item = i64>) -> Self {
        let set: BTreeSet<i64> = elements.into_iter().collect();
        let elements: Vec<i64> = set.into_iter().collect();
        let m = elements.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0) as usize;
        OffsetSet { elements, m }
    }

    pub fn empty() -> Self {
        OffsetSet::new([])
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    /// `max |s|`, or 0 for the empty set.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn contains(&self, s: i64) -> bool {
        self.elements.binary_search(&s).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_subset(&self, other: &OffsetSet) -> bool {
        self.elements.iter().all(|&s| other.contains(s))
    }

    /// Whether this is `{-m, ..., m}` for some `m >= 1`.
    pub fn catalan_m(&self) -> Option<usize> {
        let m = self.m as i64;
        (m >= 1 && self.elements.len() == 2 * self.m + 1 && self.elements[0] == -m)
            .then_some(self.m)
    }

    /// Transitivity: for all integers `s, t` outside `S`,
    /// `st > 0` implies `s + t` is outside `S`, and `s > 0 >= t` implies both
    /// `s - t` and `t - s` are outside `S`.
    ///
    /// Only `s, t` in `[-m, m]` can produce a sum or difference inside
    /// `[-m, m]`, so the scan is finite.
    pub fn is_transitive(&self) -> bool {
        let m = self.m as i64;
        let outside: Vec<i64> = (-m..=m).filter(|&x| !self.contains(x)).collect();
        for &s in &outside {
            for &t in &outside {
                if s * t > 0 && self.contains(s + t) {
                    return false;
                }
                if s > 0 && t <= 0 && (self.contains(s - t) || self.contains(t - s)) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `0` is in `S` and some pair `k, -k` with `k >= 1` is too.
    pub fn has_zero_and_symmetric_pair(&self) -> bool {
        self.contains(0) && self.smallest_symmetric_offset().is_some()
    }

    /// Smallest `k >= 1` with both `k` and `-k` in `S`.
    pub fn smallest_symmetric_offset(&self) -> Option<usize> {
        (1..=self.m as i64)
            .find(|&k| self.contains(k) && self.contains(-k))
            .map(|k| k as usize)
    }

    /// All subsets of this set, as offset sets.
    pub fn subsets(&self) -> Vec<OffsetSet> {
        let n = self.elements.len();
        (0u64..1 << n)
            .map(|mask| {
                OffsetSet::new(
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| self.elements[i]),
                )
            })
            .collect()
    }
}

/// Constructs a named family. `braid` ignores `m`.
pub fn family(kind: Family, m: usize) -> Result<OffsetSet, SetError> {
    if kind == Family::Braid {
        return Ok(OffsetSet::new([0]));
    }
    if m == 0 {
        return Err(SetError::BadFamilyParameter(kind.name().to_string()));
    }
    let m = m as i64;
    let set = match kind {
        Family::Braid => unreachable!(),
        Family::Catalan => OffsetSet::new(-m..=m),
        Family::Shi => OffsetSet::new(-m + 1..=m),
        Family::Linial => OffsetSet::new((-m + 1..=m).filter(|&s| s != 0)),
        Family::Semiorder => OffsetSet::new((-m..=m).filter(|&s| s != 0)),
    };
    Ok(set)
}

/// Parses a set spec: either a comma-separated integer list (`"-1,0,1"`,
/// `""` for the empty set) or a family (`"shi:2"`, `"braid"`).
pub fn parse_set_spec(spec: &str) -> Result<OffsetSet, SetError> {
    let spec = spec.trim();
    if spec.starts_with(|c: char| c.is_ascii_alphabetic()) {
        let (name, param) = match spec.split_once(':') {
            Some((name, param)) => (name, Some(param)),
            None => (spec, None),
        };
        let kind: Family = name.parse()?;
        let m = match param {
            Some(p) => p
                .trim()
                .parse::<usize>()
                .map_err(|_| SetError::BadOffset(p.to_string()))?,
            None if kind == Family::Braid => 0,
            None => return Err(SetError::BadFamilyParameter(kind.name().to_string())),
        };
        if m as i64 > MAX_OFFSET {
            return Err(SetError::OffsetTooLarge(m as i64));
        }
        return family(kind, m);
    }
    let mut seen = BTreeSet::new();
    if !spec.is_empty() {
        for part in spec.split(',') {
            let part = part.trim();
            let s: i64 = part
                .parse()
                .map_err(|_| SetError::BadOffset(part.to_string()))?;
            if s.abs() > MAX_OFFSET {
                return Err(SetError::OffsetTooLarge(s));
            }
            if !seen.insert(s) {
                return Err(SetError::DuplicateOffset(s));
            }
        }
    }
    Ok(OffsetSet::new(seen))
}

impl FromStr for OffsetSet {
    type Err = SetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_set_spec(s)
    }
}

impl fmt::Display for OffsetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl From<OffsetSet> for Vec<i64> {
    fn from(s: OffsetSet) -> Self {
        s.elements
    }
}

impl TryFrom<Vec<i64>> for OffsetSet {
    type Error = SetError;

    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        let mut seen = BTreeSet::new();
        for s in v {
            if s.abs() > MAX_OFFSET {
                return Err(SetError::OffsetTooLarge(s));
            }
            if !seen.insert(s) {
                return Err(SetError::DuplicateOffset(s));
            }
        }
        Ok(OffsetSet::new(seen))
    }
}
