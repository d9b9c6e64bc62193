//! Coefficients of the extended Catalan arrangement `S = {-m..m}`, where
//! `T_S(n)` is every labeled `(m+1)`-ary tree, plus triangles of
//! coefficients for arbitrary transitive `S` and the inequalities they obey.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{branch_distribution, EnumError};
use crate::setsys::OffsetSet;

/// Rows `n = 1..=7` of the `m = 1` triangle (OEIS A038455) as CSV.
pub const A038455_CSV: &str = include_str!("../fixtures/a038455.csv");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalanError {
    #[error("{what} is outside its domain: {detail}")]
    Domain { what: &'static str, detail: String },
    #[error("inexact division {num} / {den} in {what}")]
    Inexact {
        what: &'static str,
        num: String,
        den: String,
    },
    #[error("alternating sum for C({m},{n},{j}) came out negative")]
    Negative { m: usize, n: usize, j: usize },
    #[error("bad triangle CSV at line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error(transparent)]
    Enum(#[from] EnumError),
}

fn domain(what: &'static str, detail: String) -> CatalanError {
    CatalanError::Domain { what, detail }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    // each prefix product is itself a binomial coefficient, so division is exact
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn exact_div(what: &'static str, num: BigUint, den: BigUint) -> Result<BigUint, CatalanError> {
    let (q, r) = num.div_rem(&den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(CatalanError::Inexact {
            what,
            num: num.to_string(),
            den: den.to_string(),
        })
    }
}

/// Unsigned Stirling number of the first kind `c(k, j)`: permutations of
/// `[k]` with `j` right-to-left maxima (equivalently, `j` cycles).
pub fn stirling_first(k: usize, j: usize) -> BigUint {
    stirling_first_row(k).get(j).cloned().unwrap_or_default()
}

/// `c(k, 0..=k)`.
pub fn stirling_first_row(k: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for i in 1..=k {
        let mut next = vec![BigUint::zero(); i + 1];
        for (j, c) in row.iter().enumerate() {
            next[j + 1] += c;
            next[j] += c * (i - 1);
        }
        row = next;
    }
    row
}

/// Stirling number of the second kind `S(i, k)`: partitions of `[i]` into
/// `k` blocks.
pub fn stirling_second(i: usize, k: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for step in 1..=i {
        let mut next = vec![BigUint::zero(); step + 1];
        for (b, s) in row.iter().enumerate() {
            next[b + 1] += s;
            next[b] += s * b;
        }
        row = next;
    }
    row.get(k).cloned().unwrap_or_default()
}

fn check_mnk(what: &'static str, m: usize, n: usize, k: usize) -> Result<(), CatalanError> {
    if m == 0 || k == 0 || k > n {
        Err(domain(
            what,
            format!("m={m}, n={n}, k={k}; need m >= 1 and 1 <= k <= n"),
        ))
    } else {
        Ok(())
    }
}

/// `T_m(n, k)`: unlabeled `(m+1)`-ary shapes with `n` nodes, `k` of them on
/// the trunk, `= mk / ((m+1)n - k) * binom((m+1)n - k, n - k)`.
pub fn trunk_shape_count(m: usize, n: usize, k: usize) -> Result<BigUint, CatalanError> {
    check_mnk("T_m(n,k)", m, n, k)?;
    let top = (m + 1) * n - k;
    exact_div(
        "T_m(n,k)",
        BigUint::from(m * k) * binomial(top, n - k),
        BigUint::from(top),
    )
}

/// `B_m(n, k) = (n-1)!/(k-1)! * binom((m+1)n, n-k)`: ways to split `[n]` into
/// `k` blocks and put an `(m+1)`-ary tree on each block.
pub fn forest_count(m: usize, n: usize, k: usize) -> Result<BigUint, CatalanError> {
    check_mnk("B_m(n,k)", m, n, k)?;
    let ratio = exact_div("B_m(n,k)", factorial(n - 1), factorial(k - 1))?;
    Ok(ratio * binomial((m + 1) * n, n - k))
}

/// `C(m, n, j)` summed over trunk lengths:
/// `sum_{k=j}^{n} T_m(n,k) binom(n,k) c(k,j) (n-k)!`.
pub fn catalan_coeff_by_trunks(m: usize, n: usize, j: usize) -> Result<BigUint, CatalanError> {
    check_mnk("C(m,n,j)", m, n, j)?;
    let mut total = BigUint::zero();
    for k in j..=n {
        total +=
            trunk_shape_count(m, n, k)? * binomial(n, k) * stirling_first(k, j) * factorial(n - k);
    }
    Ok(total)
}

/// `C(m, n, j)` by inversion: `sum_{k=j}^{n} (-1)^(k-j) B_m(n,k) c(k,j)`.
pub fn catalan_coeff_by_inversion(m: usize, n: usize, j: usize) -> Result<BigUint, CatalanError> {
    check_mnk("C(m,n,j)", m, n, j)?;
    let mut total = BigInt::zero();
    for k in j..=n {
        let term = BigInt::from(forest_count(m, n, k)? * stirling_first(k, j));
        if (k - j).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    if total.is_negative() {
        return Err(CatalanError::Negative { m, n, j });
    }
    Ok(total.magnitude().clone())
}

/// `C^(m)(n) = n!/(mn+1) binom((m+1)n, n)`, the number of labeled
/// `(m+1)`-ary trees on `n` nodes.
pub fn total_trees(m: usize, n: usize) -> Result<BigUint, CatalanError> {
    if m == 0 || n == 0 {
        return Err(domain("C^(m)(n)", format!("m={m}, n={n}; need m, n >= 1")));
    }
    exact_div(
        "C^(m)(n)",
        factorial(n) * binomial((m + 1) * n, n),
        BigUint::from(m * n + 1),
    )
}

/// Rows `n = 1..=n_max` of coefficient counts, `rows[n-1][j-1] = C(n, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub family: String,
    pub rows: Vec<Vec<BigUint>>,
}

impl Triangle {
    /// Extended Catalan triangle from the trunk-sum formula.
    pub fn catalan(m: usize, n_max: usize) -> Result<Triangle, CatalanError> {
        let rows = (1..=n_max)
            .map(|n| (1..=n).map(|j| catalan_coeff_by_trunks(m, n, j)).collect())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Triangle {
            family: format!("catalan:{m}"),
            rows,
        })
    }

    /// Triangle of branch counts over `T_S(n)` by exhaustive enumeration.
    pub fn from_branch_counts(s: &OffsetSet, n_max: usize) -> Result<Triangle, CatalanError> {
        let rows = (1..=n_max)
            .map(|n| branch_distribution(s, n).map(|d| d.row()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Triangle {
            family: s.to_string(),
            rows,
        })
    }

    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// `C(n, j)`, zero outside the triangle.
    pub fn get(&self, n: usize, j: usize) -> BigUint {
        if n == 0 || j == 0 {
            return BigUint::zero();
        }
        self.rows
            .get(n - 1)
            .and_then(|r| r.get(j - 1))
            .cloned()
            .unwrap_or_default()
    }

    pub fn row_sum(&self, n: usize) -> BigUint {
        self.rows
            .get(n - 1)
            .map(|r| r.iter().sum())
            .unwrap_or_default()
    }

    /// `n,j,count` CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,j,count\n");
        for (n, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let _ = writeln!(out, "{},{},{}", n + 1, j + 1, c);
            }
        }
        out
    }

    /// Reads the CSV form. Rows must be complete and in order.
    pub fn from_csv(family: &str, text: &str) -> Result<Triangle, CatalanError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, header)) if header.trim() == "n,j,count" => {}
            Some((i, _)) => {
                return Err(CatalanError::Csv {
                    line: i + 1,
                    msg: "expected header n,j,count".to_string(),
                })
            }
            None => {
                return Err(CatalanError::Csv {
                    line: 1,
                    msg: "empty input".to_string(),
                })
            }
        }
        let mut rows: Vec<Vec<BigUint>> = Vec::new();
        for (i, line) in lines {
            let bad = |msg: &str| CatalanError::Csv {
                line: i + 1,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [n, j, count] = fields[..] else {
                return Err(bad("expected three fields"));
            };
            let n: usize = n.parse().map_err(|_| bad("bad n"))?;
            let j: usize = j.parse().map_err(|_| bad("bad j"))?;
            let count: BigUint = count.parse().map_err(|_| bad("bad count"))?;
            if j == 1 {
                if n != rows.len() + 1 {
                    return Err(bad("rows out of order"));
                }
                rows.push(Vec::new());
            }
            let current = rows.len();
            match rows.last_mut() {
                Some(row) if n == current && j == row.len() + 1 && j <= n => row.push(count),
                _ => return Err(bad("cells out of order")),
            }
        }
        if rows.iter().enumerate().any(|(i, r)| r.len() != i + 1) {
            return Err(CatalanError::Csv {
                line: 0,
                msg: "incomplete row".to_string(),
            });
        }
        Ok(Triangle {
            family: family.to_string(),
            rows,
        })
    }

    pub fn to_json(&self) -> TriangleJson {
        TriangleJson {
            family: self.family.clone(),
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| TriangleRowJson {
                    n: i + 1,
                    counts: r.iter().map(|c| c.to_string()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleJson {
    pub family: String,
    pub rows: Vec<TriangleRowJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleRowJson {
    pub n: usize,
    pub counts: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// Cell where an inequality failed, with both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: usize,
    pub j: usize,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub cells_checked: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckOutcome {
    fn skipped(name: &str, why: &str) -> Self {
        CheckOutcome {
            name: name.to_string(),
            status: CheckStatus::Skipped,
            cells_checked: 0,
            counterexamples: Vec::new(),
            note: Some(why.to_string()),
        }
    }
}

struct Tally {
    name: &'static str,
    cells: usize,
    failures: Vec<Counterexample>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cells: 0,
            failures: Vec::new(),
        }
    }

    /// Records whether `lhs <= rhs` at `(n, j)`.
    fn le(&mut self, n: usize, j: usize, lhs: &BigUint, rhs: &BigUint, context: Option<String>) {
        self.cells += 1;
        if lhs > rhs {
            self.failures.push(Counterexample {
                n,
                j,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                context,
            });
        }
    }

    fn eq(&mut self, n: usize, j: usize, lhs: &BigUint, rhs: &BigUint) {
        self.cells += 1;
        if lhs != rhs {
            self.failures.push(Counterexample {
                n,
                j,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                context: None,
            });
        }
    }

    fn finish(self) -> CheckOutcome {
        let status = if self.failures.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckOutcome {
            name: self.name.to_string(),
            status,
            cells_checked: self.cells,
            counterexamples: self.failures,
            note: None,
        }
    }
}

pub const SUBSET_MONOTONE: &str = "subset-monotone";
pub const GROW_N_AND_J: &str = "grow-n-and-j";
pub const GROW_N: &str = "grow-n";
pub const CONNECTED_DOMINATES: &str = "connected-dominates";
pub const DECREASING_IN_J: &str = "decreasing-in-j";
pub const TOTAL_VS_LARGER_M: &str = "catalan-total-vs-larger-m";
pub const TOTAL_VS_LARGER_N: &str = "catalan-total-vs-larger-n";
pub const CONVOLUTION: &str = "convolution-recurrence";

/// Coefficient triangles keyed by offset set, computed on demand.
#[derive(Default)]
pub struct TriangleCache {
    tables: BTreeMap<OffsetSet, Triangle>,
}

impl TriangleCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Triangle for `s` up to `n_max`. Catalan sets use the closed form.
    pub fn get(&mut self, s: &OffsetSet, n_max: usize) -> Result<&Triangle, CatalanError> {
        let stale = self.tables.get(s).is_none_or(|t| t.n_max() < n_max);
        if stale {
            let t = match s.catalan_m() {
                Some(m) => Triangle::catalan(m, n_max)?,
                None => Triangle::from_branch_counts(s, n_max)?,
            };
            self.tables.insert(s.clone(), t);
        }
        Ok(&self.tables[s])
    }
}

/// Checks every coefficient inequality whose hypotheses `S` meets, for
/// `n <= n_max`. Checks whose hypotheses fail are reported as skipped.
pub fn verify_inequalities(s: &OffsetSet, n_max: usize) -> Result<Vec<CheckOutcome>, CatalanError> {
    verify_inequalities_with(s, n_max, &mut TriangleCache::new())
}

pub fn verify_inequalities_with(
    s: &OffsetSet,
    n_max: usize,
    cache: &mut TriangleCache,
) -> Result<Vec<CheckOutcome>, CatalanError> {
    let all = [
        SUBSET_MONOTONE,
        GROW_N_AND_J,
        GROW_N,
        CONNECTED_DOMINATES,
        DECREASING_IN_J,
        TOTAL_VS_LARGER_M,
        TOTAL_VS_LARGER_N,
        CONVOLUTION,
    ];
    if !s.is_transitive() {
        return Ok(all
            .iter()
            .map(|name| CheckOutcome::skipped(name, "S is not transitive"))
            .collect());
    }
    let table = cache.get(s, n_max)?.clone();
    let c = |n: usize, j: usize| table.get(n, j);
    let mut out = Vec::new();

    let mut subset = Tally::new(SUBSET_MONOTONE);
    for sub in s.subsets() {
        if &sub == s || !sub.is_transitive() {
            continue;
        }
        let small = cache.get(&sub, n_max)?.clone();
        for n in 1..=n_max {
            for j in 1..=n {
                subset.le(
                    n,
                    j,
                    &small.get(n, j),
                    &c(n, j),
                    Some(format!("S' = {sub}")),
                );
            }
        }
    }
    out.push(subset.finish());

    let mut grow_nj = Tally::new(GROW_N_AND_J);
    let mut grow_n = Tally::new(GROW_N);
    for n in 1..n_max {
        for j in 1..=n {
            grow_nj.le(n, j, &c(n, j), &c(n + 1, j + 1), None);
            grow_n.le(n, j, &c(n, j), &c(n + 1, j), None);
        }
    }
    out.push(grow_nj.finish());
    out.push(grow_n.finish());

    if s.has_zero_and_symmetric_pair() {
        let mut dominates = Tally::new(CONNECTED_DOMINATES);
        let mut decreasing = Tally::new(DECREASING_IN_J);
        for n in 1..=n_max {
            let rest: BigUint = (2..=n).map(|j| c(n, j)).sum();
            dominates.le(n, 1, &rest, &c(n, 1), None);
            for j in 1..n {
                decreasing.le(n, j, &c(n, j + 1), &c(n, j), None);
            }
        }
        out.push(dominates.finish());
        out.push(decreasing.finish());
    } else {
        let why = "needs 0 in S and k, -k in S for some k >= 1";
        out.push(CheckOutcome::skipped(CONNECTED_DOMINATES, why));
        out.push(CheckOutcome::skipped(DECREASING_IN_J, why));
    }

    if let Some(m) = s.catalan_m() {
        let mut larger_m = Tally::new(TOTAL_VS_LARGER_M);
        let mut larger_n = Tally::new(TOTAL_VS_LARGER_N);
        for n in 1..=n_max {
            let total = total_trees(m, n)?;
            larger_m.le(n, 1, &total, &catalan_coeff_by_trunks(m + 1, n, 1)?, None);
            larger_n.le(n, 1, &total, &catalan_coeff_by_trunks(m, n + 1, 1)?, None);
        }
        out.push(larger_m.finish());
        out.push(larger_n.finish());
    } else {
        out.push(CheckOutcome::skipped(
            TOTAL_VS_LARGER_M,
            "S is not an extended Catalan set",
        ));
        out.push(CheckOutcome::skipped(
            TOTAL_VS_LARGER_N,
            "S is not an extended Catalan set",
        ));
    }

    let mut conv = Tally::new(CONVOLUTION);
    for n in 2..=n_max {
        for j in 2..=n {
            let rhs: BigUint = (1..n)
                .map(|k| binomial(n - 1, k - 1) * c(k, 1) * c(n - k, j - 1))
                .sum();
            conv.eq(n, j, &c(n, j), &rhs);
        }
    }
    out.push(conv.finish());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsys::{family, Family};

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    /// Permutations of `[k]` tallied by right-to-left maxima.
    fn rl_maxima_oracle(k: usize) -> Vec<u64> {
        let mut counts = vec![0u64; k + 1];
        let mut perm: Vec<usize> = (1..=k).collect();
        loop {
            let mut best = 0;
            let mut rl = 0;
            for &x in perm.iter().rev() {
                if x > best {
                    best = x;
                    rl += 1;
                }
            }
            counts[rl] += 1;
            // next lexicographic permutation
            let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
                break;
            };
            let j = (i..perm.len())
                .rev()
                .find(|&j| perm[j] > perm[i - 1])
                .unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        counts
    }

    #[test]
    fn stirling_first_examples() {
        assert_eq!(stirling_first(3, 2), u(3));
        assert_eq!(stirling_first(3, 1), u(2));
        for k in 0..=7 {
            assert_eq!(stirling_first(k, k), u(1));
            let oracle = rl_maxima_oracle(k);
            for (j, &c) in oracle.iter().enumerate().skip(1) {
                assert_eq!(stirling_first(k, j), u(c), "c({k},{j})");
            }
        }
    }

    #[test]
    fn stirling_second_examples() {
        assert_eq!(stirling_second(3, 2), u(3));
        for i in 0..=6 {
            assert_eq!(stirling_second(i, i), u(1));
        }
        assert_eq!(stirling_second(5, 2), u(15));
    }

    #[test]
    fn stirling_orthogonality() {
        for i in 0..=8usize {
            for j in 0..=8usize {
                let mut sum = BigInt::zero();
                for k in 0..=8usize {
                    let term = BigInt::from(stirling_second(i, k) * stirling_first(k, j));
                    if k >= j && (k - j) % 2 == 1 {
                        sum -= term;
                    } else if k >= j {
                        sum += term;
                    }
                }
                let expect = if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                assert_eq!(sum, expect, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn trunk_shape_examples() {
        assert_eq!(trunk_shape_count(1, 3, 1).unwrap(), u(2));
        for m in 1..=3 {
            for n in 1..=5 {
                assert_eq!(trunk_shape_count(m, n, n).unwrap(), u(1));
            }
        }
        let total: BigUint = (1..=3).map(|k| trunk_shape_count(1, 3, k).unwrap()).sum();
        assert_eq!(total, u(5));
        assert!(trunk_shape_count(1, 3, 0).is_err());
        assert!(trunk_shape_count(0, 3, 1).is_err());
    }

    #[test]
    fn trunk_shape_count_matches_shapes() {
        use crate::enumerate::enumerate_shapes;
        for m in 1..=3 {
            for n in 1..=6 {
                let mut by_trunk = vec![0u64; n + 1];
                for shape in enumerate_shapes(m, n) {
                    by_trunk[shape.trunk_len()] += 1;
                }
                for (k, &c) in by_trunk.iter().enumerate().skip(1) {
                    assert_eq!(
                        trunk_shape_count(m, n, k).unwrap(),
                        u(c),
                        "m={m} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn forest_examples() {
        assert_eq!(forest_count(1, 3, 1).unwrap(), u(30));
        assert_eq!(forest_count(1, 3, 2).unwrap(), u(12));
        for m in 1..=3 {
            for n in 1..=5 {
                assert_eq!(forest_count(m, n, n).unwrap(), u(1));
            }
        }
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(catalan_coeff_by_trunks(1, 3, 3).unwrap(), u(1));
        assert_eq!(catalan_coeff_by_trunks(1, 3, 2).unwrap(), u(9));
        assert_eq!(catalan_coeff_by_trunks(1, 3, 1).unwrap(), u(20));
        assert_eq!(catalan_coeff_by_inversion(1, 3, 1).unwrap(), u(20));
        assert_eq!(catalan_coeff_by_inversion(1, 3, 2).unwrap(), u(9));
        for m in 1..=4 {
            for n in 1..=4 {
                assert_eq!(catalan_coeff_by_inversion(m, n, n).unwrap(), u(1));
            }
        }
    }

    #[test]
    fn total_examples() {
        assert_eq!(total_trees(1, 3).unwrap(), u(30));
        assert_eq!(total_trees(1, 1).unwrap(), u(1));
        assert_eq!(total_trees(2, 2).unwrap(), u(6));
        assert_eq!(total_trees(1, 4).unwrap(), u(336));
    }

    #[test]
    fn catalan_triangle_small_rows() {
        let t = Triangle::catalan(1, 3).unwrap();
        assert_eq!(
            t.rows,
            vec![vec![u(1)], vec![u(3), u(1)], vec![u(20), u(9), u(1)]]
        );
        let brute = Triangle::from_branch_counts(&family(Family::Catalan, 1).unwrap(), 3).unwrap();
        assert_eq!(brute.rows, t.rows);
    }

    #[test]
    fn forest_identity() {
        for m in 1..=2 {
            for n in 1..=5 {
                for k in 1..=n {
                    let sum: BigUint = (k..=n)
                        .map(|i| catalan_coeff_by_trunks(m, n, i).unwrap() * stirling_second(i, k))
                        .sum();
                    assert_eq!(forest_count(m, n, k).unwrap(), sum, "m={m} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let t = Triangle::catalan(2, 4).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("n,j,count\n1,1,1\n2,1,"));
        assert_eq!(Triangle::from_csv("catalan:2", &csv).unwrap(), t);
        assert!(Triangle::from_csv("x", "").is_err());
        assert!(Triangle::from_csv("x", "a,b,c\n").is_err());
        assert!(Triangle::from_csv("x", "n,j,count\n1,1,1\n2,2,1\n").is_err());
        assert!(Triangle::from_csv("x", "n,j,count\n1,1,1\n2,1,3\n").is_err());
        assert!(Triangle::from_csv("x", "n,j,count\n1,1,-1\n").is_err());
        assert!(Triangle::from_csv("x", "n,j,count\n2,1,1\n").is_err());
    }

    #[test]
    fn braid_below_shi() {
        let mut cache = TriangleCache::new();
        let braid = cache.get(&OffsetSet::new([0]), 3).unwrap().clone();
        let shi = cache.get(&OffsetSet::new([0, 1]), 3).unwrap().clone();
        for j in 1..=3 {
            assert!(braid.get(3, j) <= shi.get(3, j));
        }
        assert_eq!(braid.rows[2], vec![u(2), u(3), u(1)]);
    }

    #[test]
    fn shi_recurrence_cell() {
        // Shi: C(1,1) = 1, C(2,1) = 2, so C(3,2) = 1*1*2 + 2*2*1
        let t = Triangle::from_branch_counts(&OffsetSet::new([0, 1]), 3).unwrap();
        let rhs: BigUint = (1..3)
            .map(|k| binomial(2, k - 1) * t.get(k, 1) * t.get(3 - k, 1))
            .sum();
        assert_eq!(rhs, u(6));
        assert_eq!(t.get(3, 2), rhs);
    }

    #[test]
    fn inequality_report_gates_hypotheses() {
        let report = verify_inequalities(&OffsetSet::new([0, 1]), 4).unwrap();
        let status = |name: &str| report.iter().find(|c| c.name == name).unwrap().status;
        assert_eq!(status(SUBSET_MONOTONE), CheckStatus::Pass);
        assert_eq!(status(CONNECTED_DOMINATES), CheckStatus::Skipped);
        assert_eq!(status(TOTAL_VS_LARGER_M), CheckStatus::Skipped);
        assert_eq!(status(CONVOLUTION), CheckStatus::Pass);

        let report = verify_inequalities(&family(Family::Catalan, 1).unwrap(), 4).unwrap();
        assert!(
            report.iter().all(|c| c.status == CheckStatus::Pass),
            "{report:?}"
        );

        let report = verify_inequalities(&OffsetSet::new([0, 2]), 3).unwrap();
        assert!(report.iter().all(|c| c.status == CheckStatus::Skipped));
    }
}
