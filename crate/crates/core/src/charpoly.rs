//! Characteristic polynomials of `A_S(n)`, computed two independent ways.
//!
//! * [`chi_ff`] counts points of `(Z/q)^n` off the hyperplanes for several
//!   primes `q` and interpolates. For `q` large enough the count equals
//!   `chi(q)`; the bound `q > (m+1)n` is checked after the fact by testing
//!   one more prime than the interpolation needs.
//! * [`chi_esa`] takes region counts `r_k = |T_S(k)|` from tree enumeration
//!   and extracts `chi` from `(sum (-1)^k r_k x^k / k!)^(-t)`, expanded as
//!   `exp(-t log F(x))` over exact rationals.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{count_trees, EnumError};
use crate::setsys::OffsetSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharPolyError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {q} is too small: need q > {bound}")]
    PrimeTooSmall { q: u64, bound: u64 },
    #[error("interpolation disagreed with the point count at q = {q}; prime bound insufficient")]
    GuardFailed { q: u64 },
    #[error("coefficient of t^{degree} is not an integer")]
    NonIntegral { degree: usize },
    #[error("S = {0} is not transitive, so region counts are not available from trees")]
    NotTransitive(String),
    #[error("coefficient of t^{degree} has the wrong sign for a characteristic polynomial")]
    SignPattern { degree: usize },
    #[error("invalid polynomial: {0}")]
    Invalid(String),
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// Integer polynomial in `t`; `coeffs[i]` is the coefficient of `t^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `t (t - 1) ... (t - n + 1)`.
    pub fn falling_factorial(n: usize) -> Self {
        let mut p = IntPolynomial::from_i64(&[1]);
        for i in 0..n {
            p = p.mul(&IntPolynomial::from_i64(&[-(i as i64), 1]));
        }
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            n: self.degree(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(json: &PolynomialJson) -> Result<Self, CharPolyError> {
        if json.coeffs.len() != json.n + 1 {
            return Err(CharPolyError::Invalid(format!(
                "{} coefficients for degree {}",
                json.coeffs.len(),
                json.n
            )));
        }
        let coeffs = json
            .coeffs
            .iter()
            .map(|c| {
                c.parse::<BigInt>()
                    .map_err(|_| CharPolyError::Invalid(format!("bad coefficient {c:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPolynomial { coeffs })
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            if !mag.is_one() || i == 0 {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Wire form: `{"n":3,"coeffs":["0","9","-6","1"]}`, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub n: usize,
    pub coeffs: Vec<String>,
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` primes strictly greater than `bound`.
pub fn primes_above(bound: u64, count: usize) -> Vec<u64> {
    (bound + 1..).filter(|&q| is_prime(q)).take(count).collect()
}

/// The smallest admissible prime bound for `S` and `n`: primes must exceed it.
pub fn prime_bound(s: &OffsetSet, n: usize) -> u64 {
    ((s.m() + 1) * n) as u64
}

/// How [`count_points_ff`] walks `(Z/q)^n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PointCounting {
    /// Every point is visited (the last coordinate is counted in bulk).
    #[default]
    Full,
    /// Fixes the first coordinate to 0 and multiplies by `q`. Valid because
    /// every hyperplane `x_i - x_j = s` is invariant under adding a constant
    /// to all coordinates.
    FixFirstCoordinate,
}

/// Number of `x` in `(Z/q)^n` with `x_i - x_j != s (mod q)` for all `s` in
/// `S` and `i < j`. Requires `q` prime and `q > (m+1)n`.
pub fn count_points_ff(s: &OffsetSet, n: usize, q: u64) -> Result<BigUint, CharPolyError> {
    count_points_ff_with(s, n, q, PointCounting::Full)
}

pub fn count_points_ff_with(
    s: &OffsetSet,
    n: usize,
    q: u64,
    strategy: PointCounting,
) -> Result<BigUint, CharPolyError> {
    if !is_prime(q) {
        return Err(CharPolyError::NotPrime(q));
    }
    let bound = prime_bound(s, n);
    if q <= bound {
        return Err(CharPolyError::PrimeTooSmall { q, bound });
    }
    Ok(BigUint::from(raw_point_count(s, n, q, strategy)))
}

fn raw_point_count(s: &OffsetSet, n: usize, q: u64, strategy: PointCounting) -> u128 {
    if n == 0 {
        return 1;
    }
    let offsets: Vec<u64> = s
        .elements()
        .iter()
        .map(|&x| x.rem_euclid(q as i64) as u64)
        .collect();
    let counter = Counter {
        q,
        n,
        offsets: &offsets,
        words: (q as usize).div_ceil(64),
    };
    match strategy {
        PointCounting::Full => (0..q)
            .into_par_iter()
            .map(|x0| counter.count_from(x0))
            .sum(),
        PointCounting::FixFirstCoordinate => q as u128 * counter.count_from(0),
    }
}

struct Counter<'a> {
    q: u64,
    n: usize,
    offsets: &'a [u64],
    words: usize,
}

impl Counter<'_> {
    fn count_from(&self, x0: u64) -> u128 {
        let mut xs = vec![0u64; self.n];
        xs[0] = x0;
        let mut forbidden = vec![0u64; self.words];
        self.count_level(1, &mut xs, &mut forbidden)
    }

    // Points extending xs[..k]; xs[k] must avoid xs[i] - s for every i < k.
    fn count_level(&self, k: usize, xs: &mut [u64], scratch: &mut Vec<u64>) -> u128 {
        if k == self.n {
            return 1;
        }
        scratch.iter_mut().for_each(|w| *w = 0);
        for &xi in &xs[..k] {
            for &off in self.offsets {
                let bad = (xi + self.q - off) % self.q;
                scratch[(bad / 64) as usize] |= 1 << (bad % 64);
            }
        }
        let blocked: u32 = scratch.iter().map(|w| w.count_ones()).sum();
        if k + 1 == self.n {
            return (self.q - blocked as u64) as u128;
        }
        let allowed: Vec<u64> = (0..self.q)
            .filter(|&x| scratch[(x / 64) as usize] >> (x % 64) & 1 == 0)
            .collect();
        let mut total = 0;
        for x in allowed {
            xs[k] = x;
            total += self.count_level(k + 1, xs, scratch);
        }
        total
    }
}

/// The unique polynomial of degree `< points.len()` through `points`, if its
/// coefficients are integers.
pub fn interpolate(points: &[(BigInt, BigInt)]) -> Result<IntPolynomial, CharPolyError> {
    let k = points.len();
    let xs: Vec<BigRational> = points
        .iter()
        .map(|(x, _)| BigRational::from_integer(x.clone()))
        .collect();
    // Newton divided differences
    let mut table: Vec<BigRational> = points
        .iter()
        .map(|(_, y)| BigRational::from_integer(y.clone()))
        .collect();
    for level in 1..k {
        for i in (level..k).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Horner expansion of the Newton form
    let mut coeffs = vec![BigRational::zero(); k.max(1)];
    for i in (0..k).rev() {
        let mut next = vec![BigRational::zero(); k.max(1)];
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d + 1 < next.len() {
                next[d + 1] += c;
            }
            next[d] -= c * &xs[i];
        }
        next[0] += &table[i];
        coeffs = next;
    }
    let ints = coeffs
        .into_iter()
        .enumerate()
        .map(|(degree, c)| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(CharPolyError::NonIntegral { degree })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntPolynomial::new(ints))
}

// Each failed guard doubles the prime bound; give up after this many.
const GUARD_RETRIES: usize = 4;

/// `chi_{A_S(n)}(t)` by finite-field point counts and interpolation.
pub fn chi_ff(s: &OffsetSet, n: usize) -> Result<IntPolynomial, CharPolyError> {
    chi_ff_with(s, n, PointCounting::Full)
}

pub fn chi_ff_with(
    s: &OffsetSet,
    n: usize,
    strategy: PointCounting,
) -> Result<IntPolynomial, CharPolyError> {
    if n == 0 {
        return Ok(IntPolynomial::from_i64(&[1]));
    }
    let mut bound = prime_bound(s, n);
    let mut last_failure = None;
    for _ in 0..GUARD_RETRIES {
        let primes = primes_above(bound, n + 2);
        let points: Vec<(BigInt, BigInt)> = primes
            .iter()
            .map(|&q| {
                (
                    BigInt::from(q),
                    BigInt::from(raw_point_count(s, n, q, strategy)),
                )
            })
            .collect();
        let poly = interpolate(&points[..n + 1])?;
        let (guard_q, guard_count) = &points[n + 1];
        if &poly.eval(guard_q) == guard_count {
            return Ok(poly);
        }
        last_failure = Some(primes[n + 1]);
        bound *= 2;
    }
    Err(CharPolyError::GuardFailed {
        q: last_failure.unwrap_or(0),
    })
}

/// `chi_{A_S(k)}(t)` for `k = 1..=n_max`, from region counts `|T_S(k)|`.
pub fn chi_esa(s: &OffsetSet, n_max: usize) -> Result<Vec<IntPolynomial>, CharPolyError> {
    if !s.is_transitive() {
        return Err(CharPolyError::NotTransitive(s.to_string()));
    }
    let regions = (0..=n_max)
        .map(|k| count_trees(s, k))
        .collect::<Result<Vec<_>, _>>()?;
    chi_from_region_counts(&regions)
}

/// Series extraction behind [`chi_esa`]: `regions[k]` is `r(A_k)` with
/// `regions[0] = 1`.
pub fn chi_from_region_counts(regions: &[BigUint]) -> Result<Vec<IntPolynomial>, CharPolyError> {
    let n_max = regions.len().saturating_sub(1);
    let factorials: Vec<BigInt> = (0..=n_max)
        .scan(BigInt::one(), |acc, k| {
            if k > 0 {
                *acc *= k;
            }
            Some(acc.clone())
        })
        .collect();
    // F(x) = sum (-1)^k r_k x^k / k!
    let series: Vec<BigRational> = regions
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let sign = if k % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            BigRational::new(sign * BigInt::from(r.clone()), factorials[k].clone())
        })
        .collect();
    if !series.first().is_some_and(|c| c.is_one()) {
        return Err(CharPolyError::Invalid("r(A_0) must be 1".to_string()));
    }
    // G = log F via G' F = F'
    let mut log = vec![BigRational::zero(); n_max + 1];
    for k in 1..=n_max {
        let mut acc = BigRational::zero();
        for i in 1..k {
            acc += BigRational::from_integer(BigInt::from(i)) * &log[i] * &series[k - i];
        }
        log[k] = &series[k] - acc / BigRational::from_integer(BigInt::from(k));
    }
    // powers[j] = G^j, truncated at degree n_max
    let mut powers = vec![unit_series(n_max)];
    for j in 1..=n_max {
        powers.push(mul_series(&powers[j - 1], &log));
    }
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut coeffs = Vec::with_capacity(n + 1);
        for (j, power) in powers.iter().enumerate().take(n + 1) {
            // n! (-1)^j / j! [x^n] G^j
            let sign = if j % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let c = &power[n] * BigRational::new(sign * &factorials[n], factorials[j].clone());
            if !c.is_integer() {
                return Err(CharPolyError::NonIntegral { degree: j });
            }
            coeffs.push(c.to_integer());
        }
        out.push(IntPolynomial::new(coeffs));
    }
    Ok(out)
}

fn unit_series(len: usize) -> Vec<BigRational> {
    let mut s = vec![BigRational::zero(); len + 1];
    s[0] = BigRational::one();
    s
}

fn mul_series(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len();
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Region count `(-1)^n chi(-1)` where `n` is the degree.
pub fn regions(chi: &IntPolynomial) -> BigInt {
    let value = chi.eval(&-BigInt::one());
    if chi.degree().is_odd() {
        -value
    } else {
        value
    }
}

/// `(c_0, ..., c_n)` with `chi(t) = sum (-1)^(n-i) c_i t^i`, rejecting any
/// polynomial whose signs do not alternate that way.
pub fn abs_coeffs(chi: &IntPolynomial) -> Result<Vec<BigUint>, CharPolyError> {
    let n = chi.degree();
    chi.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let signed = if (n - i).is_multiple_of(2) {
                c.clone()
            } else {
                -c
            };
            signed
                .to_biguint()
                .ok_or(CharPolyError::SignPattern { degree: i })
        })
        .collect()
}

/// Small convenience for tests and reports.
pub fn to_u64_vec(v: &[BigUint]) -> Option<Vec<u64>> {
    v.iter().map(|x| x.to_u64()).collect()
}
