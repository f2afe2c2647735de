//! Periodic words, generalized Fermat factors, counts of smooth words and
//! the equidistribution diagnostics behind extendability.
//!
//! Fractional logarithms and discrepancies are the only floating-point
//! values in the crate; the logarithms themselves are taken in fixed point
//! (see [`crate::precision`]) and rounded to `f64` at the end.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::precision::{frac_log, log2_fixed, Precision};
use crate::radix::{all_numerators, DigitWord};
use crate::smooth::{count_nodes, enumerate_nodes, is_node, is_prime_u64, PrimeSet};
use crate::{Base, Error, Result};

/// `a' a'' a'' a'' …`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicWordSpec {
    pub preperiod: DigitWord,
    pub period: DigitWord,
}

impl PeriodicWordSpec {
    pub fn new(preperiod: DigitWord, period: DigitWord) -> Result<Self> {
        if preperiod.base() != period.base() {
            return Err(Error::MixedBases(preperiod.base().get(), period.base().get()));
        }
        if period.is_empty() {
            return Err(Error::InvalidArgument("the period must be nonempty".into()));
        }
        Ok(PeriodicWordSpec { preperiod, period })
    }

    pub fn base(&self) -> Base {
        self.period.base()
    }

    pub fn digit(&self, pos: usize) -> u32 {
        let pre = self.preperiod.digits();
        if pos < pre.len() {
            pre[pos]
        } else {
            let per = self.period.digits();
            per[(pos - pre.len()) % per.len()]
        }
    }
}

/// The first `length` digits of the periodic word.
pub fn periodic_word(spec: &PeriodicWordSpec, length: usize) -> Result<DigitWord> {
    if length == 0 {
        return Err(Error::InvalidArgument("length must be >= 1".into()));
    }
    DigitWord::new(spec.base(), (0..length).map(|i| spec.digit(i)).collect())
}

/// `(b^n - 1) / (b - 1)`, the numerator of `n` ones.
pub fn repunit(base: Base, n: usize) -> BigUint {
    (base.pow(n) - 1u32) / (base.get() - 1)
}

/// `q_k = Σ_{j<s} b^{j·s^{k-1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatFactor {
    pub base: Base,
    pub prime: u64,
    pub index: u32,
    #[serde(with = "crate::serde_big")]
    pub value: BigUint,
}

/// Largest `s^k` accepted by the generalized Fermat routines.
pub const MAX_REPUNIT_LEN: usize = 1 << 22;

fn stride(s: u64, k: u32) -> Result<usize> {
    if !is_prime_u64(s) {
        return Err(Error::NotPrime(s));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("Fermat factor index starts at 1".into()));
    }
    s.checked_pow(k)
        .and_then(|v| usize::try_from(v).ok())
        .filter(|&v| v <= MAX_REPUNIT_LEN)
        .map(|v| v / s as usize)
        .ok_or_else(|| Error::ResourceLimit(format!("{s}^{k} digits is over the cap")))
}

pub fn q_factor(base: Base, s: u64, k: u32) -> Result<FermatFactor> {
    let step = stride(s, k)?;
    let bstep = base.pow(step);
    let mut value = BigUint::zero();
    let mut term = BigUint::one();
    for _ in 0..s {
        value += &term;
        term *= &bstep;
    }
    Ok(FermatFactor { base, prime: s, index: k, value })
}

/// `Π_{j=1..k} q_j = u_{s^k}`.
pub fn verify_q_product(base: Base, s: u64, k: u32) -> Result<bool> {
    let len = stride(s, k)? * s as usize;
    let mut prod = BigUint::one();
    for j in 1..=k {
        prod *= q_factor(base, s, j)?.value;
    }
    Ok(prod == repunit(base, len))
}

/// `gcd(q_k, Π_{j<k} q_j)`; the coprimality claim holds iff this divides `s`.
pub fn q_coprimality(base: Base, s: u64, k: u32) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::InvalidArgument("coprimality needs k >= 2".into()));
    }
    let qk = q_factor(base, s, k)?.value;
    let mut prod = BigUint::one();
    for j in 1..k {
        prod *= q_factor(base, s, j)?.value;
    }
    Ok(qk.gcd(&prod))
}

/// Exact size of `M_S ∩ [1, b^k - 1]` next to the naive bound
/// `(k·log b / log s_1)^l` and the corrected bound `(k·log b / log s_1 + 1)^l`.
/// The naive one forgets that each exponent may be zero and fails already
/// at `S = {2}, b = 6, k = 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub primes: PrimeSet,
    pub base: Base,
    pub k: usize,
    pub exact: u64,
    pub naive_bound: f64,
    pub corrected_bound: f64,
    pub naive_bound_holds: bool,
    pub corrected_bound_holds: bool,
}

/// `x = k·log b / log s_1` as a rational interval, exact when `b` is a power of `s_1`.
fn log_ratio_interval(base: Base, s1: u64, k: usize, prec: Precision) -> (BigRational, BigRational) {
    let bb = base.big();
    let sb = BigUint::from(s1);
    let mut e = 0usize;
    let mut p = BigUint::one();
    while p < bb {
        p *= &sb;
        e += 1;
    }
    if p == bb {
        let x = BigRational::from_integer(BigInt::from(k * e));
        return (x.clone(), x);
    }
    let slack = BigUint::from(4u32);
    let lb = log2_fixed(&bb, prec);
    let ls = log2_fixed(&sb, prec);
    let kk = BigUint::from(k);
    let r = |n: BigUint, d: BigUint| BigRational::new(n.into(), d.into());
    let lo = r(&kk * (&lb - &slack), &ls + &slack);
    let hi = r(&kk * (&lb + &slack), &ls - &slack);
    (lo, hi)
}

/// `count ≤ x^l` decided on the interval `[lo, hi] ∋ x`, refining the
/// precision if the interval straddles the count.
fn bound_holds(count: u64, base: Base, s: &PrimeSet, k: usize, shift: u32) -> bool {
    let l = s.len() as u32;
    let c = BigRational::from_integer(count.into());
    let mut bits = Precision::default().bits();
    loop {
        let (lo, hi) = log_ratio_interval(base, s.smallest(), k, Precision::new(bits).expect(">= 64"));
        let add = BigRational::from_integer(shift.into());
        let lo_b = Pow::pow(&lo + &add, l);
        let hi_b = Pow::pow(&hi + &add, l);
        if c <= lo_b {
            return true;
        }
        if c > hi_b {
            return false;
        }
        // x^l is irrational unless b is a power of s_1, so this ends
        bits *= 2;
        if bits > 4096 {
            return c <= lo_b;
        }
    }
}

pub fn count_smooth_words(s: &PrimeSet, base: Base, k: usize) -> Result<CountReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("word length k must be >= 1".into()));
    }
    let hi = base.pow(k) - 1u32;
    let exact = count_nodes(s, &BigUint::one(), &hi);
    let x = k as f64 * (base.get() as f64).ln() / (s.smallest() as f64).ln();
    let l = s.len() as i32;
    Ok(CountReport {
        primes: s.clone(),
        base,
        k,
        exact,
        naive_bound: x.powi(l),
        corrected_bound: (x + 1.0).powi(l),
        naive_bound_holds: bound_holds(exact, base, s, k, 0),
        corrected_bound_holds: bound_holds(exact, base, s, k, 1),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV with columns `S,b,k,exact,naive_bound,corrected_bound`.
pub fn count_csv(reports: &[CountReport]) -> String {
    let mut out = String::from("S,b,k,exact,naive_bound,corrected_bound\n");
    for r in reports {
        let _ = writeln!(out, "{},{},{},{},{},{}", csv_field(&r.primes.to_string()), r.base, r.k, r.exact, r.naive_bound, r.corrected_bound);
    }
    out
}

/// Fractional parts of `log_b(n)` for ascending `n ≥ 2`.
pub fn fractional_log_parts(values: &[BigUint], base: Base, prec: Precision) -> Result<Vec<f64>> {
    let two = BigUint::from(2u32);
    if let Some(v) = values.iter().find(|v| **v < two) {
        return Err(Error::InvalidArgument(format!("fractional log needs values >= 2, got {v}")));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("values must be strictly ascending".into()));
    }
    let bb = base.big();
    Ok(values.iter().map(|v| frac_log(v, &bb, prec)).collect())
}

/// `D*_N = max_i max(|i/N - x_(i)|, |(i-1)/N - x_(i)|)` over the sorted sample.
pub fn star_discrepancy(points: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("discrepancy of an empty sample".into()));
    }
    if let Some(p) = points.iter().find(|p| !(0.0..1.0).contains(*p)) {
        return Err(Error::InvalidArgument(format!("point {p} is outside [0, 1)")));
    }
    let mut xs = points.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let i = i as f64 + 1.0;
            (i / n - x).abs().max(((i - 1.0) / n - x).abs())
        })
        .fold(0.0, f64::max))
}

/// `(N, D*_N)` for each prefix length in `checkpoints`.
pub fn discrepancy_series(points: &[f64], checkpoints: &[usize]) -> Result<Vec<(usize, f64)>> {
    checkpoints
        .iter()
        .map(|&n| {
            let sample = points.get(..n).ok_or(Error::IndexOutOfRange { index: n, len: points.len() })?;
            Ok((n, star_discrepancy(sample)?))
        })
        .collect()
}

/// CSV with columns `N,D*_N`.
pub fn discrepancy_csv(series: &[(usize, f64)]) -> String {
    let mut out = String::from("N,D*_N\n");
    for (n, d) in series {
        let _ = writeln!(out, "{n},{d}");
    }
    out
}

/// The first `(i, n)` with `n` in `values` (ascending) and
/// `b^i·m ≤ n ≤ b^i·m + b^i - 1`, for `i = 1..=search_cap`.
pub fn extendable_witness(values: &[BigUint], base: Base, m: &BigUint, search_cap: usize) -> Result<Option<(usize, BigUint)>> {
    if m.is_zero() {
        return Err(Error::Zero("extendability is defined for m >= 1"));
    }
    for i in 1..=search_cap {
        let bi = base.pow(i);
        let lo = m * &bi;
        let hi = &lo + &bi - 1u32;
        let at = values.partition_point(|v| v < &lo);
        if let Some(v) = values.get(at).filter(|v| **v <= hi) {
            return Ok(Some((i, v.clone())));
        }
    }
    Ok(None)
}

/// As [`extendable_witness`] with `values = M_S`.
pub fn extendable_witness_nodes(s: &PrimeSet, base: Base, m: &BigUint, search_cap: usize) -> Result<Option<(usize, BigUint)>> {
    if m.is_zero() {
        return Err(Error::Zero("extendability is defined for m >= 1"));
    }
    for i in 1..=search_cap {
        let bi = base.pow(i);
        let lo = m * &bi;
        let hi = &lo + &bi - 1u32;
        if let Some(n) = enumerate_nodes(s, &lo, &hi)?.into_iter().next() {
            return Ok(Some((i, n.value)));
        }
    }
    Ok(None)
}

/// Coefficients of `α·x + β·y = γ·z` at the cut `n = r' + q·r'' + k` of an
/// eventually periodic word, with `x = b^{q·r''+k}`, `y = 1`, `z = u_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SUnitReport {
    pub cut: usize,
    pub q: usize,
    pub k: usize,
    #[serde(with = "signed")]
    pub alpha: BigInt,
    #[serde(with = "signed")]
    pub beta: BigInt,
    #[serde(with = "crate::serde_big")]
    pub gamma: BigUint,
    #[serde(with = "crate::serde_big")]
    pub x: BigUint,
    #[serde(with = "crate::serde_big")]
    pub y: BigUint,
    #[serde(with = "crate::serde_big")]
    pub z: BigUint,
    pub identity_holds: bool,
}

mod signed {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))
    }
}

/// The equation at cut `n ≥ max(r', 1)`.
pub fn s_unit_equation(spec: &PeriodicWordSpec, n: usize) -> Result<SUnitReport> {
    let b = spec.base();
    let r1 = spec.preperiod.len();
    let r2 = spec.period.len();
    if n == 0 || n < r1 {
        return Err(Error::IndexOutOfRange { index: n, len: r1 });
    }
    let (q, k) = ((n - r1) / r2, (n - r1) % r2);
    let u_pre = spec.preperiod.value();
    let u_per = spec.period.value();
    let u_k = spec.period.prefix(k)?.value();
    let gamma = b.pow(r2) - 1u32;
    let bk = b.pow(k);
    let alpha = BigInt::from(&u_pre * &gamma + &u_per);
    let beta = BigInt::from(&u_k * &gamma) - BigInt::from(&bk * &u_per);
    let x = b.pow(q * r2 + k);
    let z = periodic_word(spec, n)?.value();
    let lhs = &alpha * BigInt::from(x.clone()) + &beta;
    let identity_holds = lhs == BigInt::from(&gamma * &z);
    Ok(SUnitReport { cut: n, q, k, alpha, beta, gamma, x, y: BigUint::one(), z, identity_holds })
}

/// Equations at every cut `n ≤ max_len` (past the preperiod) whose
/// numerator is a nonzero node of `S`.
pub fn s_unit_reports(spec: &PeriodicWordSpec, s: &PrimeSet, max_len: usize) -> Result<Vec<SUnitReport>> {
    let w = periodic_word(spec, max_len)?;
    let us = all_numerators(&w);
    let mut out = Vec::new();
    for (idx, u) in us.iter().enumerate() {
        let n = idx + 1;
        if n >= spec.preperiod.len() && !u.is_zero() && is_node(u, s)? {
            out.push(s_unit_equation(spec, n)?);
        }
    }
    Ok(out)
}

/// Helper for reports: an `f64` view of a rational.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
