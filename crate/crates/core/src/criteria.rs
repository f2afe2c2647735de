//! FF and PFF verdicts on digit prefixes.
//!
//! A finite prefix can only ever give per-cut evidence: every record states
//! what holds at one cut `n`, never that a number is FF or PFF.
//!
//! The PFF inequality `c/u ≥ b^{(ε-1)n}` with `ε = p/q` is evaluated in the
//! integer form `c^q · b^{(q-p)n} ≥ u^q`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::radix::{numerators_at, DigitWord};
use crate::smooth::{factorize, s_component, PrimeSet};
use crate::{Base, Error, Result};

/// The exponent `ε = p/q` with `0 < ε ≤ 1`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatioBound {
    p: u64,
    q: u64,
}

impl RatioBound {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 || p > q {
            return Err(Error::InvalidRatio(p, q));
        }
        let g = p.gcd(&q);
        Ok(RatioBound { p: p / g, q: q / g })
    }

    pub fn one() -> Self {
        RatioBound { p: 1, q: 1 }
    }

    pub fn numer(self) -> u64 {
        self.p
    }

    pub fn denom(self) -> u64 {
        self.q
    }

    /// Parses `p/q` or a bare integer.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad ratio {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => RatioBound::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => {
                let p = s.trim().parse().map_err(|_| bad())?;
                RatioBound::new(p, 1)
            }
        }
    }
}

impl std::fmt::Display for RatioBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Evidence at one cut.
///
/// `valid` is false when `u_n = 0`; both verdicts are then false and the
/// component is reported as 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationRecord {
    pub cut: usize,
    #[serde(with = "crate::serde_big")]
    pub numerator: BigUint,
    #[serde(with = "crate::serde_big")]
    pub s_component: BigUint,
    pub ff: bool,
    pub pff: bool,
    pub first_nonzero_digit_position: Option<usize>,
    pub valid: bool,
}

fn check_cuts(w: &DigitWord, cuts: &[usize]) -> Result<()> {
    if let Some(&k) = cuts.iter().find(|&&k| k == 0 || k > w.len()) {
        return Err(Error::IndexOutOfRange { index: k, len: w.len() });
    }
    Ok(())
}

/// `c^q · b^{(q-p)n} ≥ u^q`.
pub fn pff_inequality(c: &BigUint, u: &BigUint, base: Base, n: usize, eps: RatioBound) -> bool {
    let q = eps.q as usize;
    let lhs = num_traits::pow(c.clone(), q) * base.pow((eps.q - eps.p) as usize * n);
    lhs >= num_traits::pow(u.clone(), q)
}

fn record(w: &DigitWord, s: &PrimeSet, eps: RatioBound, cut: usize, u: BigUint) -> Result<TruncationRecord> {
    let first_nonzero_digit_position = w.first_nonzero_position().filter(|&p| p <= cut);
    if u.is_zero() {
        return Ok(TruncationRecord {
            cut,
            numerator: u,
            s_component: BigUint::zero(),
            ff: false,
            pff: false,
            first_nonzero_digit_position,
            valid: false,
        });
    }
    let sc = s_component(&u, s)?;
    let ff = sc.is_smooth();
    let pff = ff || pff_inequality(&sc.component, &u, w.base(), cut, eps);
    Ok(TruncationRecord {
        cut,
        numerator: u,
        s_component: sc.component,
        ff,
        pff,
        first_nonzero_digit_position,
        valid: true,
    })
}

/// FF verdict per cut: `u_n ∈ M_S`. The `pff` field carries the `ε = 1`
/// verdict, which coincides with `ff`.
pub fn ff_check(w: &DigitWord, s: &PrimeSet, cuts: &[usize]) -> Result<Vec<TruncationRecord>> {
    pff_check(w, s, RatioBound::one(), cuts)
}

/// PFF verdict per cut; output order follows `cuts`.
pub fn pff_check(w: &DigitWord, s: &PrimeSet, eps: RatioBound, cuts: &[usize]) -> Result<Vec<TruncationRecord>> {
    check_cuts(w, cuts)?;
    let us = numerators_at(w, cuts)?;
    cuts.iter().zip(us).map(|(&k, u)| record(w, s, eps, k, u)).collect()
}

/// Lower bound on the number of distinct primes dividing the numerators at
/// `cuts`, and whether every factorization finished within budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorialIndex {
    pub lower_bound: usize,
    pub exact: bool,
    #[serde(with = "crate::serde_big::vec")]
    pub primes: Vec<BigUint>,
}

pub fn factorial_index(w: &DigitWord, cuts: &[usize], effort_budget: u64) -> Result<FactorialIndex> {
    if cuts.is_empty() {
        return Err(Error::InvalidArgument("factorial_index needs at least one cut".into()));
    }
    check_cuts(w, cuts)?;
    let us = numerators_at(w, cuts)?;
    let mut primes = BTreeSet::new();
    let mut exact = true;
    for u in &us {
        if u.is_zero() {
            return Err(Error::Zero("numerator at a factorial-index cut"));
        }
        let f = factorize(u, effort_budget)?;
        exact &= f.complete;
        primes.extend(f.primes.into_keys());
    }
    Ok(FactorialIndex { lower_bound: primes.len(), exact, primes: primes.into_iter().collect() })
}

/// 1 at factorial positions `1!, 2!, 3!, …`, 0 elsewhere.
pub fn liouville_word(base: Base, length: usize) -> DigitWord {
    let mut digits = vec![0u32; length];
    let (mut f, mut i) = (1usize, 1usize);
    while f <= length {
        digits[f - 1] = 1;
        i += 1;
        f = match f.checked_mul(i) {
            Some(v) => v,
            None => break,
        };
    }
    DigitWord::new(base, digits).expect("0/1 digits fit any base")
}

/// Largest cut `liouville_pff_witness` will materialize.
pub const LIOUVILLE_MAX_DIGITS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiouvilleWitness {
    pub i: usize,
    pub record: TruncationRecord,
    /// `b^{(i+3)! - (i+2)! - 1}`
    #[serde(with = "crate::serde_big")]
    pub expected_component: BigUint,
    pub component_identity: bool,
}

fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// Checks the Liouville word at cuts `(i+3)! - 1`, `i = 1..=i_max`, with
/// `S = F_b` and `ε = 1/2`, plus the exact shape of the S-component.
pub fn liouville_pff_witness(base: Base, i_max: usize) -> Result<Vec<LiouvilleWitness>> {
    if i_max == 0 {
        return Err(Error::InvalidArgument("i_max must be >= 1".into()));
    }
    let cut_of = |i: usize| factorial(i + 3).map(|f| f - 1);
    let last = cut_of(i_max)
        .filter(|&c| c <= LIOUVILLE_MAX_DIGITS)
        .ok_or_else(|| Error::ResourceLimit(format!("Liouville cut for i = {i_max} exceeds {LIOUVILLE_MAX_DIGITS} digits")))?;
    let word = liouville_word(base, last);
    let s = PrimeSet::of_base(base);
    let eps = RatioBound::new(1, 2).expect("valid");
    let cuts: Vec<usize> = (1..=i_max).map(|i| cut_of(i).expect("bounded above")).collect();
    let records = pff_check(&word, &s, eps, &cuts)?;
    Ok(records
        .into_iter()
        .enumerate()
        .map(|(idx, record)| {
            let i = idx + 1;
            let exp = factorial(i + 3).expect("bounded") - factorial(i + 2).expect("bounded") - 1;
            let expected_component = base.pow(exp);
            let component_identity = record.s_component == expected_component;
            LiouvilleWitness { i, record, expected_component, component_identity }
        })
        .collect())
}
