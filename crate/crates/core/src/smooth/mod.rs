//! S-smooth ("node") arithmetic.
//!
//! A node over a prime set `S = {s_1 < … < s_l}` is `Π s_j^{r_j}`; the set of
//! all of them (including `1`) is `M_S`. The S-component `c_{n,S}` of `n` is
//! its largest divisor in `M_S`.

mod factor;
mod primality;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use factor::{factorize, factorize_with, FactorOptions, Factorization};
pub use primality::{is_prime_u64, is_probable_prime};

/// Sorted, non-empty set of distinct primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PrimeSet(Vec<u64>);

impl PrimeSet {
    /// Sorts and deduplicates; every element must be prime.
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::EmptyPrimeSet);
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime_u64(p)) {
            return Err(Error::NotPrime(p));
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(PrimeSet(primes))
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn smallest(&self) -> u64 {
        self.0[0]
    }

    pub fn largest(&self) -> u64 {
        *self.0.last().expect("non-empty")
    }

    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        PrimeSet(v)
    }

    pub fn is_subset(&self, other: &PrimeSet) -> bool {
        self.0.iter().all(|&p| other.contains(p))
    }

    /// `F_b`, the prime support of a base.
    pub fn of_base(base: crate::Base) -> PrimeSet {
        PrimeSet(base.prime_factors())
    }
}

impl TryFrom<Vec<u64>> for PrimeSet {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        PrimeSet::new(v)
    }
}

impl From<PrimeSet> for Vec<u64> {
    fn from(s: PrimeSet) -> Vec<u64> {
        s.0
    }
}

impl std::fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// An S-smooth integer together with its exponent vector and weight `d = Σ r_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    #[serde(with = "crate::serde_big")]
    pub value: BigUint,
    pub exponents: Vec<u64>,
    pub primes: PrimeSet,
}

impl Node {
    pub fn weight(&self) -> u64 {
        self.exponents.iter().sum()
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value).then_with(|| self.exponents.cmp(&other.exponents))
    }
}

/// `n = component · cofactor` with `component ∈ M_S` and `cofactor ⟂ S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SComponent {
    #[serde(with = "crate::serde_big")]
    pub component: BigUint,
    pub exponents: Vec<u64>,
    #[serde(with = "crate::serde_big")]
    pub cofactor: BigUint,
}

impl SComponent {
    pub fn is_smooth(&self) -> bool {
        self.cofactor.is_one()
    }
}

/// Strips every prime of `S` from `n`; `n = 0` is rejected.
pub fn s_component(n: &BigUint, s: &PrimeSet) -> Result<SComponent> {
    if n.is_zero() {
        return Err(Error::Zero("the S-component of 0 is undefined"));
    }
    let mut rest = n.clone();
    let mut component = BigUint::one();
    let mut exponents = Vec::with_capacity(s.len());
    for &p in s.primes() {
        let (e, pe) = strip_prime(&mut rest, p);
        component *= pe;
        exponents.push(e);
    }
    Ok(SComponent { component, exponents, cofactor: rest })
}

/// Divides the largest power of `p` out of `n`, returning its exponent and
/// value. Squares the divisor while it still divides, then walks back down
/// the recorded powers, so an exponent `e` costs `O(log e)` divisions.
fn strip_prime(n: &mut BigUint, p: u64) -> (u64, BigUint) {
    let mut exp = 0u64;
    let mut taken = BigUint::one();
    let mut powers: Vec<(u64, BigUint)> = Vec::new();
    let (mut e, mut pe) = (1u64, BigUint::from(p));
    loop {
        let (q, r) = n.div_rem(&pe);
        if !r.is_zero() {
            break;
        }
        *n = q;
        exp += e;
        taken *= &pe;
        let next = &pe * &pe;
        powers.push((e, pe));
        pe = next;
        e *= 2;
    }
    for (e, pe) in powers.into_iter().rev() {
        let (q, r) = n.div_rem(&pe);
        if r.is_zero() {
            *n = q;
            exp += e;
            taken *= &pe;
        }
    }
    (exp, taken)
}

/// Membership in `M_S`.
pub fn is_node(n: &BigUint, s: &PrimeSet) -> Result<bool> {
    Ok(s_component(n, s)?.is_smooth())
}

/// `Π s_j^{r_j}`.
pub fn node_value(exponents: &[u64], s: &PrimeSet) -> Result<Node> {
    if exponents.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), got: exponents.len() });
    }
    let mut value = BigUint::one();
    for (&p, &e) in s.primes().iter().zip(exponents) {
        let e = usize::try_from(e).map_err(|_| Error::Overflow(format!("exponent {e}")))?;
        value *= num_traits::pow(BigUint::from(p), e);
    }
    Ok(Node { value, exponents: exponents.to_vec(), primes: s.clone() })
}

/// Reads the exponent vector of a value already known to be a node.
pub fn node_from_value(n: &BigUint, s: &PrimeSet) -> Result<Option<Node>> {
    let c = s_component(n, s)?;
    Ok(c.is_smooth().then(|| Node { value: c.component, exponents: c.exponents, primes: s.clone() }))
}

/// All of `M_S ∩ [lo, hi]`, strictly ascending.
///
/// Depth-first over exponent tuples of all primes but the last, abandoning a
/// branch once the partial product passes `hi`; the last prime's exponent is
/// then solved for directly, so narrow windows high up stay cheap.
pub fn enumerate_nodes(s: &PrimeSet, lo: &BigUint, hi: &BigUint) -> Result<Vec<Node>> {
    if lo.is_zero() {
        return Err(Error::Zero("enumerate_nodes needs lo >= 1"));
    }
    let mut out = Vec::new();
    if lo > hi {
        return Ok(out);
    }
    let primes: Vec<BigUint> = s.primes().iter().map(|&p| BigUint::from(p)).collect();
    let mut exps = vec![0u64; primes.len()];
    walk(&primes, 0, BigUint::one(), &mut exps, lo, hi, &mut |value, exps| {
        out.push(Node { value, exponents: exps.to_vec(), primes: s.clone() });
    });
    out.sort();
    Ok(out)
}

fn walk(
    primes: &[BigUint],
    idx: usize,
    partial: BigUint,
    exps: &mut [u64],
    lo: &BigUint,
    hi: &BigUint,
    emit: &mut impl FnMut(BigUint, &[u64]),
) {
    let p = &primes[idx];
    if idx + 1 == primes.len() {
        // smallest e with partial·p^e >= lo, then walk up while <= hi
        let mut value = partial;
        let mut e = 0u64;
        while &value < lo {
            value *= p;
            e += 1;
        }
        while &value <= hi {
            exps[idx] = e;
            emit(value.clone(), exps);
            value *= p;
            e += 1;
        }
        exps[idx] = 0;
        return;
    }
    let mut value = partial;
    let mut e = 0u64;
    while &value <= hi {
        exps[idx] = e;
        walk(primes, idx + 1, value.clone(), exps, lo, hi, emit);
        value *= p;
        e += 1;
    }
    exps[idx] = 0;
}

/// Counts `M_S ∩ [lo, hi]` without materializing nodes.
pub fn count_nodes(s: &PrimeSet, lo: &BigUint, hi: &BigUint) -> u64 {
    if lo > hi {
        return 0;
    }
    let lo = if lo.is_zero() { BigUint::one() } else { lo.clone() };
    let primes: Vec<BigUint> = s.primes().iter().map(|&p| BigUint::from(p)).collect();
    let mut exps = vec![0u64; primes.len()];
    let mut count = 0u64;
    walk(&primes, 0, BigUint::one(), &mut exps, &lo, hi, &mut |_, _| count += 1);
    count
}

/// The `n` least nodes `>= lo`, ascending. The search window doubles in
/// bit length and gives up past `2^max_bits`.
pub fn least_nodes(s: &PrimeSet, lo: &BigUint, n: usize, max_bits: u64) -> Result<Vec<Node>> {
    if lo.is_zero() {
        return Err(Error::Zero("least_nodes needs lo >= 1"));
    }
    let mut bits = (lo.bits() + 1).max(8);
    while count_nodes(s, lo, &(BigUint::one() << bits)) < n as u64 {
        if bits >= max_bits {
            return Err(Error::ResourceLimit(format!("fewer than {n} nodes below 2^{max_bits}")));
        }
        bits = (bits * 2).min(max_bits);
    }
    let mut out = enumerate_nodes(s, lo, &(BigUint::one() << bits))?;
    out.truncate(n);
    Ok(out)
}
