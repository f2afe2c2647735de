//! Budgeted factorization: trial division, then Pollard-Brent rho.
//!
//! The rho phase spends at most `effort_budget` modular multiplications in a
//! fixed order, so a larger budget always repeats the work of a smaller one
//! first: the set of discovered primes can only grow with the budget.

use std::collections::BTreeMap;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::primality::is_probable_prime;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorOptions {
    /// Trial division runs over every integer `2..=trial_bound`.
    pub trial_bound: u64,
    /// Total rho iterations allowed across all composites.
    pub effort_budget: u64,
    pub seed: u64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { trial_bound: 1 << 12, effort_budget: 1 << 20, seed: 0x5eed }
    }
}

/// `n = Π p^e · residual`; `complete` iff the residual is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(serialize_with = "ser_map", deserialize_with = "de_map")]
    pub primes: BTreeMap<BigUint, u32>,
    #[serde(with = "crate::serde_big")]
    pub residual: BigUint,
    pub complete: bool,
}

fn ser_map<S: serde::Serializer>(m: &BTreeMap<BigUint, u32>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for (p, e) in m {
        seq.serialize_element(&(p.to_str_radix(10), e))?;
    }
    seq.end()
}

fn de_map<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<BigUint, u32>, D::Error> {
    use serde::de::Error;
    Vec::<(String, u32)>::deserialize(d)?
        .into_iter()
        .map(|(p, e)| {
            crate::serde_big::parse_decimal(&p).map(|p| (p, e)).ok_or_else(|| D::Error::custom("bad prime"))
        })
        .collect()
}

impl Factorization {
    /// Product of the discovered prime powers times the residual.
    pub fn product(&self) -> BigUint {
        self.primes
            .iter()
            .fold(self.residual.clone(), |acc, (p, &e)| acc * num_traits::pow(p.clone(), e as usize))
    }
}

pub fn factorize(n: &BigUint, effort_budget: u64) -> Result<Factorization> {
    factorize_with(n, &FactorOptions { effort_budget, ..FactorOptions::default() })
}

pub fn factorize_with(n: &BigUint, opts: &FactorOptions) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Zero("cannot factor 0"));
    }
    let mut primes = BTreeMap::new();
    let mut rest = n.clone();
    let mut d = 2u64;
    while d <= opts.trial_bound {
        if BigUint::from(d) * BigUint::from(d) > rest {
            break;
        }
        if (&rest % d).is_zero() {
            let mut e = 0;
            while (&rest % d).is_zero() {
                rest /= d;
                e += 1;
            }
            primes.insert(BigUint::from(d), e);
        }
        d += if d == 2 { 1 } else { 2 };
    }

    let mut residual = BigUint::one();
    let mut budget = opts.effort_budget;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *primes.entry(m).or_insert(0) += 1;
            continue;
        }
        if let Some(r) = perfect_square_root(&m) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        match rho_split(&m, &mut budget, &mut rng) {
            Some(f) => {
                let g = &m / &f;
                // larger part first so the stack order is deterministic
                let (a, b) = if f < g { (f, g) } else { (g, f) };
                stack.push(a);
                stack.push(b);
            }
            None => residual *= m,
        }
    }
    let complete = residual.is_one();
    Ok(Factorization { primes, residual, complete })
}

fn perfect_square_root(m: &BigUint) -> Option<BigUint> {
    let r = m.sqrt();
    (&r * &r == *m).then_some(r)
}

/// Brent's variant; `None` when the budget runs dry.
fn rho_split(n: &BigUint, budget: &mut u64, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    while *budget > 0 {
        let mut y = rng.gen_biguint_range(&one, n);
        let c = rng.gen_biguint_range(&one, n);
        let m = 64u64;
        let (mut g, mut r, mut q) = (one.clone(), 1u64, one.clone());
        let (mut x, mut ys) = (y.clone(), y.clone());
        let f = |v: &BigUint| (v * v + &c) % n;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = m.min(r - k);
                for _ in 0..steps {
                    if *budget == 0 {
                        return None;
                    }
                    *budget -= 1;
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }
        if &g == n {
            // backtrack one step at a time
            loop {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n && g >= two {
            return Some(g);
        }
    }
    None
}
