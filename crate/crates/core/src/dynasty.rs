//! Ancestor, parent and child relations that digit prefixes induce on nodes,
//! and the least-FF expansion that starts with a given word.
//!
//! A node `m1` is an ancestor of `m2` when the expansion of `m1` is a proper
//! prefix of the expansion of `m2`, i.e. `⌊m2 / b^k⌋ = m1` for some `k ≥ 1`.
//! The parent is the longest such prefix; children are descendants with no
//! node strictly in between.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::radix::{all_numerators, expand, DigitWord};
use crate::smooth::{enumerate_nodes, is_node, node_from_value, Node, PrimeSet};
use crate::{Base, Error, Result};

/// `f_a(n) = b·n + a`
pub fn apply_f(n: &BigUint, a: u32, base: Base) -> Result<BigUint> {
    if a >= base.get() {
        return Err(Error::DigitOutOfRange { digit: a.into(), base: base.get() });
    }
    Ok(n * base.get() + a)
}

/// `g(n) = ⌊n / b⌋`
pub fn apply_g(n: &BigUint, base: Base) -> BigUint {
    n / base.get()
}

/// True when `g^k(descendant) = ancestor` for some `k ≥ 1`.
pub fn is_ancestor_by_pullback(ancestor: &BigUint, descendant: &BigUint, base: Base) -> bool {
    if ancestor.is_zero() {
        return false;
    }
    let mut n = apply_g(descendant, base);
    while &n >= ancestor {
        if &n == ancestor {
            return true;
        }
        n = apply_g(&n, base);
    }
    false
}

fn check_positive(m: &BigUint) -> Result<()> {
    if m.is_zero() {
        Err(Error::Zero("dynasty relations need m >= 1"))
    } else {
        Ok(())
    }
}

/// Proper prefixes of the expansion of `m` that are nodes, shortest first.
pub fn ancestors(m: &BigUint, s: &PrimeSet, base: Base) -> Result<Vec<Node>> {
    check_positive(m)?;
    let word = expand(m, base)?;
    let mut us = all_numerators(&word);
    us.pop();
    let mut out = Vec::new();
    for u in us {
        if let Some(node) = node_from_value(&u, s)? {
            out.push(node);
        }
    }
    Ok(out)
}

/// The longest ancestor.
pub fn parent(m: &BigUint, s: &PrimeSet, base: Base) -> Result<Option<Node>> {
    check_positive(m)?;
    let word = expand(m, base)?;
    let us = all_numerators(&word);
    for u in us[..us.len() - 1].iter().rev() {
        if let Some(node) = node_from_value(u, s)? {
            return Ok(Some(node));
        }
    }
    Ok(None)
}

/// Nodes in `[v·b^i, v·b^i + b^i - 1]`, the numbers whose word extends the
/// origin by exactly `i` digits.
fn extension_interval(v: &BigUint, base: Base, i: usize, s: &PrimeSet) -> Result<Vec<Node>> {
    let bi = base.pow(i);
    let lo = v * &bi;
    let hi = &lo + &bi - 1u32;
    let lo = if lo.is_zero() { BigUint::one() } else { lo };
    enumerate_nodes(s, &lo, &hi)
}

/// Whether some prefix strictly between the origin (extended by 0 digits)
/// and the candidate (extended by `i`) is a node.
fn has_node_between(candidate: &BigUint, base: Base, i: usize, s: &PrimeSet) -> Result<bool> {
    let b = base.big();
    let mut p = candidate.clone();
    for _ in 1..i {
        p /= &b;
        if !p.is_zero() && is_node(&p, s)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every node whose word extends `origin` by `1..=max_extra_digits` digits,
/// ascending.
pub fn descendants(origin: &DigitWord, s: &PrimeSet, max_extra_digits: usize) -> Result<Vec<Node>> {
    let v = origin.value();
    let mut out = Vec::new();
    for i in 1..=max_extra_digits {
        out.extend(extension_interval(&v, origin.base(), i, s)?);
    }
    Ok(out)
}

/// Children of `origin` within `max_extra_digits` extra digits, ascending.
///
/// The extension intervals for `i = 1, 2, …` are disjoint and increasing, so
/// scanning them in order yields a globally sorted list.
pub fn children(origin: &DigitWord, s: &PrimeSet, max_extra_digits: usize) -> Result<Vec<Node>> {
    k_least_children(origin, s, usize::MAX, max_extra_digits)
}

/// The `k` smallest children within the digit budget.
pub fn k_least_children(origin: &DigitWord, s: &PrimeSet, k: usize, max_extra_digits: usize) -> Result<Vec<Node>> {
    Ok(children_with_width(origin, s, k, max_extra_digits)?.into_iter().map(|(n, _)| n).collect())
}

/// Children paired with the number of digits they add to the origin.
fn children_with_width(origin: &DigitWord, s: &PrimeSet, k: usize, max_extra_digits: usize) -> Result<Vec<(Node, usize)>> {
    let v = origin.value();
    let base = origin.base();
    let mut out = Vec::new();
    for i in 1..=max_extra_digits {
        if out.len() >= k {
            break;
        }
        for node in extension_interval(&v, base, i, s)? {
            if !has_node_between(&node.value, base, i, s)? {
                out.push((node, i));
                if out.len() >= k {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Children of the node `m`.
pub fn node_children(m: &BigUint, s: &PrimeSet, base: Base, max_extra_digits: usize) -> Result<Vec<Node>> {
    check_positive(m)?;
    children(&expand(m, base)?, s, max_extra_digits)
}

/// A chain `members[0] → members[1] → …`, each the parent of the next,
/// ending at the node whose word is `word`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub base: Base,
    #[serde(with = "crate::serde_big::vec")]
    pub members: Vec<BigUint>,
    pub word: Vec<u32>,
    pub length: usize,
}

impl ChainRecord {
    /// The single-digit path from the first digit to the last member, e.g.
    /// `1 →f_4→ 10 →f_4→ 64`.
    pub fn render(&self) -> String {
        let b = self.base.get();
        let mut u = BigUint::from(self.word[0]);
        let mut out = u.to_string();
        for &a in &self.word[1..] {
            u = u * b + a;
            let _ = write!(out, " →f_{a}→ {u}");
        }
        out
    }
}

/// The maximal chain ending at `target`.
pub fn chain_to(target: &BigUint, s: &PrimeSet, base: Base) -> Result<ChainRecord> {
    check_positive(target)?;
    let word = expand(target, base)?;
    let mut members = vec![target.clone()];
    let mut cur = target.clone();
    while let Some(p) = parent(&cur, s, base)? {
        cur = p.value.clone();
        members.push(p.value);
    }
    members.reverse();
    Ok(ChainRecord { base, length: members.len(), members, word: word.digits().to_vec() })
}

/// One chain per target.
pub fn chains(s: &PrimeSet, base: Base, targets: &[BigUint]) -> Result<Vec<ChainRecord>> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("chains needs at least one target".into()));
    }
    targets.iter().map(|t| chain_to(t, s, base)).collect()
}

/// Chains to the targets that are not an ancestor of another target, i.e.
/// the maximal chains of the family.
pub fn maximal_chains(s: &PrimeSet, base: Base, targets: &[BigUint]) -> Result<Vec<ChainRecord>> {
    let all = chains(s, base, targets)?;
    let inner: BTreeSet<&BigUint> =
        all.iter().flat_map(|c| c.members[..c.length - 1].iter()).collect();
    let mut seen = BTreeSet::new();
    Ok(all
        .iter()
        .filter(|c| !inner.contains(c.members.last().expect("non-empty")) && seen.insert(c.members.last().cloned()))
        .cloned()
        .collect())
}

/// Number of chains per length.
pub fn length_histogram(chains: &[ChainRecord]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for c in chains {
        *h.entry(c.length).or_insert(0) += 1;
    }
    h
}

/// A growing expansion `a_0 a_1 a_2 …` whose cuts at the end of each `a_i`
/// are the least nodes extending the previous word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeastFFResult {
    pub prefix: DigitWord,
    pub nodes: Vec<Node>,
    pub digits: DigitWord,
    pub cuts: Vec<usize>,
    /// The word appended at each step.
    pub appended: Vec<DigitWord>,
}

fn pad_digits(r: &BigUint, base: Base, width: usize) -> DigitWord {
    let mut digits = if r.is_zero() { Vec::new() } else { expand(r, base).expect("r >= 1").digits().to_vec() };
    let mut padded = vec![0u32; width - digits.len()];
    padded.append(&mut digits);
    DigitWord::new(base, padded).expect("digits of an expansion")
}

/// Iterates the least-child step `iterations` times from `prefix`.
///
/// Each step scans at most `per_step_cap` extra digits and fails with
/// [`Error::Stalled`] if no node turns up.
pub fn least_ff(prefix: &DigitWord, s: &PrimeSet, iterations: usize, per_step_cap: usize) -> Result<LeastFFResult> {
    let base = prefix.base();
    if prefix.is_empty() || prefix.is_zero() {
        return Err(Error::Zero("least-FF construction needs a nonzero prefix"));
    }
    if s.union(&PrimeSet::of_base(base)).len() < 2 {
        return Err(Error::InvalidArgument(format!("S ∪ F_b must hold at least two primes (S = {s}, b = {base})")));
    }
    let mut digits = prefix.clone();
    let mut out = LeastFFResult { prefix: prefix.clone(), nodes: Vec::new(), digits: DigitWord::empty(base), cuts: Vec::new(), appended: Vec::new() };
    for _ in 0..iterations {
        let (child, i) = children_with_width(&digits, s, 1, per_step_cap)?
            .pop()
            .ok_or_else(|| Error::Stalled { word: digits.to_string(), cap: per_step_cap })?;
        let r = &child.value - digits.value() * base.pow(i);
        let ext = pad_digits(&r, base, i);
        digits.extend_from(&ext)?;
        out.cuts.push(digits.len());
        out.appended.push(ext);
        out.nodes.push(child);
    }
    out.digits = digits;
    Ok(out)
}

/// The second least child at every step of `result` (`None` when none turns
/// up within `cap` extra digits).
pub fn runner_ups(result: &LeastFFResult, s: &PrimeSet, cap: usize) -> Result<Vec<Option<Node>>> {
    let mut origin = result.prefix.clone();
    let mut out = Vec::with_capacity(result.nodes.len());
    for ext in &result.appended {
        let mut two = k_least_children(&origin, s, 2, cap)?;
        out.push(if two.len() == 2 { two.pop() } else { None });
        origin.extend_from(ext)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }
    fn set(p: &[u64]) -> PrimeSet {
        PrimeSet::new(p.to_vec()).unwrap()
    }
    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }
    fn vals(ns: &[Node]) -> Vec<u64> {
        ns.iter().map(|n| (&n.value).try_into().unwrap()).collect()
    }
    fn word(base: u32, d: &[u32]) -> DigitWord {
        DigitWord::new(b(base), d.to_vec()).unwrap()
    }

    #[test]
    fn maps() {
        assert_eq!(apply_f(&big(5), 2, b(6)).unwrap(), big(32));
        assert_eq!(apply_g(&big(32), b(6)), big(5));
        let ten = apply_f(&big(1), 4, b(6)).unwrap();
        assert_eq!(apply_f(&ten, 4, b(6)).unwrap(), big(64));
        assert!(apply_f(&big(1), 6, b(6)).is_err());
    }

    #[test]
    fn ancestor_and_parent_examples() {
        let two = set(&[2]);
        assert_eq!(vals(&ancestors(&big(1 << 16), &two, b(6)).unwrap()), vec![1, 8]);
        assert!(ancestors(&big(32), &two, b(6)).unwrap().is_empty());
        assert!(ancestors(&big(4), &two, b(6)).unwrap().is_empty());
        assert_eq!(parent(&big(64), &two, b(6)).unwrap().unwrap().value, big(1));
        assert_eq!(parent(&big(1 << 16), &two, b(6)).unwrap().unwrap().value, big(8));
        assert!(parent(&big(2), &two, b(6)).unwrap().is_none());
        assert!(parent(&big(0), &two, b(6)).is_err());
    }

    #[test]
    fn children_examples() {
        let s = set(&[2, 5, 7, 11]);
        assert_eq!(vals(&children(&word(3, &[1]), &s, 1).unwrap()), vec![4, 5]);
        assert_eq!(vals(&node_children(&big(4), &s, b(3), 1).unwrap()), vec![14]);
        let c = children(&word(6, &[1]), &set(&[2]), 6).unwrap();
        assert!(!vals(&c).contains(&(1 << 16)));
        assert!(descendants(&word(6, &[1]), &set(&[2]), 6).unwrap().iter().any(|n| n.value == big(1 << 16)));
        assert!(children(&word(3, &[1]), &s, 0).unwrap().is_empty());
    }

    #[test]
    fn k_least_examples() {
        let s = set(&[2, 5, 7, 11]);
        assert_eq!(vals(&k_least_children(&word(3, &[1, 1, 2, 2]), &s, 2, 10).unwrap()), vec![400, 1210]);
        assert_eq!(vals(&k_least_children(&word(3, &[1]), &s, 1, 10).unwrap()), vec![4]);
        assert_eq!(vals(&k_least_children(&word(3, &[1, 1, 2, 2, 1, 1]), &s, 2, 12).unwrap()), vec![875000, 7884800]);
    }

    #[test]
    fn chain_examples() {
        let two = set(&[2]);
        let c = chain_to(&big(1 << 16), &two, b(6)).unwrap();
        assert_eq!(c.members, vec![big(1), big(8), big(65536)]);
        assert_eq!(word(6, &c.word).to_string(), "1223224");
        let c = chain_to(&big(32), &two, b(6)).unwrap();
        assert_eq!((c.length, c.render()), (1, "5 →f_2→ 32".to_string()));
        let c = chain_to(&big(512), &two, b(6)).unwrap();
        assert_eq!(c.members, vec![big(2), big(512)]);
        assert_eq!(c.render(), "2 →f_2→ 14 →f_1→ 85 →f_2→ 512");
        assert_eq!(chain_to(&big(64), &two, b(6)).unwrap().render(), "1 →f_4→ 10 →f_4→ 64");
        assert!(chains(&two, b(6), &[]).is_err());
    }

    #[test]
    fn maximal_chain_histogram() {
        // 1 → 8 → 65536 absorbs the chains ending at 1 and 8
        let ts = vec![big(1), big(8), big(65536), big(32)];
        let m = maximal_chains(&set(&[2]), b(6), &ts).unwrap();
        let h = length_histogram(&m);
        assert_eq!(h.get(&3), Some(&1));
        assert_eq!(h.get(&1), Some(&1));
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn least_ff_examples() {
        let s = set(&[2, 5, 7, 11]);
        let r = least_ff(&word(3, &[1]), &s, 5, 20).unwrap();
        assert_eq!(vals(&r.nodes), vec![4, 14, 44, 400, 875000]);
        assert_eq!(r.digits.to_string(), "1122110021102");
        let exps: Vec<Vec<u64>> = r.nodes.iter().map(|n| n.exponents.clone()).collect();
        assert_eq!(exps, vec![vec![2, 0, 0, 0], vec![1, 0, 1, 0], vec![2, 0, 0, 1], vec![4, 2, 0, 0], vec![3, 6, 1, 0]]);
        let ru = runner_ups(&r, &s, 20).unwrap();
        let ru: Vec<u64> = ru.iter().map(|n| (&n.as_ref().unwrap().value).try_into().unwrap()).collect();
        assert_eq!(ru, vec![5, 40, 128, 1210, 7884800]);

        let r = least_ff(&word(10, &[1]), &set(&[2, 5]), 3, 5).unwrap();
        assert_eq!(vals(&r.nodes), vec![10, 100, 1000]);
        assert_eq!(r.digits.to_string(), "1000");

        let r = least_ff(&word(3, &[1, 1]), &s, 1, 5).unwrap();
        assert_eq!(vals(&r.nodes), vec![14]);
        assert_eq!(r.appended[0].digits(), &[2]);
    }

    #[test]
    fn least_ff_leading_zero_prefix_keeps_zeros() {
        let r = least_ff(&word(3, &[0, 2]), &set(&[2, 5, 7, 11]), 2, 20).unwrap();
        assert_eq!(&r.digits.digits()[..2], &[0, 2]);
        for (k, n) in r.nodes.iter().enumerate() {
            assert_eq!(r.digits.prefix(r.cuts[k]).unwrap().value(), n.value);
        }
    }

    #[test]
    fn least_ff_errors() {
        let s = set(&[2, 5, 7, 11]);
        assert!(least_ff(&word(3, &[0, 0]), &s, 1, 5).is_err());
        assert!(matches!(least_ff(&word(2, &[1]), &set(&[2]), 1, 5), Err(Error::InvalidArgument(_))));
        // 1 → 4 needs one digit; the next step needs more than zero
        assert!(matches!(least_ff(&word(3, &[1]), &s, 2, 0), Err(Error::Stalled { .. })));
    }

    fn brute_least_descendant(v: u64, base: u64, s: &PrimeSet, max_extra: u32) -> Option<u64> {
        (1..=max_extra).find_map(|i| {
            let bi = base.pow(i);
            (v * bi..v * bi + bi).find(|&n| n > 0 && is_node(&big(n), s).unwrap())
        })
    }

    #[test]
    fn least_descendant_is_least_child_exhaustive() {
        for s in [set(&[2]), set(&[2, 5, 7, 11])] {
            for base in [3u32, 6] {
                for v in 1..=10_000u64 {
                    let w = expand(&big(v), b(base)).unwrap();
                    let cap = if s.len() == 1 { 12 } else { 6 };
                    let least = k_least_children(&w, &s, 1, cap).unwrap();
                    let brute = brute_least_descendant(v, base as u64, &s, if s.len() == 1 { 4 } else { 3 });
                    if let Some(n) = brute {
                        assert_eq!(vals(&least), vec![n], "v = {v}, b = {base}, S = {s}");
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn prefix_and_pullback_agree(a in 1u64..5000, n in 1u64..10_000_000, base in 2u32..13) {
            let wa = expand(&big(a), b(base)).unwrap();
            let wn = expand(&big(n), b(base)).unwrap();
            let by_prefix = wa.len() < wn.len() && wa.is_prefix_of(&wn);
            prop_assert_eq!(by_prefix, is_ancestor_by_pullback(&big(a), &big(n), b(base)));
        }

        #[test]
        fn composed_maps_give_ancestors(a in 1u64..5000, tail in proptest::collection::vec(0u32..12, 1..6), base in 2u32..13) {
            let mut n = big(a);
            for &d in &tail {
                n = apply_f(&n, d % base, b(base)).unwrap();
            }
            prop_assert!(is_ancestor_by_pullback(&big(a), &n, b(base)));
        }

        #[test]
        fn children_have_origin_as_parent(v in 1u64..3000, base in 3u32..8, pick in 0usize..2) {
            let s = [set(&[2]), set(&[2, 5, 7, 11])][pick].clone();
            for c in node_children(&big(v), &s, b(base), 4).unwrap() {
                let p = parent(&c.value, &s, b(base)).unwrap();
                if is_node(&big(v), &s).unwrap() {
                    prop_assert_eq!(p.map(|n| n.value), Some(big(v)));
                } else {
                    // the parent, if any, sits strictly above the origin word
                    prop_assert!(p.is_none_or(|n| n.value < big(v)));
                }
            }
        }

        #[test]
        fn least_ff_minimal(v in 1u64..2000, base in 3u32..7) {
            let s = set(&[2, 5, 7, 11]);
            let r = match least_ff(&expand(&big(v), b(base)).unwrap(), &s, 2, 6) {
                Ok(r) => r,
                Err(Error::Stalled { .. }) => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            let mut origin = v;
            for n in &r.nodes {
                let n: u64 = (&n.value).try_into().unwrap();
                let width = digit_count(&big(n), base as u64) - digit_count(&big(origin), base as u64);
                prop_assert_eq!(brute_least_u64(origin, base as u64, &[2, 5, 7, 11], width as u32), Some(n));
                origin = n;
            }
        }
    }

    fn smooth_u64(mut n: u64, primes: &[u64]) -> bool {
        for &p in primes {
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        n == 1
    }

    fn brute_least_u64(v: u64, base: u64, primes: &[u64], max_extra: u32) -> Option<u64> {
        (1..=max_extra).find_map(|i| {
            let bi = base.pow(i);
            (v * bi..v * bi + bi).find(|&n| n > 0 && smooth_u64(n, primes))
        })
    }

    fn digit_count(n: &BigUint, base: u64) -> usize {
        crate::radix::digit_len(n, Base::new(base as u32).unwrap())
    }
}
