//! Base-`b` words and the numerators of their rational truncations.
//!
//! Digits are stored most-significant first, so a word `a_1 a_2 … a_k` reads
//! left to right and `u_k = Σ a_i b^{k-i}`. Words carry their base and refuse
//! to mix with words of another base.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Integer base `b ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Base(u32);

impl Base {
    pub fn new(b: u32) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(b as u64));
        }
        Ok(Base(b))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn big(self) -> BigUint {
        BigUint::from(self.0)
    }

    /// `b^e` as a big natural.
    pub fn pow(self, e: usize) -> BigUint {
        num_traits::pow(self.big(), e)
    }

    /// The distinct prime factors of `b` (the set `F_b`), ascending.
    pub fn prime_factors(self) -> Vec<u64> {
        let mut n = self.0 as u64;
        let mut out = Vec::new();
        let mut p = 2u64;
        while p * p <= n {
            if n.is_multiple_of(p) {
                out.push(p);
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }
}

impl TryFrom<u32> for Base {
    type Error = Error;
    fn try_from(b: u32) -> Result<Self> {
        Base::new(b)
    }
}

impl From<Base> for u32 {
    fn from(b: Base) -> u32 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word over the alphabet `{0, …, b-1}`. Leading zeros are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord")]
pub struct DigitWord {
    base: Base,
    digits: Vec<u32>,
}

#[derive(Deserialize)]
struct RawWord {
    base: Base,
    digits: Vec<u32>,
}

impl TryFrom<RawWord> for DigitWord {
    type Error = Error;
    fn try_from(raw: RawWord) -> Result<Self> {
        DigitWord::new(raw.base, raw.digits)
    }
}

impl DigitWord {
    pub fn new(base: Base, digits: Vec<u32>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= base.get()) {
            return Err(Error::DigitOutOfRange { digit: d as u64, base: base.get() });
        }
        Ok(DigitWord { base, digits })
    }

    pub fn empty(base: Base) -> Self {
        DigitWord { base, digits: Vec::new() }
    }

    pub(crate) fn from_digits_unchecked(base: Base, digits: Vec<u32>) -> Self {
        debug_assert!(digits.iter().all(|&d| d < base.get()));
        DigitWord { base, digits }
    }

    /// Parses a rendered word. Whitespace-separated integers are always
    /// accepted; an unseparated run of decimal characters is accepted when
    /// `b ≤ 10`.
    pub fn parse(s: &str, base: Base) -> Result<Self> {
        let s = s.trim();
        let digits: Vec<u32> = if s.contains(|c: char| c.is_whitespace() || c == ',') {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad digit {t:?}"))))
                .collect::<Result<_>>()?
        } else if base.get() <= 10 {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::InvalidArgument(format!("bad digit {c:?}"))))
                .collect::<Result<_>>()?
        } else if s.is_empty() {
            Vec::new()
        } else {
            // A single token in base > 10 is one digit.
            vec![s.parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad digit {s:?}")))?]
        };
        DigitWord::new(base, digits)
    }

    #[inline]
    pub fn base(&self) -> Base {
        self.base
    }

    #[inline]
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// True when every digit is 0 (vacuously true for the empty word).
    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// The restriction `a|_k`.
    pub fn prefix(&self, k: usize) -> Result<DigitWord> {
        if k > self.len() {
            return Err(Error::IndexOutOfRange { index: k, len: self.len() });
        }
        Ok(DigitWord { base: self.base, digits: self.digits[..k].to_vec() })
    }

    /// 1-based position of the first nonzero digit.
    pub fn first_nonzero_position(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d != 0).map(|i| i + 1)
    }

    /// Numerator of the whole word (`0` for the empty word).
    pub fn value(&self) -> BigUint {
        from_digits(&self.digits, self.base)
    }

    pub fn push(&mut self, digit: u32) -> Result<()> {
        if digit >= self.base.get() {
            return Err(Error::DigitOutOfRange { digit: digit as u64, base: self.base.get() });
        }
        self.digits.push(digit);
        Ok(())
    }

    pub fn extend_from(&mut self, other: &DigitWord) -> Result<()> {
        if other.base != self.base {
            return Err(Error::MixedBases(self.base.get(), other.base.get()));
        }
        self.digits.extend_from_slice(&other.digits);
        Ok(())
    }

    /// `true` if `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &DigitWord) -> bool {
        self.base == other.base && other.digits.starts_with(&self.digits)
    }

    pub fn truncate(&mut self, len: usize) {
        self.digits.truncate(len);
    }
}

impl fmt::Display for DigitWord {
    /// Concatenated digits when `b ≤ 10`, single-space separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base.get() <= 10 {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
        } else {
            for (i, d) in self.digits.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{d}")?;
            }
        }
        Ok(())
    }
}

/// The numerator `u_k` of the `k`-th rational truncation `u_k / b^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationNumerator {
    #[serde(with = "crate::serde_big")]
    pub value: BigUint,
    pub cut: usize,
}

fn from_digits(digits: &[u32], base: Base) -> BigUint {
    let b = base.get();
    if b <= 256 {
        if digits.is_empty() {
            return BigUint::zero();
        }
        let bytes: Vec<u8> = digits.iter().map(|&d| d as u8).collect();
        BigUint::from_radix_be(&bytes, b).expect("digits validated against base")
    } else {
        digits.iter().fold(BigUint::zero(), |acc, &d| acc * b + d)
    }
}

/// Canonical base-`b` expansion of `n ≥ 1` (no leading zero).
pub fn expand(n: &BigUint, base: Base) -> Result<DigitWord> {
    if n.is_zero() {
        return Err(Error::Zero("expand is undefined for 0"));
    }
    let b = base.get();
    let digits = if b <= 256 {
        n.to_radix_be(b).into_iter().map(u32::from).collect()
    } else {
        let bb = base.big();
        let mut out = Vec::new();
        let mut m = n.clone();
        while !m.is_zero() {
            let (q, r) = m.div_rem(&bb);
            out.push(r.iter_u32_digits().next().unwrap_or(0));
            m = q;
        }
        out.reverse();
        out
    };
    Ok(DigitWord::from_digits_unchecked(base, digits))
}

/// `u_k = Σ_{i=1..k} a_i b^{k-i}` for `1 ≤ k ≤ |w|`.
pub fn numerator(w: &DigitWord, k: usize) -> Result<TruncationNumerator> {
    check_cut(w, k)?;
    Ok(TruncationNumerator { value: from_digits(&w.digits[..k], w.base), cut: k })
}

/// Concatenates words of one base. The explicit base makes the empty
/// concatenation well defined.
pub fn concat(base: Base, parts: &[DigitWord]) -> Result<DigitWord> {
    let mut out = DigitWord::empty(base);
    for p in parts {
        out.extend_from(p)?;
    }
    Ok(out)
}

/// The truncation `u_k / b^k` in lowest terms.
pub fn truncation_value(w: &DigitWord, k: usize) -> Result<BigRational> {
    let u = numerator(w, k)?.value;
    Ok(BigRational::new(u.into(), w.base.pow(k).into()))
}

fn check_cut(w: &DigitWord, k: usize) -> Result<()> {
    if k == 0 || k > w.len() {
        return Err(Error::IndexOutOfRange { index: k, len: w.len() });
    }
    Ok(())
}

/// Numerators `u_1, …, u_{|w|}` in one pass, via `u_k = b·u_{k-1} + a_k`.
pub fn all_numerators(w: &DigitWord) -> Vec<BigUint> {
    let b = w.base.get();
    let mut acc = BigUint::zero();
    w.digits
        .iter()
        .map(|&d| {
            acc = &acc * b + d;
            acc.clone()
        })
        .collect()
}

/// Numerators at the given cuts (any order, each in `1..=|w|`), built by
/// Horner steps between consecutive cuts.
pub fn numerators_at(w: &DigitWord, cuts: &[usize]) -> Result<Vec<BigUint>> {
    for &k in cuts {
        check_cut(w, k)?;
    }
    let mut order: Vec<usize> = (0..cuts.len()).collect();
    order.sort_by_key(|&i| cuts[i]);
    let mut out = vec![BigUint::zero(); cuts.len()];
    let mut acc = BigUint::zero();
    let mut pos = 0usize;
    for i in order {
        let k = cuts[i];
        if k > pos {
            let chunk = from_digits(&w.digits[pos..k], w.base);
            acc = acc * w.base.pow(k - pos) + chunk;
            pos = k;
        }
        out[i] = acc.clone();
    }
    Ok(out)
}

/// Number of base-`b` digits of `n` (0 for `n = 0`).
pub fn digit_len(n: &BigUint, base: Base) -> usize {
    if n.is_zero() {
        return 0;
    }
    let b = base.big();
    let mut len = 1;
    let mut p = b.clone();
    while &p <= n {
        p *= &b;
        len += 1;
    }
    len
}
