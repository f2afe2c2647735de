//! Argument-level parsers. Everything here fails with a parse error (exit 2);
//! semantic checks happen in the library and map to domain errors.

use ffdigits::serde_big::parse_decimal;
use ffdigits::{Base, DigitWord};
use num_bigint::BigUint;

use crate::Failure;

pub fn natural(s: &str) -> Result<BigUint, String> {
    parse_decimal(s.trim()).ok_or_else(|| format!("not a decimal natural number: {s:?}"))
}

fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty())
}

pub fn u64_list(s: &str) -> Result<Vec<u64>, String> {
    tokens(s).map(|t| t.parse::<u64>().map_err(|_| format!("not an integer: {t:?}"))).collect()
}

pub fn naturals(s: &str) -> Result<Vec<BigUint>, String> {
    tokens(s).map(natural).collect()
}

/// `0-54,69,72` style lists; ranges are inclusive.
pub fn ranges(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for t in tokens(s) {
        match t.split_once('-') {
            Some((a, b)) => {
                let lo: u64 = a.parse().map_err(|_| format!("bad range {t:?}"))?;
                let hi: u64 = b.parse().map_err(|_| format!("bad range {t:?}"))?;
                if lo > hi {
                    return Err(format!("empty range {t:?}"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(t.parse().map_err(|_| format!("not an integer: {t:?}"))?),
        }
    }
    Ok(out)
}

/// A digit word: separated integers, or an unseparated decimal run when
/// `b ≤ 10`. Malformed tokens are parse errors, digits `≥ b` domain errors.
pub fn word(s: &str, base: Base) -> Result<DigitWord, Failure> {
    let s = s.trim();
    let bad = |t: &str| Failure::Parse(format!("bad digit {t:?}"));
    let digits: Vec<u32> = if s.contains(|c: char| c.is_whitespace() || c == ',') {
        tokens(s).map(|t| t.parse::<u32>().map_err(|_| bad(t))).collect::<Result<_, _>>()?
    } else if base.get() <= 10 {
        s.chars().map(|c| c.to_digit(10).ok_or_else(|| bad(&c.to_string()))).collect::<Result<_, _>>()?
    } else if s.is_empty() {
        Vec::new()
    } else {
        vec![s.parse::<u32>().map_err(|_| bad(s))?]
    };
    Ok(DigitWord::new(base, digits)?)
}
