//! Fixed-point binary logarithms of big naturals.
//!
//! `log2_fixed(n, p)` returns `floor(log2(n) · 2^p)` up to a couple of units in
//! the last place, computed by the classic square-and-compare bit extraction
//! on a `p + GUARD`-bit mantissa. This is what the discrepancy and counting
//! diagnostics use instead of `f64::ln`, which loses the fractional part of
//! `log_b n` once `n` has a few hundred digits.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

const GUARD: u32 = 16;

/// Working precision in fractional bits (at least 64).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidArgument(format!("precision must be >= 64 bits, got {bits}")));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(128)
    }
}

/// `log2(n)` scaled by `2^bits`, for `n ≥ 1`.
pub fn log2_fixed(n: &BigUint, prec: Precision) -> BigUint {
    assert!(!n.is_zero(), "log of zero");
    let p = prec.0 + GUARD;
    let int_part = n.bits() - 1;
    // mantissa m = n / 2^int_part in [1, 2), held as an integer scaled by 2^p
    let mut m = if int_part as u32 > p { n >> (int_part - p as u64) } else { n << (p as u64 - int_part) };
    let two = BigUint::one() << (p + 1);
    let mut frac = BigUint::zero();
    for _ in 0..p {
        m = (&m * &m) >> p;
        frac <<= 1;
        if m >= two {
            m >>= 1;
            frac |= BigUint::one();
        }
    }
    ((BigUint::from(int_part) << p) | frac) >> GUARD
}

/// Fractional part of `log_b(n)` as an `f64`, evaluated at `prec`.
pub fn frac_log(n: &BigUint, base: &BigUint, prec: Precision) -> f64 {
    let ln = log2_fixed(n, prec);
    let lb = log2_fixed(base, prec);
    let scaled = (ln << prec.0) / lb; // log_b(n) · 2^p
    let mask = (BigUint::one() << prec.0) - BigUint::one();
    let frac = scaled & mask;
    to_unit_f64(&frac, prec.0)
}

/// `x / 2^bits` as f64.
pub fn to_unit_f64(x: &BigUint, bits: u32) -> f64 {
    let bl = x.bits();
    if bl == 0 {
        return 0.0;
    }
    // keep 64 significant bits, then scale
    let shift = bl.saturating_sub(64);
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX) as f64;
    top * 2f64.powi(shift as i32 - bits as i32)
}

/// Signed comparison helper: `a · 2^-bits` rendered as f64.
pub fn fixed_to_f64(x: &BigInt, bits: u32) -> f64 {
    let mag = to_unit_f64(x.magnitude(), bits);
    if x.sign() == num_bigint::Sign::Minus {
        -mag
    } else {
        mag
    }
}
