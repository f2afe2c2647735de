//! Browser bindings for the demo page. Each export takes plain numbers and
//! strings and returns a JSON document; failures come back as a JS `Error`.
//!
//! The `*_json` functions hold the logic and are what the native tests call.

use ffdigits::dynasty::{least_ff, runner_ups};
use ffdigits::generators::{check_invariants, generate, FillerSpec, GenOptions, Preset, WeightSpec};
use ffdigits::precision::Precision;
use ffdigits::smooth::least_nodes;
use ffdigits::words::{discrepancy_series, fractional_log_parts};
use ffdigits::{Base, DigitWord, PrimeSet};
use num_bigint::BigUint;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Upper limits that keep a page responsive.
pub const MAX_STREAM_DIGITS: usize = 20_000;
pub const MAX_LEAST_FF_CAP: usize = 24;
pub const MAX_SAMPLE: usize = 20_000;

type Res = Result<String, String>;

fn err(e: ffdigits::Error) -> String {
    e.to_string()
}

fn base(b: u32) -> Result<Base, String> {
    Base::new(b).map_err(err)
}

/// `""` means "not given".
fn prime_set(list: &str) -> Result<Option<PrimeSet>, String> {
    let list = list.trim();
    if list.is_empty() {
        return Ok(None);
    }
    let primes = list
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| format!("not an integer: {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    PrimeSet::new(primes).map(Some).map_err(err)
}

fn required_primes(list: &str) -> Result<PrimeSet, String> {
    prime_set(list)?.ok_or_else(|| "a prime set is required".to_string())
}

fn word(s: &str, b: Base) -> Result<DigitWord, String> {
    DigitWord::parse(s, b).map_err(err)
}

/// A generated stream: `filler` (may be empty) goes after every block and
/// `weighted` multiplies block `i` by `i`.
pub fn stream_json(b: u32, family: &str, primes: &str, digits: usize, filler: &str, weighted: bool) -> Res {
    if digits > MAX_STREAM_DIGITS {
        return Err(format!("at most {MAX_STREAM_DIGITS} digits"));
    }
    let b = base(b)?;
    let s = prime_set(primes)?;
    let spec = Preset::from_name(family).and_then(|p| p.spec(b, s, 2, 1)).map_err(err)?;
    let filler = word(filler, b)?;
    let opts = GenOptions {
        fillers: (!filler.is_empty()).then_some(FillerSpec::Fixed(filler)),
        weights: weighted.then_some(WeightSpec::Index),
        ..Default::default()
    };
    let stream = generate(b, &spec, digits, &opts).map_err(err)?;
    let checks = check_invariants(&stream, &stream.primes).map_err(err)?;
    let blocks: Vec<_> = stream
        .blocks
        .iter()
        .zip(&checks)
        .map(|(bl, c)| json!({"index": bl.index, "value": bl.value.to_string(), "start": bl.start, "t": bl.t, "verified": c.all()}))
        .collect();
    Ok(json!({
        "base": b.get(),
        "primes": stream.primes.primes(),
        "digits": stream.digits.digits(),
        "text": stream.digits.to_string(),
        "cuts": stream.cuts,
        "blocks": blocks,
    })
    .to_string())
}

/// Least-FF steps from `prefix`, each with its runner-up.
pub fn least_ff_json(b: u32, primes: &str, prefix: &str, steps: usize, cap: usize) -> Res {
    if cap > MAX_LEAST_FF_CAP {
        return Err(format!("scan cap is at most {MAX_LEAST_FF_CAP}"));
    }
    let b = base(b)?;
    let s = required_primes(primes)?;
    let prefix = word(prefix, b)?;
    let r = least_ff(&prefix, &s, steps, cap).map_err(err)?;
    let ru = runner_ups(&r, &s, cap).map_err(err)?;
    let rows: Vec<_> = r
        .nodes
        .iter()
        .zip(&r.appended)
        .zip(&ru)
        .map(|((n, ext), second)| {
            json!({
                "node": n.value.to_string(),
                "exponents": n.exponents,
                "appended": ext.to_string(),
                "runner_up": second.as_ref().map(|m| m.value.to_string()),
            })
        })
        .collect();
    Ok(json!({"primes": s.primes(), "digits": r.digits.to_string(), "cuts": r.cuts, "steps": rows}).to_string())
}

/// Star discrepancy of `{log_b m}` over the `count` least nodes `m >= 2`,
/// sampled at roughly 40 evenly spaced sizes.
pub fn discrepancy_json(b: u32, primes: &str, count: usize) -> Res {
    if count == 0 || count > MAX_SAMPLE {
        return Err(format!("sample size must be in 1..={MAX_SAMPLE}"));
    }
    let b = base(b)?;
    let s = required_primes(primes)?;
    let values: Vec<BigUint> =
        least_nodes(&s, &BigUint::from(2u32), count, 1 << 16).map_err(err)?.into_iter().map(|n| n.value).collect();
    let points = fractional_log_parts(&values, b, Precision::new(64).map_err(err)?).map_err(err)?;
    let step = count.div_ceil(40);
    let mut checkpoints: Vec<usize> = (step..count).step_by(step).collect();
    checkpoints.push(count);
    let series = discrepancy_series(&points, &checkpoints).map_err(err)?;
    let rows: Vec<_> = series.iter().map(|(n, d)| json!({"n": n, "d": d})).collect();
    Ok(json!({"base": b.get(), "primes": s.primes(), "points": points, "series": rows}).to_string())
}

#[wasm_bindgen]
pub fn stream(b: u32, family: &str, primes: &str, digits: usize, filler: &str, weighted: bool) -> Result<String, JsError> {
    stream_json(b, family, primes, digits, filler, weighted).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = leastFf)]
pub fn least_ff_js(b: u32, primes: &str, prefix: &str, steps: usize, cap: usize) -> Result<String, JsError> {
    least_ff_json(b, primes, prefix, steps, cap).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn discrepancy(b: u32, primes: &str, count: usize) -> Result<String, JsError> {
    discrepancy_json(b, primes, count).map_err(|e| JsError::new(&e))
}
