//! Digit streams built by concatenating base-`b` expansions of nodes.
//!
//! Three shapes are supported: plain concatenation `a_1 a_2 a_3 …`, the same
//! with a filler word after every block, and concatenation of weighted nodes
//! `w_i · m_i`. Node families are evaluated lazily, one block at a time, and
//! generation stops as soon as the digit budget is filled.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::radix::{expand, numerator, DigitWord};
use crate::smooth::{node_value, s_component, Node, PrimeSet};
use crate::{Base, Error, Result};

/// Largest node (in bits) a generator will materialize.
pub const MAX_NODE_BITS: f64 = 16_000_000.0;

/// Exponent of one prime as a function of the block index `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum ExponentRule {
    /// `(i+1)! - i! - 1`
    FactorialGap,
    /// `radix^i`
    Tower { radix: u64 },
    /// `coef · i`
    Linear { coef: u64 },
    Constant { value: u64 },
}

impl ExponentRule {
    pub fn at(self, i: u64) -> Result<u64> {
        let overflow = || Error::Overflow(format!("exponent rule {self:?} at index {i}"));
        match self {
            ExponentRule::FactorialGap => {
                if i == 0 {
                    return Err(Error::InvalidArgument("factorial-gap exponents start at index 1".into()));
                }
                let f = (1..=i).try_fold(1u64, |acc, k| acc.checked_mul(k)).ok_or_else(overflow)?;
                // (i+1)! - i! = i · i!
                f.checked_mul(i).map(|v| v - 1).ok_or_else(overflow)
            }
            ExponentRule::Tower { radix } => {
                let e = u32::try_from(i).map_err(|_| overflow())?;
                radix.checked_pow(e).ok_or_else(overflow)
            }
            ExponentRule::Linear { coef } => coef.checked_mul(i).ok_or_else(overflow),
            ExponentRule::Constant { value } => Ok(value),
        }
    }
}

pub type ExponentFn = Arc<dyn Fn(u64) -> Result<Vec<u64>> + Send + Sync>;

#[derive(Clone)]
pub enum NodeFamily {
    /// Exponent vectors in block order; the stream ends with the list.
    Explicit(Vec<Vec<u64>>),
    /// One rule per prime of the set.
    PerPrime(Vec<ExponentRule>),
    Custom(ExponentFn),
}

impl fmt::Debug for NodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeFamily::Explicit(v) => f.debug_tuple("Explicit").field(v).finish(),
            NodeFamily::PerPrime(r) => f.debug_tuple("PerPrime").field(r).finish(),
            NodeFamily::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Nodes `m_start, m_{start+1}, …` over one prime set.
#[derive(Debug, Clone)]
pub struct NodeSequenceSpec {
    pub primes: PrimeSet,
    pub family: NodeFamily,
    pub start: u64,
}

impl NodeSequenceSpec {
    pub fn per_prime(primes: PrimeSet, rules: Vec<ExponentRule>, start: u64) -> Result<Self> {
        if rules.len() != primes.len() {
            return Err(Error::DimensionMismatch { expected: primes.len(), got: rules.len() });
        }
        Ok(NodeSequenceSpec { primes, family: NodeFamily::PerPrime(rules), start })
    }

    /// `m_i = Π_{s ∈ S} s^{(i+1)! - i! - 1}`, from `i = 1`.
    pub fn factorial_gap(primes: PrimeSet) -> Self {
        let rules = vec![ExponentRule::FactorialGap; primes.len()];
        NodeSequenceSpec { primes, family: NodeFamily::PerPrime(rules), start: 1 }
    }

    /// `m_i = p^{radix^i}`.
    pub fn power_tower(prime: u64, radix: u64, start: u64) -> Result<Self> {
        Self::per_prime(PrimeSet::new(vec![prime])?, vec![ExponentRule::Tower { radix }], start)
    }

    pub fn explicit(primes: PrimeSet, exponents: Vec<Vec<u64>>) -> Result<Self> {
        if let Some(v) = exponents.iter().find(|v| v.len() != primes.len()) {
            return Err(Error::DimensionMismatch { expected: primes.len(), got: v.len() });
        }
        Ok(NodeSequenceSpec { primes, family: NodeFamily::Explicit(exponents), start: 1 })
    }

    pub fn custom(primes: PrimeSet, start: u64, f: ExponentFn) -> Self {
        NodeSequenceSpec { primes, family: NodeFamily::Custom(f), start }
    }

    /// The node at absolute index `i`, or `None` past the end of an explicit list.
    pub fn node(&self, i: u64) -> Result<Option<Node>> {
        let exps = match &self.family {
            NodeFamily::Explicit(list) => match i.checked_sub(self.start).and_then(|k| list.get(k as usize)) {
                Some(v) => v.clone(),
                None => return Ok(None),
            },
            NodeFamily::PerPrime(rules) => rules.iter().map(|r| r.at(i)).collect::<Result<_>>()?,
            NodeFamily::Custom(f) => f(i)?,
        };
        guard_size(&exps, &self.primes)?;
        node_value(&exps, &self.primes).map(Some)
    }

    /// The first `n` nodes.
    pub fn take(&self, n: usize) -> Result<Vec<Node>> {
        let mut out = Vec::with_capacity(n);
        for k in 0..n as u64 {
            match self.node(self.start + k)? {
                Some(m) => out.push(m),
                None => break,
            }
        }
        Ok(out)
    }
}

fn guard_size(exps: &[u64], primes: &PrimeSet) -> Result<()> {
    let bits: f64 = exps.iter().zip(primes.primes()).map(|(&e, &p)| e as f64 * (p as f64).log2()).sum();
    if bits > MAX_NODE_BITS {
        return Err(Error::ResourceLimit(format!("node with about {bits:.0} bits exceeds the block cap")));
    }
    Ok(())
}

/// Named node families shared by the front ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Factorial gap on every prime.
    FactorialGap,
    /// `p^{radix^i}` on every prime.
    PowerTower,
    /// Factorial gap on the primes of the base.
    LiouvilleNodes,
    /// `p^{radix^i}` on the first prime, `q^i` on the others.
    PerturbedTower,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::FactorialGap, Preset::PowerTower, Preset::LiouvilleNodes, Preset::PerturbedTower];

    pub fn name(self) -> &'static str {
        match self {
            Preset::FactorialGap => "factorial-gap",
            Preset::PowerTower => "power-tower",
            Preset::LiouvilleNodes => "liouville-nodes",
            Preset::PerturbedTower => "perturbed-tower",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown node family {name:?}")))
    }

    /// `primes` must be given for every family except `liouville-nodes`,
    /// which takes `F_b` and rejects an explicit set.
    pub fn spec(self, base: Base, primes: Option<PrimeSet>, radix: u64, start: u64) -> Result<NodeSequenceSpec> {
        let s = match (self, primes) {
            (Preset::LiouvilleNodes, None) => PrimeSet::of_base(base),
            (Preset::LiouvilleNodes, Some(_)) => {
                return Err(Error::InvalidArgument("liouville-nodes takes its primes from the base".into()))
            }
            (_, Some(s)) => s,
            (p, None) => return Err(Error::InvalidArgument(format!("{} needs a prime set", p.name()))),
        };
        let rules = match self {
            Preset::FactorialGap | Preset::LiouvilleNodes => vec![ExponentRule::FactorialGap; s.len()],
            Preset::PowerTower => vec![ExponentRule::Tower { radix }; s.len()],
            Preset::PerturbedTower => {
                let mut r = vec![ExponentRule::Linear { coef: 1 }; s.len()];
                r[0] = ExponentRule::Tower { radix };
                r
            }
        };
        NodeSequenceSpec::per_prime(s, rules, start)
    }
}

/// How the node primes must relate to the prime support `F_b` of the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportPolicy {
    /// Node primes equal `F_b`.
    MatchBase,
    /// Node primes are a subset of `F_b`.
    #[default]
    WithinBase,
    /// No restriction.
    Any,
}

impl SupportPolicy {
    pub fn check(self, primes: &PrimeSet, base: Base) -> Result<()> {
        let fb = PrimeSet::of_base(base);
        let ok = match self {
            SupportPolicy::MatchBase => primes == &fb,
            SupportPolicy::WithinBase => primes.is_subset(&fb),
            SupportPolicy::Any => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("node primes {primes} do not fit base {base} under {self:?}")))
        }
    }
}

pub type FillerFn = Arc<dyn Fn(u64) -> DigitWord + Send + Sync>;

/// Word inserted after block `i`.
#[derive(Clone)]
pub enum FillerSpec {
    Fixed(DigitWord),
    PerIndex(FillerFn),
}

impl FillerSpec {
    pub fn word(&self, i: u64) -> DigitWord {
        match self {
            FillerSpec::Fixed(w) => w.clone(),
            FillerSpec::PerIndex(f) => f(i),
        }
    }
}

impl fmt::Debug for FillerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FillerSpec::Fixed(w) => f.debug_tuple("Fixed").field(w).finish(),
            FillerSpec::PerIndex(_) => f.write_str("PerIndex(..)"),
        }
    }
}

pub type WeightFn = Arc<dyn Fn(u64) -> BigUint + Send + Sync>;

/// Multiplier `w_i ≥ 1` applied to node `m_i`.
#[derive(Clone)]
pub enum WeightSpec {
    Unit,
    /// `w_i = i`
    Index,
    PerIndex(WeightFn),
}

impl WeightSpec {
    pub fn weight(&self, i: u64) -> BigUint {
        match self {
            WeightSpec::Unit => BigUint::one(),
            WeightSpec::Index => BigUint::from(i),
            WeightSpec::PerIndex(f) => f(i),
        }
    }
}

impl fmt::Debug for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Unit => f.write_str("Unit"),
            WeightSpec::Index => f.write_str("Index"),
            WeightSpec::PerIndex(_) => f.write_str("PerIndex(..)"),
        }
    }
}

/// One fully materialized block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub index: u64,
    /// `w_i · m_i`, the number whose expansion is the block.
    #[serde(with = "crate::serde_big")]
    pub value: BigUint,
    pub exponents: Vec<u64>,
    pub d: u64,
    pub t: usize,
    /// Digits before the block, so the block occupies `start+1 ..= start+t`.
    pub start: usize,
    #[serde(with = "crate::serde_big")]
    pub node: BigUint,
    #[serde(with = "crate::serde_big")]
    pub weight_factor: BigUint,
    pub weight_bits: u64,
    /// Total filler length written before this block.
    pub preceding_filler: usize,
}

impl Block {
    /// `(Σ_{j<i} |a'_j|) / d_i`, absent when `d_i = 0`.
    pub fn filler_ratio(&self) -> Option<BigRational> {
        (self.d > 0).then(|| BigRational::new(self.preceding_filler.into(), self.d.into()))
    }
}

/// A finite prefix of a generated expansion. `cuts[k]` is the last digit
/// position of `blocks[k]`; a trailing partial block contributes digits only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StreamRepr", into = "StreamRepr")]
pub struct GeneratedStream {
    pub primes: PrimeSet,
    pub digits: DigitWord,
    pub cuts: Vec<usize>,
    pub blocks: Vec<Block>,
}

#[derive(Serialize, Deserialize)]
struct StreamRepr {
    base: Base,
    primes: PrimeSet,
    digits: Vec<u32>,
    cuts: Vec<usize>,
    blocks: Vec<Block>,
}

impl From<GeneratedStream> for StreamRepr {
    fn from(s: GeneratedStream) -> Self {
        StreamRepr { base: s.digits.base(), primes: s.primes, digits: s.digits.digits().to_vec(), cuts: s.cuts, blocks: s.blocks }
    }
}

impl TryFrom<StreamRepr> for GeneratedStream {
    type Error = Error;
    fn try_from(r: StreamRepr) -> Result<Self> {
        Ok(GeneratedStream { primes: r.primes, digits: DigitWord::new(r.base, r.digits)?, cuts: r.cuts, blocks: r.blocks })
    }
}

impl GeneratedStream {
    pub fn base(&self) -> Base {
        self.digits.base()
    }
}

#[derive(Debug, Clone, Default)]
pub struct GenOptions {
    pub fillers: Option<FillerSpec>,
    pub weights: Option<WeightSpec>,
    pub support: SupportPolicy,
}

/// Concatenated node expansions, truncated at `digit_budget`.
pub fn generate_nodes(base: Base, nodes: &NodeSequenceSpec, digit_budget: usize) -> Result<GeneratedStream> {
    generate(base, nodes, digit_budget, &GenOptions::default())
}

/// As [`generate_nodes`] with `fillers` written after every block.
pub fn generate_with_fillers(base: Base, nodes: &NodeSequenceSpec, fillers: FillerSpec, digit_budget: usize) -> Result<GeneratedStream> {
    generate(base, nodes, digit_budget, &GenOptions { fillers: Some(fillers), ..Default::default() })
}

/// As [`generate_nodes`] with block `i` the expansion of `w_i · m_i`.
pub fn generate_weighted(base: Base, nodes: &NodeSequenceSpec, weights: WeightSpec, digit_budget: usize) -> Result<GeneratedStream> {
    generate(base, nodes, digit_budget, &GenOptions { weights: Some(weights), ..Default::default() })
}

pub fn generate(base: Base, nodes: &NodeSequenceSpec, digit_budget: usize, opts: &GenOptions) -> Result<GeneratedStream> {
    opts.support.check(&nodes.primes, base)?;
    let mut stream = GeneratedStream { primes: nodes.primes.clone(), digits: DigitWord::empty(base), cuts: Vec::new(), blocks: Vec::new() };
    let mut filler_total = 0usize;
    let mut i = nodes.start;
    while stream.digits.len() < digit_budget {
        let Some(node) = nodes.node(i)? else { break };
        let w = opts.weights.as_ref().map_or_else(BigUint::one, |ws| ws.weight(i));
        if w.is_zero() {
            return Err(Error::Zero("block weight w_i must be >= 1"));
        }
        let value = &node.value * &w;
        let word = expand(&value, base)?;
        let start = stream.digits.len();
        let room = digit_budget - start;
        if word.len() > room {
            stream.digits.extend_from(&word.prefix(room)?)?;
            break;
        }
        stream.digits.extend_from(&word)?;
        stream.cuts.push(stream.digits.len());
        stream.blocks.push(Block {
            index: i,
            d: node.weight(),
            t: word.len(),
            start,
            exponents: node.exponents.clone(),
            weight_bits: w.bits(),
            weight_factor: w,
            node: node.value,
            value,
            preceding_filler: filler_total,
        });
        if let Some(fs) = &opts.fillers {
            let f = fs.word(i);
            if f.base() != base {
                return Err(Error::MixedBases(f.base().get(), base.get()));
            }
            filler_total += f.len();
            let room = digit_budget - stream.digits.len();
            stream.digits.extend_from(&f.prefix(f.len().min(room))?)?;
        }
        i += 1;
    }
    Ok(stream)
}

/// Pointwise growth check `d_{i+1} ≥ (1+ε) d_i` and the tail infima
/// `inf_{j ≤ i} d_{i+1}/d_i` over the given prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub holds: Vec<bool>,
    pub ratios: Vec<BigRational>,
    pub tail_infimum: Vec<BigRational>,
}

pub fn validate_growth(weights: &[u64], eps: &BigRational) -> Result<GrowthReport> {
    if weights.len() < 2 {
        return Err(Error::InvalidArgument("growth check needs at least two nodes".into()));
    }
    if eps <= &BigRational::zero() {
        return Err(Error::InvalidArgument(format!("growth margin must be positive, got {eps}")));
    }
    if weights.contains(&0) {
        return Err(Error::Zero("node weight 0 makes the growth ratio undefined"));
    }
    let factor = BigRational::one() + eps;
    let ratios: Vec<BigRational> =
        weights.windows(2).map(|w| BigRational::new(w[1].into(), w[0].into())).collect();
    let holds = ratios.iter().map(|r| r >= &factor).collect();
    let mut tail_infimum = ratios.clone();
    for k in (0..tail_infimum.len().saturating_sub(1)).rev() {
        if tail_infimum[k + 1] < tail_infimum[k] {
            tail_infimum[k] = tail_infimum[k + 1].clone();
        }
    }
    Ok(GrowthReport { holds, ratios, tail_infimum })
}

/// Exact checks on one block of a stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCheck {
    pub index: u64,
    /// `u_{n_i} = b^{t_i} · u_{start} + value`
    pub recurrence: bool,
    /// `s_1^{d} ≤ m ≤ s_l^{d}` on the node
    pub weight_sandwich: bool,
    /// `b^{t-1} ≤ value < b^t`
    pub length_sandwich: bool,
    pub gcd_divides_component: bool,
}

impl BlockCheck {
    pub fn all(&self) -> bool {
        self.recurrence && self.weight_sandwich && self.length_sandwich && self.gcd_divides_component
    }
}

/// `gcd(b^{t_i}, m_i)` against the S-component of `u_{n_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentWitness {
    pub index: usize,
    pub cut: usize,
    #[serde(with = "crate::serde_big")]
    pub gcd: BigUint,
    #[serde(with = "crate::serde_big")]
    pub component: BigUint,
    pub divides: bool,
}

/// Witness for block `k` (1-based position in `stream.blocks`).
pub fn scomponent_witness(stream: &GeneratedStream, s: &PrimeSet, k: usize) -> Result<ComponentWitness> {
    let block = k
        .checked_sub(1)
        .and_then(|j| stream.blocks.get(j))
        .ok_or(Error::IndexOutOfRange { index: k, len: stream.blocks.len() })?;
    let cut = stream.cuts[k - 1];
    let u = numerator(&stream.digits, cut)?.value;
    let gcd = stream.base().pow(block.t).gcd(&block.node);
    let component = if u.is_zero() { BigUint::zero() } else { s_component(&u, s)?.component };
    let divides = !component.is_zero() && (&component % &gcd).is_zero();
    Ok(ComponentWitness { index: k, cut, gcd, component, divides })
}

/// Runs every block check against the prime set `s`.
pub fn check_invariants(stream: &GeneratedStream, s: &PrimeSet) -> Result<Vec<BlockCheck>> {
    let b = stream.base();
    let mut out = Vec::with_capacity(stream.blocks.len());
    for (k, block) in stream.blocks.iter().enumerate() {
        let cut = stream.cuts[k];
        let u = numerator(&stream.digits, cut)?.value;
        let before = if block.start == 0 { BigUint::zero() } else { numerator(&stream.digits, block.start)?.value };
        let recurrence = cut == block.start + block.t && u == b.pow(block.t) * before + &block.value;
        let d = block.d as usize;
        let lo = num_traits::pow(BigUint::from(stream.primes.smallest()), d);
        let hi = num_traits::pow(BigUint::from(stream.primes.largest()), d);
        let weight_sandwich = lo <= block.node && block.node <= hi;
        let length_sandwich = block.t >= 1 && b.pow(block.t - 1) <= block.value && block.value < b.pow(block.t);
        let gcd_divides_component = scomponent_witness(stream, s, k + 1)?.divides;
        out.push(BlockCheck { index: block.index, recurrence, weight_sandwich, length_sandwich, gcd_divides_component });
    }
    Ok(out)
}
