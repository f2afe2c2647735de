use std::fmt::Write as _;

use ffdigits::criteria::{ff_check, liouville_pff_witness, liouville_word, pff_check, RatioBound, TruncationRecord, LIOUVILLE_MAX_DIGITS};
use ffdigits::dynasty::{ancestors, chains, children, descendants, k_least_children, least_ff, length_histogram, maximal_chains, parent, runner_ups};
use ffdigits::generators::{check_invariants, generate, FillerSpec, GenOptions, NodeSequenceSpec, Preset, SupportPolicy, WeightSpec};
use ffdigits::precision::Precision;
use ffdigits::radix::{expand, numerators_at};
use ffdigits::smooth::{factorize, least_nodes, s_component};
use ffdigits::words::{count_smooth_words, discrepancy_series, fractional_log_parts, q_coprimality, q_factor, verify_q_product};
use ffdigits::{Base, Error, Node, PrimeSet};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::output::{joined, spaced, Output, Table};
use crate::{parse, Command, Failure, Family, GenArgs, Support, Weights};

type Res = Result<Output, Failure>;

fn base(b: u32) -> Result<Base, Failure> {
    Ok(Base::new(b)?)
}

fn primes(p: &[u64]) -> Result<PrimeSet, Failure> {
    Ok(PrimeSet::new(p.to_vec())?)
}

fn primes_or_base(p: &Option<Vec<u64>>, b: Base) -> Result<PrimeSet, Failure> {
    match p {
        Some(p) => primes(p),
        None => Ok(PrimeSet::of_base(b)),
    }
}

fn usize_cuts(cuts: Option<Vec<u64>>, len: usize) -> Result<Vec<usize>, Failure> {
    match cuts {
        None => Ok((1..=len).collect()),
        Some(c) => c.into_iter().map(|k| usize::try_from(k).map_err(|_| Failure::Parse(format!("cut {k} too large")))).collect(),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

/// `2^3·5` style rendering of a node's factorization.
fn factored(n: &Node) -> String {
    let parts: Vec<String> = n
        .primes
        .primes()
        .iter()
        .zip(&n.exponents)
        .filter(|(_, &e)| e > 0)
        .map(|(p, &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

fn node_line(n: &Node, b: Base) -> String {
    let w = expand(&n.value, b).map(|w| w.to_string()).unwrap_or_default();
    format!("{} = {}  [{}]", n.value, factored(n), w)
}

fn node_table(nodes: &[Node], b: Base) -> Table {
    let mut t = Table::new(vec!["value", "exponents", "word"]);
    for n in nodes {
        let w = expand(&n.value, b).map(|w| spaced(w.digits())).unwrap_or_default();
        t.row(vec![n.value.to_string(), joined(&n.exponents, " "), w]);
    }
    t
}

pub fn run(cmd: Command) -> Res {
    match cmd {
        Command::Expand { base: b, value } => expand_cmd(base(b.base)?, &value),
        Command::Numerator { base: b, word, cuts } => {
            let b = base(b.base)?;
            let w = parse::word(&word, b)?;
            let cuts = usize_cuts(cuts, w.len())?;
            let us = numerators_at(&w, &cuts)?;
            let mut plain = String::new();
            let mut t = Table::new(vec!["cut", "numerator"]);
            for (k, u) in cuts.iter().zip(&us) {
                let _ = writeln!(plain, "u_{k} = {u}");
                t.row(vec![k.to_string(), u.to_string()]);
            }
            let rows: Vec<Value> = cuts.iter().zip(&us).map(|(k, u)| json!({"cut": k, "numerator": u.to_string()})).collect();
            Ok(Output { plain, json: json!({"base": b.get(), "word": w.digits(), "numerators": rows}), table: t })
        }
        Command::Smooth { primes: p, value, factor, budget } => smooth_cmd(&primes(&p.primes)?, &value, factor, budget),
        Command::Ffcheck { base: b, primes: p, word, cuts } => {
            let b = base(b.base)?;
            let s = primes_or_base(&p.primes, b)?;
            let w = parse::word(&word, b)?;
            let cuts = usize_cuts(cuts, w.len())?;
            Ok(records_output(&ff_check(&w, &s, &cuts)?, &s, None))
        }
        Command::Pffcheck { base: b, primes: p, word, cuts, eps } => {
            let b = base(b.base)?;
            let s = primes_or_base(&p.primes, b)?;
            let w = parse::word(&word, b)?;
            let cuts = usize_cuts(cuts, w.len())?;
            let eps = RatioBound::parse(&eps)?;
            Ok(records_output(&pff_check(&w, &s, eps, &cuts)?, &s, Some(eps)))
        }
        Command::Gen5(g) => gen_cmd(&g, GenOptions::default()),
        Command::Gen6 { gen, filler } => {
            let b = base(gen.base.base)?;
            let f = parse::word(&filler, b)?;
            gen_cmd(&gen, GenOptions { fillers: Some(FillerSpec::Fixed(f)), ..Default::default() })
        }
        Command::Gen7 { gen, weights } => {
            let w = match weights {
                Weights::Unit => WeightSpec::Unit,
                Weights::Index => WeightSpec::Index,
            };
            gen_cmd(&gen, GenOptions { weights: Some(w), ..Default::default() })
        }
        Command::Ancestors { base: b, primes: p, value } => {
            let b = base(b.base)?;
            let nodes = ancestors(&value, &primes(&p.primes)?, b)?;
            Ok(nodes_output(&nodes, b, json!({"value": value.to_string()})))
        }
        Command::Parent { base: b, primes: p, value } => {
            let b = base(b.base)?;
            let node = parent(&value, &primes(&p.primes)?, b)?;
            let plain = node.as_ref().map_or_else(|| "none".to_string(), |n| node_line(n, b));
            let nodes: Vec<Node> = node.iter().cloned().collect();
            Ok(Output {
                plain,
                json: json!({"value": value.to_string(), "parent": to_json(&node)}),
                table: node_table(&nodes, b),
            })
        }
        Command::Children { base: b, primes: p, word, value, max_extra, least, descendants: all } => {
            let b = base(b.base)?;
            let s = primes(&p.primes)?;
            let origin = match (word, value) {
                (Some(w), _) => parse::word(&w, b)?,
                (None, Some(v)) => expand(&v, b)?,
                (None, None) => return Err(Failure::Parse("need --word or --value".into())),
            };
            let nodes = match (least, all) {
                (Some(k), _) => k_least_children(&origin, &s, k, max_extra)?,
                (None, true) => descendants(&origin, &s, max_extra)?,
                (None, false) => children(&origin, &s, max_extra)?,
            };
            Ok(nodes_output(&nodes, b, json!({"origin": origin.digits(), "max_extra_digits": max_extra})))
        }
        Command::Chains { base: b, primes: p, targets, power_of, exponents, maximal } => {
            let b = base(b.base)?;
            let s = primes(&p.primes)?;
            let targets = match (targets, power_of, exponents) {
                (Some(t), _, _) => t,
                (None, Some(q), Some(es)) => es
                    .into_iter()
                    .map(|e| u32::try_from(e).map(|e| BigUint::from(q).pow(e)).map_err(|_| Failure::Parse(format!("exponent {e} too large"))))
                    .collect::<Result<_, _>>()?,
                _ => return Err(Failure::Parse("need --targets or --power-of with --exponents".into())),
            };
            let cs = if maximal { maximal_chains(&s, b, &targets)? } else { chains(&s, b, &targets)? };
            let hist = length_histogram(&cs);
            let mut plain = String::new();
            let mut t = Table::new(vec!["target", "length", "members", "path"]);
            for c in &cs {
                let _ = writeln!(plain, "[{}] {}", c.length, c.render());
                t.row(vec![c.members.last().expect("non-empty").to_string(), c.length.to_string(), joined(&c.members, " "), c.render()]);
            }
            let h: Vec<String> = hist.iter().map(|(l, n)| format!("{n} x len{l}")).collect();
            let _ = write!(plain, "{} chains: {}", cs.len(), h.join(", "));
            let hist_json: serde_json::Map<String, Value> = hist.iter().map(|(l, n)| (l.to_string(), json!(n))).collect();
            Ok(Output { plain, json: json!({"chains": to_json(&cs), "histogram": hist_json}), table: t })
        }
        Command::Leastff { base: b, primes: p, prefix, steps, cap, runner_ups: with_ru } => {
            let b = base(b.base)?;
            let s = primes(&p.primes)?;
            let prefix = parse::word(&prefix, b)?;
            let r = least_ff(&prefix, &s, steps, cap)?;
            let ru = if with_ru { Some(runner_ups(&r, &s, cap)?) } else { None };
            let mut plain = format!("digits {}\nnodes {}\n", r.digits, joined(&r.nodes.iter().map(|n| n.value.clone()).collect::<Vec<_>>(), ","));
            let mut t = Table::new(vec!["step", "node", "exponents", "appended", "cut", "runner_up"]);
            for (i, ((n, ext), cut)) in r.nodes.iter().zip(&r.appended).zip(&r.cuts).enumerate() {
                let second = ru.as_ref().and_then(|v| v[i].as_ref());
                let _ = write!(plain, "step {}: +{} -> {} = {}", i + 1, ext, n.value, factored(n));
                if let Some(m) = second {
                    let _ = write!(plain, "  (runner-up {} = {})", m.value, factored(m));
                }
                plain.push('\n');
                t.row(vec![
                    (i + 1).to_string(),
                    n.value.to_string(),
                    joined(&n.exponents, " "),
                    spaced(ext.digits()),
                    cut.to_string(),
                    second.map(|m| m.value.to_string()).unwrap_or_default(),
                ]);
            }
            let mut json = to_json(&r);
            if let Some(ru) = &ru {
                json["runner_ups"] = to_json(ru);
            }
            Ok(Output { plain, json, table: t })
        }
        Command::Qfactors { base: b, prime, k } => qfactors_cmd(base(b.base)?, prime, k),
        Command::Count { base: b, primes: p, k, from } => {
            let b = base(b.base)?;
            let s = primes(&p.primes)?;
            if from == 0 || from > k {
                return Err(Error::InvalidArgument(format!("need 1 <= from <= k, got from = {from}, k = {k}")).into());
            }
            let reports = (from..=k).map(|k| count_smooth_words(&s, b, k)).collect::<Result<Vec<_>, _>>()?;
            let mut plain = String::new();
            let mut t = Table::new(vec!["S", "b", "k", "exact", "naive_bound", "corrected_bound", "naive_bound_holds", "corrected_bound_holds"]);
            for r in &reports {
                let _ = writeln!(
                    plain,
                    "k={} exact={} naive_bound={:.4}{} corrected_bound={:.4}{}",
                    r.k,
                    r.exact,
                    r.naive_bound,
                    if r.naive_bound_holds { "" } else { " (violated)" },
                    r.corrected_bound,
                    if r.corrected_bound_holds { "" } else { " (violated)" },
                );
                t.row(vec![
                    r.primes.to_string(),
                    r.base.to_string(),
                    r.k.to_string(),
                    r.exact.to_string(),
                    r.naive_bound.to_string(),
                    r.corrected_bound.to_string(),
                    r.naive_bound_holds.to_string(),
                    r.corrected_bound_holds.to_string(),
                ]);
            }
            Ok(Output { plain, json: to_json(&reports), table: t })
        }
        Command::Discrepancy { base: b, primes: p, count, checkpoints } => {
            discrepancy_cmd(base(b.base)?, &primes(&p.primes)?, count, checkpoints)
        }
        Command::Liouville { base: b, i_max, digits } => {
            let b = base(b.base)?;
            match digits {
                Some(n) if n > LIOUVILLE_MAX_DIGITS => {
                    Err(Error::ResourceLimit(format!("{n} digits requested, cap is {LIOUVILLE_MAX_DIGITS}")).into())
                }
                Some(n) => {
                    let w = liouville_word(b, n);
                    let mut t = Table::new(vec!["position", "digit"]);
                    for (i, d) in w.digits().iter().enumerate() {
                        t.row(vec![(i + 1).to_string(), d.to_string()]);
                    }
                    Ok(Output { plain: w.to_string(), json: json!({"base": b.get(), "digits": w.digits()}), table: t })
                }
                None => liouville_cmd(b, i_max),
            }
        }
    }
}

fn expand_cmd(b: Base, value: &BigUint) -> Res {
    let w = expand(value, b)?;
    let mut t = Table::new(vec!["value", "base", "digits"]);
    t.row(vec![value.to_string(), b.to_string(), spaced(w.digits())]);
    Ok(Output { plain: w.to_string(), json: json!({"value": value.to_string(), "base": b.get(), "digits": w.digits()}), table: t })
}

fn smooth_cmd(s: &PrimeSet, value: &BigUint, factor: bool, budget: u64) -> Res {
    let c = s_component(value, s)?;
    let node = c.is_smooth();
    let mut plain = format!("S-component {} (exponents {}), cofactor {}, node {}", c.component, joined(&c.exponents, " "), c.cofactor, node);
    let mut t = Table::new(vec!["value", "component", "exponents", "cofactor", "node"]);
    t.row(vec![value.to_string(), c.component.to_string(), joined(&c.exponents, " "), c.cofactor.to_string(), node.to_string()]);
    let mut json = json!({"value": value.to_string(), "primes": to_json(s), "s_component": to_json(&c), "is_node": node});
    if factor {
        let f = factorize(value, budget)?;
        let parts: Vec<String> = f.primes.iter().map(|(p, &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        let _ = write!(plain, "\nfactors {}", if parts.is_empty() { "1".into() } else { parts.join("·") });
        if !f.complete {
            let _ = write!(plain, " · [{} unfactored]", f.residual);
        }
        json["factorization"] = to_json(&f);
    }
    Ok(Output { plain, json, table: t })
}

fn records_output(recs: &[TruncationRecord], s: &PrimeSet, eps: Option<RatioBound>) -> Output {
    let mut plain = String::new();
    let mut t = Table::new(vec!["cut", "numerator", "s_component", "ff", "pff", "first_nonzero_digit_position", "valid"]);
    for r in recs {
        let verdict = match eps {
            None => format!("ff={}", r.ff),
            Some(_) => format!("pff={}", r.pff),
        };
        let _ = writeln!(plain, "k={} u={} component={} {}{}", r.cut, r.numerator, r.s_component, verdict, if r.valid { "" } else { " (invalid cut)" });
        t.row(vec![
            r.cut.to_string(),
            r.numerator.to_string(),
            r.s_component.to_string(),
            r.ff.to_string(),
            r.pff.to_string(),
            r.first_nonzero_digit_position.map(|p| p.to_string()).unwrap_or_default(),
            r.valid.to_string(),
        ]);
    }
    let json = json!({"primes": to_json(s), "eps": eps.map(|e| e.to_string()), "records": to_json(&recs)});
    Output { plain, json, table: t }
}

fn nodes_output(nodes: &[Node], b: Base, mut context: Value) -> Output {
    let plain = nodes.iter().map(|n| node_line(n, b)).collect::<Vec<_>>().join("\n");
    context["nodes"] = to_json(&nodes);
    Output { plain: if plain.is_empty() { "none".into() } else { plain }, json: context, table: node_table(nodes, b) }
}

fn read_exponents(path: &std::path::Path) -> Result<Vec<Vec<u64>>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse::u64_list(l).map_err(Failure::Parse))
        .collect()
}

fn node_spec(g: &GenArgs, b: Base) -> Result<NodeSequenceSpec, Failure> {
    if let Some(path) = &g.exponents_file {
        let s = primes(g.primes.primes.as_deref().ok_or_else(|| Failure::Parse("--exponents-file needs --primes".into()))?)?;
        return Ok(NodeSequenceSpec::explicit(s, read_exponents(path)?)?);
    }
    let preset = match g.family {
        Family::FactorialGap => Preset::FactorialGap,
        Family::PowerTower => Preset::PowerTower,
        Family::LiouvilleNodes => Preset::LiouvilleNodes,
        Family::PerturbedTower => Preset::PerturbedTower,
    };
    let s = g.primes.primes.as_deref().map(primes).transpose()?;
    Ok(preset.spec(b, s, g.radix, g.start)?)
}

fn gen_cmd(g: &GenArgs, mut opts: GenOptions) -> Res {
    let b = base(g.base.base)?;
    let spec = node_spec(g, b)?;
    opts.support = match g.support {
        Support::MatchBase => SupportPolicy::MatchBase,
        Support::WithinBase => SupportPolicy::WithinBase,
        Support::Any => SupportPolicy::Any,
    };
    let stream = generate(b, &spec, g.digits, &opts)?;
    let mut plain = format!("{}\ncuts {}", stream.digits, joined(&stream.cuts, ","));
    let mut json = to_json(&stream);
    if g.check {
        let checks = check_invariants(&stream, &stream.primes)?;
        let ok = checks.iter().filter(|c| c.all()).count();
        let _ = write!(plain, "\nchecks {ok}/{} blocks pass", checks.len());
        json["checks"] = to_json(&checks);
    }
    let mut t = Table::new(vec!["index", "node", "weight", "value", "exponents", "d", "t", "start", "cut"]);
    for (bl, cut) in stream.blocks.iter().zip(&stream.cuts) {
        t.row(vec![
            bl.index.to_string(),
            bl.node.to_string(),
            bl.weight_factor.to_string(),
            bl.value.to_string(),
            joined(&bl.exponents, " "),
            bl.d.to_string(),
            bl.t.to_string(),
            bl.start.to_string(),
            cut.to_string(),
        ]);
    }
    Ok(Output { plain, json, table: t })
}

fn qfactors_cmd(b: Base, s: u64, k: u32) -> Res {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()).into());
    }
    let identity = verify_q_product(b, s, k)?;
    let mut plain = String::new();
    let mut rows = Vec::new();
    let mut t = Table::new(vec!["j", "q_j", "gcd_with_earlier", "gcd_divides_s"]);
    for j in 1..=k {
        let q = q_factor(b, s, j)?;
        let g = if j >= 2 { Some(q_coprimality(b, s, j)?) } else { None };
        let divides = g.as_ref().map(|g| (BigUint::from(s) % g) == BigUint::ZERO);
        let _ = write!(plain, "q_{j} = {}", q.value);
        if let Some(g) = &g {
            let _ = write!(plain, "  gcd with earlier factors {g}");
        }
        plain.push('\n');
        t.row(vec![
            j.to_string(),
            q.value.to_string(),
            g.as_ref().map(|g| g.to_string()).unwrap_or_default(),
            divides.map(|d| d.to_string()).unwrap_or_default(),
        ]);
        rows.push(json!({"factor": to_json(&q), "gcd_with_earlier": g.map(|g| g.to_string()), "gcd_divides_s": divides}));
    }
    let _ = write!(plain, "product equals repunit of length {s}^{k}: {identity}");
    Ok(Output { plain, json: json!({"base": b.get(), "s": s, "k": k, "factors": rows, "product_identity": identity}), table: t })
}

fn discrepancy_cmd(b: Base, s: &PrimeSet, count: usize, checkpoints: Option<Vec<u64>>) -> Res {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()).into());
    }
    let values: Vec<BigUint> = least_nodes(s, &BigUint::from(2u32), count, 1 << 20)?.into_iter().map(|n| n.value).collect();
    let points = fractional_log_parts(&values, b, Precision::new(128)?)?;
    let checkpoints: Vec<usize> = match checkpoints {
        Some(c) => c.into_iter().map(|k| k as usize).collect(),
        None => {
            let mut c: Vec<usize> = std::iter::successors(Some(10usize), |&x| x.checked_mul(10)).take_while(|&x| x < count).collect();
            c.push(count);
            c
        }
    };
    let series = discrepancy_series(&points, &checkpoints)?;
    let mut plain = String::new();
    let mut t = Table::new(vec!["n", "discrepancy"]);
    for (n, d) in &series {
        let _ = writeln!(plain, "N={n} D*={d:.6}");
        t.row(vec![n.to_string(), d.to_string()]);
    }
    let rows: Vec<Value> = series.iter().map(|(n, d)| json!({"n": n, "discrepancy": d})).collect();
    Ok(Output { plain, json: json!({"base": b.get(), "primes": to_json(s), "series": rows}), table: t })
}

fn liouville_cmd(b: Base, i_max: usize) -> Res {
    let ws = liouville_pff_witness(b, i_max)?;
    let mut plain = String::new();
    let mut t = Table::new(vec!["i", "cut", "pff", "s_component", "expected_component", "component_identity"]);
    for w in &ws {
        let _ = writeln!(
            plain,
            "i={} cut={} pff={} component=b^{} identity={}",
            w.i,
            w.record.cut,
            w.record.pff,
            ffdigits::radix::digit_len(&w.expected_component, b).saturating_sub(1),
            w.component_identity
        );
        t.row(vec![
            w.i.to_string(),
            w.record.cut.to_string(),
            w.record.pff.to_string(),
            w.record.s_component.to_string(),
            w.expected_component.to_string(),
            w.component_identity.to_string(),
        ]);
    }
    Ok(Output { plain, json: to_json(&ws), table: t })
}
