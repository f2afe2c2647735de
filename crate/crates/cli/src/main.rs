//! `ffdigits`: command-line front end. Every run is determined by its
//! argument vector; results go to stdout, a JSON error record to stderr.

mod commands;
mod output;
mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffdigits::ErrorKind;
use num_bigint::BigUint;

use output::Format;

// Fully qualified `Vec` keeps clap from treating a list as repeated values.
#[derive(Parser)]
#[command(name = "ffdigits", version, about = "Exact FF/PFF digit-expansion toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BaseArg {
    /// Radix b >= 2.
    #[arg(long, short = 'b')]
    base: u32,
}

#[derive(Args)]
struct PrimesArg {
    /// Comma-separated primes.
    #[arg(long, short = 'p', value_parser = parse::u64_list)]
    primes: ::std::vec::Vec<u64>,
}

#[derive(Args)]
struct OptPrimesArg {
    /// Comma-separated primes; defaults to the prime factors of the base.
    #[arg(long, short = 'p', value_parser = parse::u64_list)]
    primes: Option<::std::vec::Vec<u64>>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Family {
    /// m_i = Π p^(i·i! - 1), i.e. exponent (i+1)! - i! - 1
    FactorialGap,
    /// m_i = Π p^(radix^i)
    PowerTower,
    /// factorial-gap over the primes of the base
    LiouvilleNodes,
    /// first prime p^(radix^i), every other prime q^i
    PerturbedTower,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Support {
    MatchBase,
    WithinBase,
    Any,
}

#[derive(Args)]
pub struct GenArgs {
    #[command(flatten)]
    base: BaseArg,
    #[arg(long, value_enum, default_value_t = Family::FactorialGap)]
    family: Family,
    #[command(flatten)]
    primes: OptPrimesArg,
    /// Tower radix.
    #[arg(long, default_value_t = 2)]
    radix: u64,
    /// First node index.
    #[arg(long, default_value_t = 1)]
    start: u64,
    /// One exponent vector per line; replaces --family.
    #[arg(long)]
    exponents_file: Option<PathBuf>,
    /// Digit budget.
    #[arg(long, short = 'n')]
    digits: usize,
    #[arg(long, value_enum, default_value_t = Support::WithinBase)]
    support: Support,
    /// Also verify every block (recurrence, sandwiches, gcd witness).
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Weights {
    Unit,
    Index,
}

#[derive(Subcommand)]
enum Command {
    /// Base-b expansion of a natural number.
    Expand {
        #[command(flatten)]
        base: BaseArg,
        #[arg(long, value_parser = parse::natural)]
        value: BigUint,
    },
    /// Truncation numerators u_k of a word.
    Numerator {
        #[command(flatten)]
        base: BaseArg,
        #[arg(long)]
        word: String,
        /// Cuts to report; all of 1..=len by default.
        #[arg(long, value_parser = parse::ranges)]
        cuts: Option<::std::vec::Vec<u64>>,
    },
    /// S-component and node test of a natural number.
    Smooth {
        #[command(flatten)]
        primes: PrimesArg,
        #[arg(long, value_parser = parse::natural)]
        value: BigUint,
        /// Also factor the number completely (budgeted).
        #[arg(long)]
        factor: bool,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
    /// FF verdict at each cut.
    Ffcheck {
        #[command(flatten)]
        base: BaseArg,
        #[command(flatten)]
        primes: OptPrimesArg,
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = parse::ranges)]
        cuts: Option<::std::vec::Vec<u64>>,
    },
    /// PFF verdict at each cut for a ratio eps = p/q.
    Pffcheck {
        #[command(flatten)]
        base: BaseArg,
        #[command(flatten)]
        primes: OptPrimesArg,
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = parse::ranges)]
        cuts: Option<::std::vec::Vec<u64>>,
        #[arg(long, default_value = "1/2")]
        eps: String,
    },
    /// Concatenated node expansions.
    Gen5(GenArgs),
    /// Node expansions with a filler word after every block.
    Gen6 {
        #[command(flatten)]
        gen: GenArgs,
        /// Filler digits.
        #[arg(long)]
        filler: String,
    },
    /// Expansions of weighted nodes w_i·m_i.
    Gen7 {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, value_enum, default_value_t = Weights::Index)]
        weights: Weights,
    },
    /// Every node whose expansion is a proper prefix of the value's.
    Ancestors {
        #[command(flatten)]
        base: BaseArg,
        #[command(flatten)]
        primes: PrimesArg,
        #[arg(long, value_parser = parse::natural)]
        value: BigUint,
    },
    /// The longest proper ancestor.
    Parent {
        #[command(flatten)]
        base: BaseArg,
        #[command(flatten)]
        primes: PrimesArg,
        #[arg(long, value_parser = parse::natural)]
        value: BigUint,
    },
    /// Children (or all descendants) of a word, by scanning extensions.
    Children {
        #[command(flatten)]
        base: BaseArg,
        #[command(flatten)]
        primes: PrimesArg,
        /// Origin word; alternatively --value.
        #[arg(long, conflicts_with = "value", required_unless_present = "value")]
        word: Option<String>,
        #[arg(long, value_parser = parse::natural)]
        value: Option<BigUint>,
        /// Extra digits scanned.
        #[arg(long, default_value_t = 8)]
        max_extra: usize,
        /// Only the k least children.
        #[arg(long, conflicts_with = "descendants")]
        least: Option<usize>,
        /// List every descendant, not only children.
        #[arg(long)]
        descendants: bool,
    },
    /// Chains of parents ending at each target.
    Chains {
        #[command(flatten)]
        base: BaseArg,
        #[command(flatten)]
        primes: PrimesArg,
        /// Comma-separated targets.
        #[arg(long, value_parser = parse::naturals, required_unless_present = "power_of")]
        targets: Option<::std::vec::Vec<BigUint>>,
        /// Targets are powers of this number ...
        #[arg(long, requires = "exponents", conflicts_with = "targets")]
        power_of: Option<u64>,
        /// ... with these exponents, e.g. 0-54,69,72.
        #[arg(long, value_parser = parse::ranges)]
        exponents: Option<::std::vec::Vec<u64>>,
        /// Keep only chains not contained in another.
        #[arg(long)]
        maximal: bool,
    },
    /// Least-FF expansion grown from a prefix.
    Leastff {
        #[command(flatten)]
        base: BaseArg,
        #[command(flatten)]
        primes: PrimesArg,
        #[arg(long)]
        prefix: String,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Extra digits scanned per step.
        #[arg(long, default_value_t = 24)]
        cap: usize,
        /// Also report the second least child at every step.
        #[arg(long)]
        runner_ups: bool,
    },
    /// Generalized Fermat factors q_j of the repunit of length s^k.
    Qfactors {
        #[command(flatten)]
        base: BaseArg,
        /// Prime s.
        #[arg(long, short = 's')]
        prime: u64,
        #[arg(long, short = 'k')]
        k: u32,
    },
    /// Exact count of S-smooth numbers below b^k against both bounds.
    Count {
        #[command(flatten)]
        base: BaseArg,
        #[command(flatten)]
        primes: PrimesArg,
        /// Largest k; every k from --from upward is reported.
        #[arg(long, short = 'k')]
        k: usize,
        #[arg(long, default_value_t = 1)]
        from: usize,
    },
    /// Star discrepancy of the fractional parts of log_b over the first nodes.
    Discrepancy {
        #[command(flatten)]
        base: BaseArg,
        #[command(flatten)]
        primes: PrimesArg,
        /// Number of nodes (all >= 2, ascending).
        #[arg(long, short = 'n')]
        count: usize,
        /// Sample sizes to report; powers of ten up to --count by default.
        #[arg(long, value_parser = parse::ranges)]
        checkpoints: Option<::std::vec::Vec<u64>>,
    },
    /// PFF witnesses for the Liouville number at cuts (i+3)! - 1.
    Liouville {
        #[command(flatten)]
        base: BaseArg,
        #[arg(long, default_value_t = 3)]
        i_max: usize,
        /// Print the first N digits of the word instead.
        #[arg(long)]
        digits: Option<usize>,
    },
}

#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Io(String),
    Lib(ffdigits::Error),
}

impl From<ffdigits::Error> for Failure {
    fn from(e: ffdigits::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn record(&self) -> (u8, serde_json::Value) {
        let (code, kind, tag, message) = match self {
            Failure::Parse(m) => (2, "parse", "parse", m.clone()),
            Failure::Io(m) => (2, "parse", "io", m.clone()),
            Failure::Lib(e) => match e.kind() {
                ErrorKind::Domain => (3, "domain", e.tag(), e.to_string()),
                ErrorKind::Resource => (4, "resource", e.tag(), e.to_string()),
            },
        };
        (code, serde_json::json!({ "error": tag, "kind": kind, "exit_code": code, "message": message }))
    }
}

fn fail(f: &Failure) -> ExitCode {
    let (code, rec) = f.record();
    eprintln!("{rec}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::Parse(e.to_string().trim_end().to_string())),
    };
    match commands::run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.render(cli.format).as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => fail(&f),
    }
}
