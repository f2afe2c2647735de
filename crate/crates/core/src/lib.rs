//! Exact arithmetic for finite-factorial (FF) and partially-finite-factorial
//! (PFF) digit expansions.
//!
//! A real number in `(0, 1)` is read through the numerators `u_k` of its
//! base-`b` truncations. The crate evaluates the S-component criteria on
//! those numerators, generates explicit transcendental digit streams built by
//! concatenating S-smooth "nodes", walks the ancestor/child structure that
//! digit prefixes induce on smooth numbers, and builds least-FF expansions
//! for a given prefix.
//!
//! Everything that feeds a verdict is exact (`num-bigint`). The only floating
//! point lives in [`words`] (fractional logarithms and star discrepancy).
//!
//! Module map:
//! - [`radix`]: base-`b` words, expansions, truncation numerators.
//! - [`smooth`]: prime sets, nodes, S-components, node enumeration, factoring.
//! - [`criteria`]: FF / PFF verdicts per cut, factorial index, Liouville witness.
//! - [`generators`]: node-concatenation digit streams and their proof witnesses.
//! - [`dynasty`]: ancestors, parents, children, chains, least-FF construction.
//! - [`words`]: periodic words, generalized Fermat factors, smooth-word counts,
//!   discrepancy and extendability diagnostics.
//!
//! ```
//! use ffdigits::criteria::liouville_pff_witness;
//! use ffdigits::generators::{check_invariants, generate_nodes, NodeSequenceSpec};
//! use ffdigits::{Base, PrimeSet};
//!
//! let b = Base::new(10)?;
//! let s = PrimeSet::new(vec![2])?;
//! let stream = generate_nodes(b, &NodeSequenceSpec::factorial_gap(s.clone()), 37)?;
//! assert_eq!(stream.digits.to_string(), "1813107239614081257132168796771975168");
//! assert!(check_invariants(&stream, &s)?.iter().all(|c| c.all()));
//!
//! // PFF with eps = 1/2 at the cuts (i+3)! - 1 of the Liouville word
//! let witnesses = liouville_pff_witness(b, 3)?;
//! assert!(witnesses.iter().all(|w| w.record.pff && w.component_identity));
//! # Ok::<(), ffdigits::Error>(())
//! ```

pub mod criteria;
pub mod dynasty;
mod error;
pub mod generators;
pub mod precision;
pub mod radix;
pub mod serde_big;
pub mod smooth;
pub mod words;

pub use error::{Error, ErrorKind, Result};
pub use radix::{Base, DigitWord};
pub use smooth::{Node, PrimeSet};
