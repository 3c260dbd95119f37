//! Exact-arithmetic toolkit for Radon–Nikodym derivatives on finite measure
//! spaces, plus a computable sequence model of hyperreal arithmetic.
//!
//! The crate is organised as:
//!
//! * [`measure`]: atom spaces, measurable sets, signed measures, finite
//!   algebras, Hahn/Jordan decomposition, absolute continuity and limsup sets.
//! * [`construct`]: atom-ratio densities on finite algebras, level sets,
//!   dyadic approximants with certified L1 bounds, refinement chains and the
//!   end-to-end derivative construction.
//! * [`hyperreal`]: rational sequences under eventual-truth semantics with
//!   three-valued verdicts, standard parts, limit and continuity checks, and
//!   Riemann–Stieltjes sums over refining partitions.
//! * [`oracle`]: brute-force reference implementations (subset enumeration).
//! * [`gen`]: seeded random instance generators used by tests and the CLI.
//!
//! All measure-theoretic values are exact [`Rational`]s.

pub mod construct;
mod error;
pub mod gen;
pub mod hyperreal;
pub mod measure;
pub mod oracle;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
