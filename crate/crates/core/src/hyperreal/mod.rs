//! Hyperreals in the sequence model: a hyperreal is a rule index ↦ rational,
//! and a statement about it is true when it holds for all sufficiently
//! large indices. Only finitely many indices can ever be inspected, so
//! checks return a three-valued [`Verdict`], and positive answers rest on
//! declared [`Hints`] that are validated against sampled values.

mod analysis;
mod calculus;
mod number;
mod verdict;

pub use analysis::{check_limit, classify, hints_consistent, infinitely_close, standard_part, Classification};
pub use calculus::{
    check_uniform_continuity, partition_agreement, rs_integral, rs_sum, LevelSum, Modulus, PartitionAgreement,
    PartitionSequence, RealFn, RsEstimate,
};
pub use number::{arith, ArithOp, Direction, Hints, HyperReal, Limit, Monotone};
pub use verdict::{Outcome, Verdict, Witness};
