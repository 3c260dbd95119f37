use thiserror::Error;

use crate::rational::{fmt_ratio, Rational};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("an atom space needs at least one atom")]
    EmptySpace,
    #[error("atom labels must be nonempty")]
    EmptyLabel,
    #[error("duplicate atom label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown atom label {0:?}")]
    UnknownLabel(String),
    #[error("atom index {index} is out of range for a space of {len} atoms")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operands live on different atom spaces")]
    SpaceMismatch,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("weight of atom {label:?} is negative ({})", fmt_ratio(.value))]
    NegativeWeight { label: String, value: Rational },
    #[error("the starting set has measure {} but must have strictly positive measure", fmt_ratio(.measure))]
    NotPositive { measure: Rational },
    #[error("not absolutely continuous: atom {witness:?} is null for the reference measure but carries mass")]
    NotAbsolutelyContinuous { witness: String },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("set is not a union of blocks of the algebra")]
    NotMeasurable,
    #[error("refinement chain is empty")]
    EmptyChain,
    #[error("level {level} of the chain does not refine level {}", .level - 1)]
    NotRefinement { level: usize },
    #[error("the finest level of a refinement chain must be the atomic partition")]
    ChainNotAtomic,
    #[error("density must be defined on the atomic algebra")]
    NotAtomic,
    #[error("set sequence cycle must be nonempty")]
    EmptyCycle,
    #[error("level band needs lower < upper (got {} and {})", fmt_ratio(.lower), fmt_ratio(.upper))]
    InvalidBand { lower: Box<Rational>, upper: Box<Rational> },
    #[error("threshold must be strictly positive")]
    NonPositiveThreshold,
    #[error("approximation order must be at least 1")]
    InvalidOrder,
    #[error("exhaustive sweep over {atoms} atoms exceeds the limit of {limit}; use the sampled mode instead")]
    TooLarge { atoms: usize, limit: usize },
    #[error("certified bound violated: {0}")]
    BoundViolated(String),
    #[error("divisor has no justified nonzero tail")]
    NoNonzeroTail,
    #[error("value is infinite and has no standard part")]
    Infinite,
    #[error("tolerance must be strictly positive")]
    InvalidTolerance,
    #[error("horizon must be at least {min}")]
    InvalidHorizon { min: u64 },
    #[error("function is not evaluable at {}", fmt_ratio(.0))]
    NotEvaluable(Rational),
    #[error("integrator decreases between {} and {}", fmt_ratio(.left), fmt_ratio(.right))]
    DecreasingIntegrator { left: Box<Rational>, right: Box<Rational> },
    #[error("invalid partition sequence at level {level}: {reason}")]
    InvalidPartitionSequence { level: u32, reason: String },
    #[error("declared hint is inconsistent with sampled values: {0}")]
    HintViolation(String),
    #[error("grid needs at least {min} points")]
    InvalidGrid { min: usize },
}
