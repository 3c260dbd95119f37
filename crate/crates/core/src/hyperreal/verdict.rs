use std::fmt;

use super::Limit;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Holds => "holds",
            Self::Fails => "fails",
            Self::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// From `index` on (within the window) the quantity stays at least `gap` away.
    Index { index: u64, gap: Rational },
    /// Two points closer than the current mesh whose images differ by `gap`.
    Pair { x: Rational, y: Rational, gap: Rational },
    /// A declared limit that decided the outcome.
    Limit(Limit),
}

/// Result of a property check over a finite window of indices. `Holds` is
/// only produced from validated hints; raw sampling yields `Fails` or `Unknown`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Inclusive range of indices (or levels) that were inspected.
    pub window: (u64, u64),
    pub witness: Option<Witness>,
    pub reason: String,
}

impl Verdict {
    pub(crate) fn new(outcome: Outcome, window: (u64, u64), reason: impl Into<String>) -> Self {
        Self {
            outcome,
            window,
            witness: None,
            reason: reason.into(),
        }
    }

    pub(crate) fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }
}
