use std::sync::Arc;

use super::space::{ensure_same, AtomSpace, MeasurableSet};
use crate::{Error, Result};

/// An eventually periodic sequence of sets: `prefix` followed by `cycle`
/// repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSequenceSpec {
    space: Arc<AtomSpace>,
    prefix: Vec<MeasurableSet>,
    cycle: Vec<MeasurableSet>,
}

impl SetSequenceSpec {
    pub fn new(prefix: Vec<MeasurableSet>, cycle: Vec<MeasurableSet>) -> Result<Self> {
        let space = Arc::clone(cycle.first().ok_or(Error::EmptyCycle)?.space());
        for set in prefix.iter().chain(&cycle) {
            ensure_same(&space, set.space())?;
        }
        Ok(Self { space, prefix, cycle })
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    pub fn prefix(&self) -> &[MeasurableSet] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[MeasurableSet] {
        &self.cycle
    }

    /// The k-th set of the sequence (0-based).
    pub fn nth(&self, k: usize) -> &MeasurableSet {
        if k < self.prefix.len() {
            &self.prefix[k]
        } else {
            &self.cycle[(k - self.prefix.len()) % self.cycle.len()]
        }
    }
}

/// ⋂ₙ ⋃_{k≥n} F_k: the atoms lying in infinitely many sets. For an
/// eventually periodic sequence this is exactly the union of the cycle.
pub fn limsup_sets(spec: &SetSequenceSpec) -> MeasurableSet {
    spec.cycle.iter().fold(MeasurableSet::empty(&spec.space), |acc, set| {
        acc.union(set).expect("spec sets share one space")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(space: &Arc<AtomSpace>, labels: &[&str]) -> MeasurableSet {
        MeasurableSet::from_labels(space, labels).unwrap()
    }

    #[test]
    fn limsup_examples() {
        let space = AtomSpace::new(["a", "b", "c"]).unwrap();
        let a = set(&space, &["a"]);
        let b = set(&space, &["b"]);
        let empty = MeasurableSet::empty(&space);

        let constant = SetSequenceSpec::new(vec![], vec![a.clone()]).unwrap();
        assert_eq!(limsup_sets(&constant), a);

        let alternating = SetSequenceSpec::new(vec![], vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(limsup_sets(&alternating), set(&space, &["a", "b"]));

        let transient = SetSequenceSpec::new(vec![a.clone(), a.clone()], vec![empty.clone()]).unwrap();
        assert_eq!(limsup_sets(&transient), empty);
        assert_eq!(transient.nth(1), &a);
        assert_eq!(transient.nth(7), &empty);
    }

    #[test]
    fn empty_cycle_is_rejected() {
        let space = AtomSpace::new(["a"]).unwrap();
        assert_eq!(
            SetSequenceSpec::new(vec![MeasurableSet::full(&space)], vec![]),
            Err(Error::EmptyCycle)
        );
    }
}
