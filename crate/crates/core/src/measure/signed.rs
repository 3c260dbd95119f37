use std::ops::Deref;
use std::sync::Arc;

use num::{Signed, Zero};

use super::space::{ensure_same, AtomSpace, MeasurableSet};
use crate::{Error, Rational, Result};

/// Finitely additive, exactly weighted set function on an [`AtomSpace`].
///
/// The measure of a set is the sum of its member-atom weights, so additivity
/// holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMeasure {
    space: Arc<AtomSpace>,
    weights: Vec<Rational>,
}

impl SignedMeasure {
    pub fn new(space: &Arc<AtomSpace>, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: weights.len(),
            });
        }
        Ok(Self {
            space: Arc::clone(space),
            weights,
        })
    }

    pub fn zero(space: &Arc<AtomSpace>) -> Self {
        Self {
            space: Arc::clone(space),
            weights: vec![Rational::zero(); space.len()],
        }
    }

    /// Builds a measure from `(label, weight)` pairs; unlisted atoms weigh zero.
    pub fn from_labels<'a, I>(space: &Arc<AtomSpace>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let mut measure = Self::zero(space);
        for (label, weight) in pairs {
            measure.weights[space.index_of(label)?] = weight;
        }
        Ok(measure)
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> &Rational {
        &self.weights[atom]
    }

    /// Exact sum of the weights of the members of `set`.
    pub fn measure_of(&self, set: &MeasurableSet) -> Result<Rational> {
        ensure_same(&self.space, set.space())?;
        Ok(set.atoms().map(|atom| &self.weights[atom]).sum())
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// The measure S ↦ μ(S ∩ set).
    pub fn restrict(&self, set: &MeasurableSet) -> Result<Self> {
        ensure_same(&self.space, set.space())?;
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(atom, w)| {
                if set.contains(atom) {
                    w.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(Self {
            space: Arc::clone(&self.space),
            weights,
        })
    }

    pub fn negated(&self) -> Self {
        Self {
            space: Arc::clone(&self.space),
            weights: self.weights.iter().map(|w| -w).collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weights.iter().all(|w| !w.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }

    /// Atoms with strictly negative weight.
    pub fn negative_atoms(&self) -> MeasurableSet {
        self.atoms_where(|w| w.is_negative())
    }

    pub(crate) fn atoms_where(&self, pred: impl Fn(&Rational) -> bool) -> MeasurableSet {
        let mut set = MeasurableSet::empty(&self.space);
        for (atom, w) in self.weights.iter().enumerate() {
            if pred(w) {
                set.insert(atom);
            }
        }
        set
    }
}

/// A [`SignedMeasure`] whose weights are all nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure(SignedMeasure);

impl Measure {
    pub fn new(space: &Arc<AtomSpace>, weights: Vec<Rational>) -> Result<Self> {
        Self::try_from(SignedMeasure::new(space, weights)?)
    }

    pub fn zero(space: &Arc<AtomSpace>) -> Self {
        Self(SignedMeasure::zero(space))
    }

    pub fn from_labels<'a, I>(space: &Arc<AtomSpace>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        Self::try_from(SignedMeasure::from_labels(space, pairs)?)
    }

    pub fn as_signed(&self) -> &SignedMeasure {
        &self.0
    }

    pub fn into_signed(self) -> SignedMeasure {
        self.0
    }

    /// Smallest strictly positive atom mass, if any atom has positive mass.
    pub fn min_positive_mass(&self) -> Option<Rational> {
        self.0.weights.iter().filter(|w| w.is_positive()).min().cloned()
    }

    /// Atoms of zero mass.
    pub fn null_atoms(&self) -> MeasurableSet {
        self.0.atoms_where(Zero::is_zero)
    }
}

impl TryFrom<SignedMeasure> for Measure {
    type Error = Error;

    fn try_from(measure: SignedMeasure) -> Result<Self> {
        if let Some(atom) = measure.weights.iter().position(|w| w.is_negative()) {
            return Err(Error::NegativeWeight {
                label: measure.space.label(atom).to_owned(),
                value: measure.weights[atom].clone(),
            });
        }
        Ok(Self(measure))
    }
}

impl Deref for Measure {
    type Target = SignedMeasure;

    fn deref(&self) -> &SignedMeasure {
        &self.0
    }
}

impl AsRef<SignedMeasure> for Measure {
    fn as_ref(&self) -> &SignedMeasure {
        &self.0
    }
}
