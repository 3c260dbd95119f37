//! Positive sets, Hahn and Jordan decompositions, and absolute continuity.

use num::bigint::BigInt;
use num::{Integer, Signed, Zero};

use super::signed::{Measure, SignedMeasure};
use super::space::{ensure_same, MeasurableSet};
use crate::{Error, Rational, Result};

/// One step of the deficiency-removal procedure: `removed` has measure at
/// most `-1/n0`, where `n0` is the least natural number for which such a
/// subset of the remaining set exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Removal {
    pub removed: MeasurableSet,
    pub measure: Rational,
    pub n0: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveSubset {
    pub set: MeasurableSet,
    pub removals: Vec<Removal>,
}

/// Extracts P ⊆ `p0` with μ(P) > 0 on which μ is nonnegative on every subset.
///
/// Repeatedly removes from the remaining set a subset of measure ≤ −1/n₀
/// with n₀ least, until no subset of negative measure is left.
pub fn construct_positive_subset(mu: &SignedMeasure, p0: &MeasurableSet) -> Result<MeasurableSet> {
    construct_positive_subset_traced(mu, p0).map(|p| p.set)
}

pub fn construct_positive_subset_traced(mu: &SignedMeasure, p0: &MeasurableSet) -> Result<PositiveSubset> {
    let start = mu.measure_of(p0)?;
    if !start.is_positive() {
        return Err(Error::NotPositive { measure: start });
    }

    let mut remaining = p0.clone();
    let mut removals = Vec::new();
    loop {
        // Most negative value any subset of `remaining` can reach: on an
        // atomic space that infimum is attained by the negative atoms.
        let deficiency: Rational = remaining
            .atoms()
            .map(|atom| mu.weight(atom))
            .filter(|w| w.is_negative())
            .sum();
        if !deficiency.is_negative() {
            break;
        }
        // least n0 with deficiency <= -1/n0, i.e. n0 = ceil(1/|deficiency|)
        let inverse = deficiency.abs().recip();
        let n0 = inverse.numer().div_ceil(inverse.denom());
        let threshold = -Rational::new(BigInt::from(1), n0.clone());

        // Smallest witness: add atoms most-negative first until the threshold is met.
        let mut candidates: Vec<usize> = remaining
            .atoms()
            .filter(|&atom| mu.weight(atom).is_negative())
            .collect();
        candidates.sort_by(|&x, &y| mu.weight(x).cmp(mu.weight(y)).then(x.cmp(&y)));
        let mut removed = MeasurableSet::empty(p0.space());
        let mut measure = Rational::zero();
        for atom in candidates {
            removed.insert(atom);
            measure += mu.weight(atom);
            if measure <= threshold {
                break;
            }
        }
        debug_assert!(measure <= threshold);
        remaining = remaining.difference(&removed)?;
        removals.push(Removal { removed, measure, n0 });
    }
    Ok(PositiveSubset {
        set: remaining,
        removals,
    })
}

/// Direct route to the same set: drop every strictly negative atom of `p0`.
pub fn drop_negative_atoms(mu: &SignedMeasure, p0: &MeasurableSet) -> Result<MeasurableSet> {
    let start = mu.measure_of(p0)?;
    if !start.is_positive() {
        return Err(Error::NotPositive { measure: start });
    }
    p0.difference(&mu.negative_atoms())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HahnDecomposition {
    pub positive: MeasurableSet,
    pub negative: MeasurableSet,
}

/// Splits the space into M⁺ (atoms of weight ≥ 0) and its complement M⁻.
///
/// M⁺ maximizes μ. Every maximizer contains all strictly positive atoms and
/// no strictly negative one, so including the zero-weight atoms also makes
/// ν(M⁺) maximal among maximizers for any ν ≥ 0.
pub fn hahn_decomposition(mu: &SignedMeasure, nu: &Measure) -> Result<HahnDecomposition> {
    ensure_same(mu.space(), nu.space())?;
    let negative = mu.negative_atoms();
    Ok(HahnDecomposition {
        positive: negative.complement(),
        negative,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanDecomposition {
    pub positive: Measure,
    pub negative: Measure,
}

/// μ = μ⁺ − μ⁻ with μ⁺ = μ restricted to M⁺ and μ⁻ = −μ restricted to M⁻.
pub fn jordan_decomposition(mu: &SignedMeasure, nu: &Measure) -> Result<JordanDecomposition> {
    let hahn = hahn_decomposition(mu, nu)?;
    let positive = Measure::try_from(mu.restrict(&hahn.positive)?)?;
    let negative = Measure::try_from(mu.restrict(&hahn.negative)?.negated())?;
    Ok(JordanDecomposition { positive, negative })
}

/// The signed measure λ − a·ν.
pub fn affine_combine(lambda: &SignedMeasure, a: &Rational, nu: &Measure) -> Result<SignedMeasure> {
    ensure_same(lambda.space(), nu.space())?;
    let weights = lambda
        .weights()
        .iter()
        .zip(nu.weights())
        .map(|(l, n)| l - a * n)
        .collect();
    SignedMeasure::new(lambda.space(), weights)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbsoluteContinuity {
    Continuous,
    /// `witness` is an atom with ν(atom) = 0 and λ(atom) ≠ 0.
    Violated {
        witness: usize,
    },
}

impl AbsoluteContinuity {
    pub fn is_continuous(&self) -> bool {
        matches!(self, Self::Continuous)
    }
}

/// λ ≪ ν iff every ν-null atom is λ-null; a failing atom is the witness.
pub fn is_absolutely_continuous(lambda: &SignedMeasure, nu: &Measure) -> Result<AbsoluteContinuity> {
    ensure_same(lambda.space(), nu.space())?;
    let witness = nu
        .weights()
        .iter()
        .zip(lambda.weights())
        .position(|(n, l)| n.is_zero() && !l.is_zero());
    Ok(match witness {
        Some(witness) => AbsoluteContinuity::Violated { witness },
        None => AbsoluteContinuity::Continuous,
    })
}

/// Like [`is_absolutely_continuous`] but turns a violation into an error
/// naming the witness atom.
pub(crate) fn require_absolutely_continuous(lambda: &SignedMeasure, nu: &Measure) -> Result<()> {
    match is_absolutely_continuous(lambda, nu)? {
        AbsoluteContinuity::Continuous => Ok(()),
        AbsoluteContinuity::Violated { witness } => Err(Error::NotAbsolutelyContinuous {
            witness: nu.space().label(witness).to_owned(),
        }),
    }
}
