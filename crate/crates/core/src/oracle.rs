//! Brute-force reference implementations.
//!
//! Everything here enumerates all 2ⁿ subsets and recomputes each subset sum
//! from the raw weights. Slow on purpose: these functions only depend on the
//! weight vectors, never on the constructions they are used to check.

use std::sync::Arc;

use num::Zero;

use crate::construct::SimpleDensity;
use crate::measure::{AtomSpace, FiniteAlgebra, MeasurableSet, Measure, SignedMeasure};
use crate::{Error, Rational, Result};

pub const ORACLE_LIMIT: usize = 20;

fn guard(space: &Arc<AtomSpace>) -> Result<u64> {
    if space.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            atoms: space.len(),
            limit: ORACLE_LIMIT,
        });
    }
    Ok(1u64 << space.len())
}

fn check_same(a: &Arc<AtomSpace>, b: &Arc<AtomSpace>) -> Result<()> {
    if a.labels() == b.labels() {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// Σ_{i ∈ mask} weights[i]
pub fn subset_sum(weights: &[Rational], mask: u64) -> Rational {
    let mut total = Rational::zero();
    for (i, w) in weights.iter().enumerate() {
        if mask >> i & 1 == 1 {
            total += w;
        }
    }
    total
}

/// Exhaustive maximum of μ over all subsets.
///
/// Ties are broken by larger ν-mass when `nu` is given, then by larger
/// cardinality, then by smaller mask.
pub fn max_measure_subset(mu: &SignedMeasure, nu: Option<&Measure>) -> Result<(MeasurableSet, Rational)> {
    let count = guard(mu.space())?;
    if let Some(nu) = nu {
        check_same(mu.space(), nu.space())?;
    }
    let score = |mask: u64| {
        let m = subset_sum(mu.weights(), mask);
        let n = nu
            .map(|nu| subset_sum(nu.weights(), mask))
            .unwrap_or_else(Rational::zero);
        (m, n, mask.count_ones())
    };
    let mut best_mask = 0u64;
    let mut best = score(0);
    for mask in 1..count {
        let candidate = score(mask);
        if candidate > best {
            best = candidate;
            best_mask = mask;
        }
    }
    Ok((MeasurableSet::from_mask(mu.space(), best_mask), best.0))
}

/// Every subset attaining the maximum of μ.
pub fn measure_maximizers(mu: &SignedMeasure) -> Result<Vec<MeasurableSet>> {
    let count = guard(mu.space())?;
    let values: Vec<Rational> = (0..count).map(|mask| subset_sum(mu.weights(), mask)).collect();
    let max = values.iter().max().expect("at least the empty set").clone();
    Ok((0..count)
        .filter(|&mask| values[mask as usize] == max)
        .map(|mask| MeasurableSet::from_mask(mu.space(), mask))
        .collect())
}

/// True iff μ(Q) ≥ 0 for every Q ⊆ `set`.
pub fn all_subsets_nonnegative(mu: &SignedMeasure, set: &MeasurableSet) -> Result<bool> {
    let count = guard(mu.space())?;
    check_same(mu.space(), set.space())?;
    let outer = set.to_mask();
    Ok((0..count)
        .filter(|mask| mask & !outer == 0)
        .all(|mask| subset_sum(mu.weights(), mask) >= Rational::zero()))
}

/// ν(S) = 0 ⟹ λ(S) = 0, checked on every subset.
pub fn exhaustive_absolute_continuity(lambda: &SignedMeasure, nu: &Measure) -> Result<bool> {
    let count = guard(lambda.space())?;
    check_same(lambda.space(), nu.space())?;
    Ok(
        (0..count)
            .all(|mask| !subset_sum(nu.weights(), mask).is_zero() || subset_sum(lambda.weights(), mask).is_zero()),
    )
}

/// Per-atom ratio λ(x)/ν(x), 0 on ν-null atoms.
pub fn direct_density(lambda: &Measure, nu: &Measure) -> Result<SimpleDensity> {
    check_same(lambda.space(), nu.space())?;
    let mut values = Vec::with_capacity(lambda.space().len());
    for (atom, (l, n)) in lambda.weights().iter().zip(nu.weights()).enumerate() {
        if n.is_zero() {
            if !l.is_zero() {
                return Err(Error::NotAbsolutelyContinuous {
                    witness: lambda.space().label(atom).to_owned(),
                });
            }
            values.push(Rational::zero());
        } else {
            values.push(l / n);
        }
    }
    SimpleDensity::new(FiniteAlgebra::atomic(lambda.space()), values)
}

/// λ(S) = Σ_{x∈S} f(x)ν(x) for every subset S.
pub fn exhaustive_identity_check(lambda: &Measure, nu: &Measure, f: &SimpleDensity) -> Result<bool> {
    let count = guard(lambda.space())?;
    check_same(lambda.space(), nu.space())?;
    check_same(lambda.space(), f.algebra().space())?;
    if !f.algebra().is_atomic() {
        return Err(Error::NotAtomic);
    }
    let fnu: Vec<Rational> = (0..lambda.space().len())
        .map(|atom| f.value_at(atom) * nu.weight(atom))
        .collect();
    Ok((0..count).all(|mask| subset_sum(lambda.weights(), mask) == subset_sum(&fnu, mask)))
}
