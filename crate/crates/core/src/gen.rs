//! Seeded random instances: spaces, exact rational measures, refinement
//! chains and set sequences.

use std::sync::Arc;

use num::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::construct::RefinementChain;
use crate::measure::{AtomSpace, FiniteAlgebra, MeasurableSet, Measure, SetSequenceSpec, SignedMeasure};
use crate::rational::ratio;
use crate::Rational;

/// Labels `a`..`z`, then `x26`, `x27`, ...
pub fn labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

pub fn space(n: usize) -> Arc<AtomSpace> {
    AtomSpace::new(labels(n)).expect("generated labels are distinct")
}

/// p/q with p in `-max_numer..=max_numer` and q in `1..=max_denom`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, max_numer: i64, max_denom: i64) -> Rational {
    ratio(rng.gen_range(-max_numer..=max_numer), rng.gen_range(1..=max_denom))
}

pub fn nonnegative_rational<R: Rng + ?Sized>(rng: &mut R, max_numer: i64, max_denom: i64) -> Rational {
    ratio(rng.gen_range(0..=max_numer), rng.gen_range(1..=max_denom))
}

pub fn signed_measure<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomSpace>) -> SignedMeasure {
    let weights = (0..space.len()).map(|_| rational(rng, 12, 9)).collect();
    SignedMeasure::new(space, weights).expect("one weight per atom")
}

/// Nonnegative weights; each atom is null with probability `null_prob`.
pub fn measure<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomSpace>, null_prob: f64) -> Measure {
    let weights = (0..space.len())
        .map(|_| {
            if rng.gen_bool(null_prob) {
                Rational::zero()
            } else {
                nonnegative_rational(rng, 12, 9)
            }
        })
        .collect();
    Measure::new(space, weights).expect("nonnegative weights")
}

/// A pair (λ, ν) with λ ≪ ν: λ is zeroed wherever ν is.
pub fn absolutely_continuous_pair<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomSpace>) -> (Measure, Measure) {
    let nu = measure(rng, space, 0.2);
    let lambda_raw = measure(rng, space, 0.2);
    let weights = lambda_raw
        .weights()
        .iter()
        .zip(nu.weights())
        .map(|(l, n)| if n.is_zero() { Rational::zero() } else { l.clone() })
        .collect();
    let lambda = Measure::new(space, weights).expect("nonnegative weights");
    (lambda, nu)
}

pub fn subset<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomSpace>) -> MeasurableSet {
    MeasurableSet::from_indices(space, (0..space.len()).filter(|_| rng.gen_bool(0.5))).expect("indices in range")
}

/// A chain of `levels` algebras ending with the atomic one. Coarser levels
/// are built by merging random groups of blocks of the next finer level.
pub fn chain<R: Rng + ?Sized>(rng: &mut R, space: &Arc<AtomSpace>, levels: usize) -> RefinementChain {
    assert!(levels >= 1);
    let mut partitions: Vec<Vec<Vec<usize>>> = vec![(0..space.len()).map(|a| vec![a]).collect()];
    for _ in 1..levels {
        let finer = partitions.last().expect("nonempty");
        let mut order: Vec<usize> = (0..finer.len()).collect();
        order.shuffle(rng);
        let groups = rng.gen_range(1..=finer.len());
        let mut merged: Vec<Vec<usize>> = vec![Vec::new(); groups];
        for (k, &block) in order.iter().enumerate() {
            // first pass seeds every group, the rest land anywhere
            let target = if k < groups { k } else { rng.gen_range(0..groups) };
            merged[target].extend(&finer[block]);
        }
        for block in &mut merged {
            block.sort_unstable();
        }
        merged.sort();
        partitions.push(merged);
    }
    partitions.reverse();
    let algebras = partitions
        .into_iter()
        .map(|blocks| {
            let sets = blocks
                .into_iter()
                .map(|b| MeasurableSet::from_indices(space, b).expect("indices in range"))
                .collect();
            FiniteAlgebra::new(space, sets).expect("generated blocks partition the space")
        })
        .collect();
    RefinementChain::new(algebras).expect("generated levels refine each other")
}

/// An eventually periodic sequence whose cycle sets all have ν-mass below
/// the smallest positive atom mass of ν, i.e. cycle sets made of ν-null atoms.
pub fn thin_sequence<R: Rng + ?Sized>(rng: &mut R, nu: &Measure) -> SetSequenceSpec {
    let space = nu.space();
    let null: Vec<usize> = nu.null_atoms().atoms().collect();
    let prefix = (0..rng.gen_range(0..4)).map(|_| subset(rng, space)).collect();
    let cycle = (0..rng.gen_range(1..4))
        .map(|_| {
            MeasurableSet::from_indices(space, null.iter().copied().filter(|_| rng.gen_bool(0.5)))
                .expect("indices in range")
        })
        .collect();
    SetSequenceSpec::new(prefix, cycle).expect("nonempty cycle")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn chains_are_valid_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sp = space(9);
        let c = chain(&mut rng, &sp, 3);
        assert_eq!(c.levels().len(), 3);
        assert!(c.finest().is_atomic());
        let mut again = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(chain(&mut again, &sp, 3), c);
    }

    #[test]
    fn pairs_are_absolutely_continuous() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..10 {
            let sp = space(n);
            let (lambda, nu) = absolutely_continuous_pair(&mut rng, &sp);
            assert!(crate::measure::is_absolutely_continuous(&lambda, &nu)
                .unwrap()
                .is_continuous());
        }
    }

    #[test]
    fn labels_past_z() {
        let l = labels(28);
        assert_eq!(l[0], "a");
        assert_eq!(l[25], "z");
        assert_eq!(l[27], "x27");
    }
}
