use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::density::SimpleDensity;
use crate::measure::{ensure_same, MeasurableSet, Measure};
use crate::{Error, Rational, Result};

/// Largest space swept exhaustively (2²⁰ subsets).
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Default number of subsets drawn by the sampled mode.
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    /// max_S |λ(S) − ∫_S f dν| over the subsets examined
    pub max: Rational,
    /// A smallest subset attaining `max` (the empty set when `max` is 0).
    pub witness: MeasurableSet,
    pub subsets_checked: u64,
    pub exhaustive: bool,
}

impl Discrepancy {
    pub fn is_exact(&self) -> bool {
        self.max.is_zero()
    }
}

/// Per-atom residual λ(atom) − f(atom)·ν(atom); the discrepancy of S is the
/// sum of residuals over S.
fn residuals(lambda: &Measure, nu: &Measure, f: &SimpleDensity) -> Result<Vec<Rational>> {
    ensure_same(lambda.space(), nu.space())?;
    ensure_same(lambda.space(), f.algebra().space())?;
    if !f.algebra().is_atomic() {
        return Err(Error::NotAtomic);
    }
    Ok((0..lambda.space().len())
        .map(|atom| lambda.weight(atom) - f.value_at(atom) * nu.weight(atom))
        .collect())
}

/// Sweeps all 2ⁿ subsets in Gray-code order, updating the running
/// discrepancy by one atom per step.
pub fn verify_density(lambda: &Measure, nu: &Measure, f: &SimpleDensity) -> Result<Discrepancy> {
    let residuals = residuals(lambda, nu, f)?;
    let n = residuals.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            atoms: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut running = Rational::zero();
    let mut mask = 0u64;
    let mut best = Rational::zero();
    let mut best_mask = 0u64;
    for step in 1u64..(1u64 << n) {
        let atom = step.trailing_zeros() as usize;
        mask ^= 1 << atom;
        if mask >> atom & 1 == 1 {
            running += &residuals[atom];
        } else {
            running -= &residuals[atom];
        }
        let magnitude = running.abs();
        let smaller = magnitude == best && mask.count_ones() < best_mask.count_ones();
        if magnitude > best || (smaller && best.is_positive()) {
            best = magnitude;
            best_mask = mask;
        }
    }
    Ok(Discrepancy {
        max: best,
        witness: MeasurableSet::from_mask(lambda.space(), best_mask),
        subsets_checked: 1u64 << n,
        exhaustive: true,
    })
}

/// Draws `samples` uniformly random subsets from a seeded ChaCha stream.
/// Not exhaustive: a zero result only certifies the subsets drawn.
pub fn verify_density_sampled(
    lambda: &Measure,
    nu: &Measure,
    f: &SimpleDensity,
    samples: usize,
    seed: u64,
) -> Result<Discrepancy> {
    let residuals = residuals(lambda, nu, f)?;
    let space = lambda.space();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = Rational::zero();
    let mut witness = MeasurableSet::empty(space);
    for _ in 0..samples {
        let mut set = MeasurableSet::empty(space);
        let mut sum = Rational::zero();
        for (atom, r) in residuals.iter().enumerate() {
            if rng.gen::<bool>() {
                set.insert(atom);
                sum += r;
            }
        }
        let magnitude = sum.abs();
        let smaller = magnitude == best && set.len() < witness.len();
        if magnitude > best || (smaller && best.is_positive()) {
            best = magnitude;
            witness = set;
        }
    }
    Ok(Discrepancy {
        max: best,
        witness,
        subsets_checked: samples as u64,
        exhaustive: false,
    })
}
