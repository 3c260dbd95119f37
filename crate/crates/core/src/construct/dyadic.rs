use num::{Signed, Zero};

use super::density::SimpleDensity;
use crate::measure::{ensure_same, Measure};
use crate::rational::{floor_dyadic, int, pow2};
use crate::{Error, Rational, Result};

/// The n-th dyadic approximant Σ_{k=0}^{n2ⁿ−1} k/2ⁿ · 𝟙{k/2ⁿ ≤ f < (k+1)/2ⁿ}.
///
/// Values below the cutoff n are floored to the grid 2⁻ⁿℤ; values at or above
/// n fall outside the summation range and map to 0.
pub fn dyadic_approximation(f: &SimpleDensity, n: u32) -> Result<SimpleDensity> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    let cutoff = int(i64::from(n));
    let values = f
        .values()
        .iter()
        .map(|v| {
            if *v < cutoff {
                floor_dyadic(v, n)
            } else {
                Rational::zero()
            }
        })
        .collect();
    Ok(f.with_values(values))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationReport {
    pub level: u32,
    /// ∫ |f − fₙ| dν
    pub l1_error: Rational,
    /// ∫_{f ≥ n} f dν
    pub tail_mass: Rational,
    /// tail_mass + ν(M)/2ⁿ
    pub bound: Rational,
    /// The cutoff n exceeds every value of f, so only grid rounding remains.
    pub converged: bool,
}

pub fn approximation_report(f: &SimpleDensity, nu: &Measure, n: u32) -> Result<ApproximationReport> {
    ensure_same(f.algebra().space(), nu.space())?;
    let approx = dyadic_approximation(f, n)?;
    let cutoff = int(i64::from(n));
    let mut l1_error = Rational::zero();
    let mut tail_mass = Rational::zero();
    for (b, block) in f.algebra().blocks().iter().enumerate() {
        let mass = nu.measure_of(block)?;
        let value = f.block_value(b);
        l1_error += (value - approx.block_value(b)).abs() * &mass;
        if *value >= cutoff {
            tail_mass += value * &mass;
        }
    }
    let bound = &tail_mass + nu.total() / pow2(n);
    if l1_error > bound {
        return Err(Error::BoundViolated(format!(
            "L1 error exceeds tail mass plus grid term at level {n}"
        )));
    }
    Ok(ApproximationReport {
        level: n,
        converged: tail_mass.is_zero(),
        l1_error,
        tail_mass,
        bound,
    })
}

/// ν({f ≥ k}) and the Markov bound (∫ f dν)/k, for k > 0.
pub fn markov_tail(f: &SimpleDensity, nu: &Measure, k: &Rational) -> Result<(Rational, Rational)> {
    ensure_same(f.algebra().space(), nu.space())?;
    if !k.is_positive() {
        return Err(Error::NonPositiveThreshold);
    }
    let mut level_mass = Rational::zero();
    let mut integral = Rational::zero();
    for (b, block) in f.algebra().blocks().iter().enumerate() {
        let mass = nu.measure_of(block)?;
        if f.block_value(b) >= k {
            level_mass += &mass;
        }
        integral += f.block_value(b) * mass;
    }
    Ok((level_mass, integral / k))
}
