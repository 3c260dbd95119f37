//! Shared strategies and brute-force helpers. The helpers deliberately work
//! on plain weight vectors and bitmasks, not on the crate's own oracle.
#![allow(dead_code)]

use std::sync::Arc;

use num::{BigInt, BigRational, Zero};
use proptest::prelude::*;
use rnforge::measure::{AtomSpace, MeasurableSet, Measure, SignedMeasure};
use rnforge::Rational;

pub fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn space(n: usize) -> Arc<AtomSpace> {
    AtomSpace::new((0..n).map(|i| format!("x{i}"))).unwrap()
}

pub fn signed_weights(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-12i64..=12, 1i64..=9), n).prop_map(|ws| ws.into_iter().map(|(a, b)| q(a, b)).collect())
}

/// Nonnegative weights, roughly one in four of them zero.
pub fn nonneg_weights(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((prop_oneof![1 => Just(0i64), 3 => 1i64..=12], 1i64..=9), n)
        .prop_map(|ws| ws.into_iter().map(|(a, b)| q(a, b)).collect())
}

/// (λ, ν) weight vectors with λ zero wherever ν is.
pub fn ac_weights(n: usize) -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>)> {
    (nonneg_weights(n), nonneg_weights(n)).prop_map(|(l, v)| {
        let l = l
            .into_iter()
            .zip(&v)
            .map(|(l, v)| if v.is_zero() { Rational::zero() } else { l })
            .collect();
        (l, v)
    })
}

pub fn signed(sp: &Arc<AtomSpace>, w: &[Rational]) -> SignedMeasure {
    SignedMeasure::new(sp, w.to_vec()).unwrap()
}

pub fn measure(sp: &Arc<AtomSpace>, w: &[Rational]) -> Measure {
    Measure::new(sp, w.to_vec()).unwrap()
}

pub fn mask_sum(w: &[Rational], mask: u64) -> Rational {
    (0..w.len()).filter(|i| mask >> i & 1 == 1).map(|i| w[i].clone()).sum()
}

pub fn mask_of(set: &MeasurableSet) -> u64 {
    set.atoms().fold(0, |m, i| m | 1 << i)
}

/// The maximum of Σ w over all masks and every mask attaining it.
pub fn brute_max(w: &[Rational]) -> (Rational, Vec<u64>) {
    let mut best: Option<Rational> = None;
    let mut arg = Vec::new();
    for mask in 0..1u64 << w.len() {
        let s = mask_sum(w, mask);
        match &best {
            Some(b) if s < *b => {}
            Some(b) if s == *b => arg.push(mask),
            _ => {
                best = Some(s);
                arg = vec![mask];
            }
        }
    }
    (best.unwrap(), arg)
}
