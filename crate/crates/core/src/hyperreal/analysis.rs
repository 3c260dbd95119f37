use num::{One, Signed, Zero};

use super::number::{Direction, HyperReal, Limit};
use super::verdict::{Outcome, Verdict, Witness};
use crate::{Error, Rational, Result};

const VALIDATION_SAMPLES: usize = 1024;
const WINDOW_SAMPLES: usize = 512;
/// Consecutive indices always inspected at the end of a window so that
/// evenly spaced samples cannot alias with a periodic sequence.
const TAIL_RUN: u64 = 16;

/// Up to `cap` evenly spaced indices in `lo..=hi`, both ends included.
pub(crate) fn sample_indices(lo: u64, hi: u64, cap: usize) -> Vec<u64> {
    if hi < lo {
        return Vec::new();
    }
    let span = hi - lo;
    if span < cap as u64 {
        return (lo..=hi).collect();
    }
    let steps = (cap.max(2) - 1) as u128;
    let mut out: Vec<u64> = (0..=steps)
        .map(|j| lo + (u128::from(span) * j / steps) as u64)
        .collect();
    out.dedup();
    out
}

fn window_indices(lo: u64, hi: u64) -> Vec<u64> {
    with_tail_run(sample_indices(lo, hi, WINDOW_SAMPLES), lo, hi)
}

fn validation_indices(lo: u64, hi: u64) -> Vec<u64> {
    with_tail_run(sample_indices(lo, hi, VALIDATION_SAMPLES), lo, hi)
}

fn with_tail_run(mut idx: Vec<u64>, lo: u64, hi: u64) -> Vec<u64> {
    if hi < lo {
        return idx;
    }
    idx.extend(hi.saturating_sub(TAIL_RUN).max(lo)..=hi);
    idx.sort_unstable();
    idx.dedup();
    idx
}

fn is_monotone(values: &[Rational], direction: Direction) -> bool {
    values.windows(2).all(|w| match direction {
        Direction::Increasing => w[0] <= w[1],
        Direction::Decreasing => w[0] >= w[1],
    })
}

/// Checks the declared hints of `x` against its values on `0..=horizon`.
/// Sampling can refute a hint but never prove it.
pub fn hints_consistent(x: &HyperReal, horizon: u64) -> bool {
    let hints = x.hints();
    if let Some(c) = &hints.constant {
        if validation_indices(0, horizon).into_iter().any(|n| x.at(n) != *c) {
            return false;
        }
    }
    let monotone_values = hints.monotone.filter(|m| m.from <= horizon).map(|m| {
        let values: Vec<Rational> = validation_indices(m.from, horizon)
            .into_iter()
            .map(|n| x.at(n))
            .collect();
        (m.direction, values)
    });
    if let Some((direction, values)) = &monotone_values {
        if !is_monotone(values, *direction) {
            return false;
        }
    }
    let Some(limit) = &hints.limit else {
        return true;
    };
    let half = horizon / 2;
    let early: Vec<Rational> = validation_indices(0, half).into_iter().map(|n| x.at(n)).collect();
    let late: Vec<Rational> = validation_indices(half, horizon).into_iter().map(|n| x.at(n)).collect();
    match (limit, &monotone_values) {
        // a monotone sequence approaches its limit from one side
        (Limit::Finite(l), Some((Direction::Increasing, values))) => values.iter().all(|v| v <= l),
        (Limit::Finite(l), Some((Direction::Decreasing, values))) => values.iter().all(|v| v >= l),
        (Limit::Finite(l), None) => {
            // the distance to the limit must shrink between the two halves
            let spread = |vs: &[Rational]| vs.iter().map(|v| (v - l).abs()).max().unwrap_or_else(Rational::zero);
            let late_spread = spread(&late);
            late_spread.is_zero() || late_spread < spread(&early)
        }
        (Limit::PosInfinity, Some((Direction::Decreasing, _)))
        | (Limit::NegInfinity, Some((Direction::Increasing, _))) => false,
        (Limit::PosInfinity, _) => late.iter().max() >= early.iter().max(),
        (Limit::NegInfinity, _) => late.iter().min() <= early.iter().min(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Infinitesimal,
    Finite,
    Infinite,
    Unknown,
}

/// Three increments growing: d₁ > 0 and d₂ ≥ d₁.
fn growing(a: &Rational, b: &Rational, c: &Rational) -> bool {
    let d1 = (b - a).abs();
    let d2 = (c - b).abs();
    d1.is_positive() && d2 >= d1
}

/// Classifies `x` as infinitesimal, finite (not infinitesimal) or infinite.
///
/// Uses validated hints only: a constant or limit decides directly; with a
/// monotone certificate the values at H/4, H/2, H are compared, calling `x`
/// infinite when its increments grow and those of 1/x do not, and
/// infinitesimal in the mirrored case. Without hints the answer is `Unknown`.
pub fn classify(x: &HyperReal, horizon: u64) -> Classification {
    if !hints_consistent(x, horizon) {
        return Classification::Unknown;
    }
    let hints = x.hints();
    match hints.effective_limit() {
        Some(Limit::Finite(l)) if l.is_zero() => return Classification::Infinitesimal,
        Some(Limit::Finite(_)) => return Classification::Finite,
        Some(_) => return Classification::Infinite,
        None => {}
    }
    let Some(m) = hints.monotone else {
        return Classification::Unknown;
    };
    let (i0, i1, i2) = (horizon / 4, horizon / 2, horizon);
    if i0 < m.from || i0 >= i1 || i1 >= i2 {
        return Classification::Unknown;
    }
    let (a, b, c) = (x.at(i0), x.at(i1), x.at(i2));
    if a == b && b == c {
        return if a.is_zero() {
            Classification::Infinitesimal
        } else {
            Classification::Finite
        };
    }
    let direct = growing(&a, &b, &c);
    let same_sign = (a.is_positive() && b.is_positive() && c.is_positive())
        || (a.is_negative() && b.is_negative() && c.is_negative());
    let reciprocal = same_sign && growing(&a.recip(), &b.recip(), &c.recip());
    match (direct, reciprocal) {
        (true, false) => Classification::Infinite,
        (false, true) => Classification::Infinitesimal,
        (false, false) if b != a => Classification::Finite,
        _ => Classification::Unknown,
    }
}

/// A sampled gap away from zero that does not shrink between the windows
/// [H/4, H/2] and [H/2, H], with the later window monotone and of one sign.
fn persistent_gap(d: &HyperReal, horizon: u64) -> Option<Witness> {
    if horizon < 4 {
        return None;
    }
    let early: Vec<Rational> = window_indices(horizon / 4, horizon / 2)
        .into_iter()
        .map(|n| d.at(n))
        .collect();
    let late: Vec<Rational> = window_indices(horizon / 2, horizon)
        .into_iter()
        .map(|n| d.at(n))
        .collect();
    let all = early.iter().chain(&late);
    let one_sign = all.clone().all(Signed::is_positive) || all.clone().all(Signed::is_negative);
    if !one_sign || !(is_monotone(&late, Direction::Increasing) || is_monotone(&late, Direction::Decreasing)) {
        return None;
    }
    let min_abs = |vs: &[Rational]| vs.iter().map(Signed::abs).min().expect("nonempty window");
    let (g_early, g_late) = (min_abs(&early), min_abs(&late));
    let kept = &g_late * Rational::from_integer(4.into()) >= g_early * Rational::from_integer(3.into());
    kept.then_some(Witness::Index {
        index: horizon / 2,
        gap: g_late,
    })
}

fn infinitesimal_verdict(d: &HyperReal, horizon: u64) -> Verdict {
    let window = (0, horizon);
    match classify(d, horizon) {
        Classification::Infinitesimal => Verdict::new(Outcome::Holds, window, "difference certified infinitesimal"),
        Classification::Finite | Classification::Infinite => {
            let witness = match d.hints().effective_limit() {
                Some(limit) => Witness::Limit(limit),
                None => {
                    let gap = window_indices(horizon / 4, horizon)
                        .into_iter()
                        .map(|n| d.at(n).abs())
                        .min()
                        .expect("nonempty window");
                    Witness::Index {
                        index: horizon / 4,
                        gap,
                    }
                }
            };
            Verdict::new(Outcome::Fails, window, "difference certified not infinitesimal").with_witness(witness)
        }
        Classification::Unknown => match persistent_gap(d, horizon) {
            Some(witness) => Verdict::new(Outcome::Fails, (horizon / 4, horizon), "sampled gap does not shrink")
                .with_witness(witness),
            None => Verdict::new(Outcome::Unknown, window, "no certificate and no persistent gap"),
        },
    }
}

/// x ≈ y: whether x − y is infinitesimal, judged on indices up to `horizon`.
pub fn infinitely_close(x: &HyperReal, y: &HyperReal, horizon: u64) -> Result<Verdict> {
    if horizon < 1 {
        return Err(Error::InvalidHorizon { min: 1 });
    }
    Ok(infinitesimal_verdict(&(x - y), horizon))
}

/// sₙ → a: whether s_N − a is infinitesimal, checked at every horizon.
///
/// `Holds` needs a certificate at every horizon; `Fails` needs at least one
/// failure and no certified success; anything mixed is `Unknown`.
pub fn check_limit(seq: &HyperReal, a: &Rational, horizons: &[u64]) -> Result<Verdict> {
    if horizons.is_empty() || horizons.contains(&0) {
        return Err(Error::InvalidHorizon { min: 1 });
    }
    let d = seq - &HyperReal::standard(a.clone());
    let verdicts: Vec<Verdict> = horizons.iter().map(|&h| infinitesimal_verdict(&d, h)).collect();
    let lo = *horizons.iter().min().expect("nonempty");
    let hi = *horizons.iter().max().expect("nonempty");
    let any = |o: Outcome| verdicts.iter().any(|v| v.outcome == o);
    if verdicts.iter().all(Verdict::holds) {
        return Ok(Verdict::new(Outcome::Holds, (lo, hi), "certified at every horizon"));
    }
    if any(Outcome::Fails) && !any(Outcome::Holds) {
        let failing = verdicts
            .into_iter()
            .find(|v| v.outcome == Outcome::Fails)
            .expect("a failing verdict");
        let mut out = Verdict::new(Outcome::Fails, (lo, hi), failing.reason);
        out.witness = failing.witness;
        return Ok(out);
    }
    Ok(Verdict::new(
        Outcome::Unknown,
        (lo, hi),
        "horizons disagree or lack certificates",
    ))
}

/// Aitken Δ² extrapolation of the last five terms, accepted only when the
/// increments keep one sign and contract (ratios in (0, 1)) and the three
/// extrapolated values agree within `tol`.
fn accelerated_tail(x: &HyperReal, horizon: u64, tol: &Rational) -> Option<Rational> {
    if horizon < 4 {
        return None;
    }
    let xs: Vec<Rational> = (horizon - 4..=horizon).map(|n| x.at(n)).collect();
    let deltas: Vec<Rational> = xs.windows(2).map(|w| &w[1] - &w[0]).collect();
    let contracting = deltas.windows(2).all(|w| {
        if w[0].is_zero() {
            return false;
        }
        let r = &w[1] / &w[0];
        r.is_positive() && r < Rational::one()
    });
    if !contracting {
        return None;
    }
    let accelerated: Vec<Rational> = (0..3)
        .map(|k| {
            let denom = &deltas[k + 1] - &deltas[k];
            &xs[k + 2] - &deltas[k + 1] * &deltas[k + 1] / denom
        })
        .collect();
    let hi = accelerated.iter().max().expect("three values");
    let lo = accelerated.iter().min().expect("three values");
    (hi - lo < *tol).then(|| accelerated[2].clone())
}

/// The standard part of a finite `x`, or `None` when it cannot be pinned
/// down within `tol` from indices up to `horizon`.
///
/// In order: a validated constant or finite limit is returned exactly; a
/// sampled tail [H/2, H] oscillating by less than `tol` returns x_H; a
/// contracting tail returns its Aitken extrapolation.
pub fn standard_part(x: &HyperReal, tol: &Rational, horizon: u64) -> Result<Option<Rational>> {
    if !tol.is_positive() {
        return Err(Error::InvalidTolerance);
    }
    if horizon < 1 {
        return Err(Error::InvalidHorizon { min: 1 });
    }
    if classify(x, horizon) == Classification::Infinite {
        return Err(Error::Infinite);
    }
    if hints_consistent(x, horizon) {
        if let Some(Limit::Finite(l)) = x.hints().effective_limit() {
            return Ok(Some(l));
        }
    }
    let tail: Vec<Rational> = window_indices(horizon / 2, horizon)
        .into_iter()
        .map(|n| x.at(n))
        .collect();
    let hi = tail.iter().max().expect("nonempty window");
    let lo = tail.iter().min().expect("nonempty window");
    if hi - lo < *tol {
        return Ok(Some(x.at(horizon)));
    }
    Ok(accelerated_tail(x, horizon, tol))
}
