use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, One, Signed, Zero};

use super::analysis::standard_part;
use super::number::HyperReal;
use super::verdict::{Outcome, Verdict, Witness};
use crate::rational::{cmp_ratio, fmt_ratio, int, ratio};
use crate::{Error, Rational, Result};

type Rule = Arc<dyn Fn(&Rational) -> Option<Rational> + Send + Sync>;

/// Grids up to this many points are checked in full against a declared modulus.
const FULL_LEVEL_POINTS: u64 = 4096;
const MAX_LEVELS: u32 = 64;

/// A declared modulus of continuity ω: |x − y| ≤ δ ⟹ |f(x) − f(y)| ≤ ω(δ).
#[derive(Clone)]
pub enum Modulus {
    Lipschitz(Rational),
    Custom(Arc<dyn Fn(&Rational) -> Rational + Send + Sync>),
}

impl Modulus {
    pub fn bound(&self, delta: &Rational) -> Rational {
        match self {
            Self::Lipschitz(k) => k * delta,
            Self::Custom(omega) => omega(delta),
        }
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lipschitz(k) => write!(f, "Lipschitz({})", fmt_ratio(k)),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A function on [0, 1] with exact rational values.
#[derive(Clone)]
pub struct RealFn {
    eval: Rule,
    modulus: Option<Modulus>,
}

impl RealFn {
    /// `rule` returns `None` where the function is undefined.
    pub fn new<F>(rule: F) -> Self
    where
        F: Fn(&Rational) -> Option<Rational> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(rule),
            modulus: None,
        }
    }

    pub fn with_modulus(mut self, modulus: Modulus) -> Self {
        self.modulus = Some(modulus);
        self
    }

    pub fn modulus(&self) -> Option<&Modulus> {
        self.modulus.as_ref()
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        (self.eval)(x).ok_or_else(|| Error::NotEvaluable(x.clone()))
    }

    pub fn identity() -> Self {
        Self::power(1)
    }

    /// x ↦ x^k, with Lipschitz constant k on [0, 1].
    pub fn power(k: u32) -> Self {
        let exp = i32::try_from(k).expect("exponent fits in i32");
        Self::new(move |x| Some(num::pow::Pow::pow(x, exp))).with_modulus(Modulus::Lipschitz(int(i64::from(k))))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(move |_| Some(c.clone())).with_modulus(Modulus::Lipschitz(Rational::zero()))
    }

    /// 0 below `at`, 1 from `at` on. No modulus.
    pub fn step(at: Rational) -> Self {
        Self::new(move |x| Some(if *x < at { Rational::zero() } else { Rational::one() }))
    }
}

impl fmt::Debug for RealFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFn")
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

/// Uniform continuity on [0, 1] over grids of spacing 1/(grid·2ᵏ), k = 0..=horizon.
///
/// Level 0 compares every pair of neighbouring grid points; each later level
/// halves the worst pair of the previous one and keeps the worse half. With a
/// declared modulus every inspected pair is checked against it and the verdict
/// is `Holds`. Without one, a gap that never drops below half its initial size
/// gives `Fails` with that pair as witness; otherwise `Unknown`.
pub fn check_uniform_continuity(f: &RealFn, grid: u64, horizon: u32) -> Result<Verdict> {
    if grid < 2 {
        return Err(Error::InvalidGrid { min: 2 });
    }
    let check_pair = |x: &Rational, y: &Rational, fx: &Rational, fy: &Rational| -> Result<Rational> {
        let gap = (fx - fy).abs();
        if let Some(m) = &f.modulus {
            if gap > m.bound(&(y - x).abs()) {
                return Err(Error::HintViolation(format!(
                    "|f({}) - f({})| = {} exceeds the declared modulus",
                    fmt_ratio(x),
                    fmt_ratio(y),
                    fmt_ratio(&gap)
                )));
            }
        }
        Ok(gap)
    };

    let grid_i = i64::try_from(grid).map_err(|_| Error::InvalidGrid { min: 2 })?;
    let points: Vec<Rational> = (0..=grid_i).map(|j| ratio(j, grid_i)).collect();
    let values = points.iter().map(|x| f.eval(x)).collect::<Result<Vec<_>>>()?;
    let mut worst = (0usize, Rational::zero());
    for j in 0..points.len() - 1 {
        let gap = check_pair(&points[j], &points[j + 1], &values[j], &values[j + 1])?;
        if gap > worst.1 {
            worst = (j, gap);
        }
    }
    let mut pair = (points[worst.0].clone(), points[worst.0 + 1].clone());
    let mut pair_values = (values[worst.0].clone(), values[worst.0 + 1].clone());
    let mut gaps = vec![worst.1];

    for k in 1..=horizon {
        let count = grid.checked_shl(k).filter(|&c| c <= FULL_LEVEL_POINTS);
        if let (Some(count), Some(_)) = (count, &f.modulus) {
            let n = i64::try_from(count).expect("bounded by FULL_LEVEL_POINTS");
            let mut prev = (Rational::zero(), f.eval(&Rational::zero())?);
            for j in 1..=n {
                let x = ratio(j, n);
                let fx = f.eval(&x)?;
                check_pair(&prev.0, &x, &prev.1, &fx)?;
                prev = (x, fx);
            }
        }
        let mid = (&pair.0 + &pair.1) / int(2);
        let f_mid = f.eval(&mid)?;
        let left = check_pair(&pair.0, &mid, &pair_values.0, &f_mid)?;
        let right = check_pair(&mid, &pair.1, &f_mid, &pair_values.1)?;
        if left >= right {
            pair = (pair.0, mid);
            pair_values = (pair_values.0, f_mid);
            gaps.push(left);
        } else {
            pair = (mid, pair.1);
            pair_values = (f_mid, pair_values.1);
            gaps.push(right);
        }
    }

    let window = (0, u64::from(horizon));
    if f.modulus.is_some() {
        return Ok(Verdict::new(
            Outcome::Holds,
            window,
            "declared modulus holds on every inspected pair",
        ));
    }
    let initial = &gaps[0];
    let half = initial / int(2);
    if horizon >= 3 && initial.is_positive() && gaps.iter().all(|g| *g >= half) {
        let gap = gaps.last().expect("nonempty").clone();
        return Ok(
            Verdict::new(Outcome::Fails, window, "gap persists as the mesh shrinks").with_witness(Witness::Pair {
                x: pair.0,
                y: pair.1,
                gap,
            }),
        );
    }
    Ok(Verdict::new(Outcome::Unknown, window, "no modulus declared"))
}

type PartitionRule = Arc<dyn Fn(u32) -> Vec<Rational> + Send + Sync>;
type MeshRule = Arc<dyn Fn(u32) -> Rational + Send + Sync>;

/// Partitions 0 = a₀ < … < aₘ = 1 of [0, 1] indexed by level, with a
/// declared nonincreasing mesh bound.
#[derive(Clone)]
pub struct PartitionSequence {
    rule: PartitionRule,
    mesh: MeshRule,
}

impl PartitionSequence {
    pub fn new<P, M>(rule: P, mesh: M) -> Self
    where
        P: Fn(u32) -> Vec<Rational> + Send + Sync + 'static,
        M: Fn(u32) -> Rational + Send + Sync + 'static,
    {
        Self {
            rule: Arc::new(rule),
            mesh: Arc::new(mesh),
        }
    }

    /// Level n splits [0, 1] into baseⁿ equal pieces.
    pub fn uniform(base: u32) -> Self {
        assert!(base >= 2, "base must be at least 2");
        let count = move |level: u32| i64::from(base).pow(level);
        Self::new(
            move |level| {
                let n = count(level);
                (0..=n).map(|j| ratio(j, n)).collect()
            },
            move |level| ratio(1, count(level)),
        )
    }

    pub fn dyadic() -> Self {
        Self::uniform(2)
    }

    pub fn declared_mesh(&self, level: u32) -> Rational {
        (self.mesh)(level)
    }

    /// The partition at `level`, checked for endpoints, strict increase and
    /// the declared mesh.
    pub fn partition(&self, level: u32) -> Result<Vec<Rational>> {
        let points = (self.rule)(level);
        let invalid = |reason: &str| Error::InvalidPartitionSequence {
            level,
            reason: reason.to_owned(),
        };
        if points.len() < 2 {
            return Err(invalid("fewer than two points"));
        }
        if !points[0].is_zero() || !points[points.len() - 1].is_one() {
            return Err(invalid("endpoints must be 0 and 1"));
        }
        if points.windows(2).any(|w| cmp_ratio(&w[0], &w[1]) != Ordering::Less) {
            return Err(invalid("points must increase strictly"));
        }
        let mesh = self.declared_mesh(level);
        if points.windows(2).any(|w| gap_exceeds(&w[0], &w[1], &mesh)) {
            return Err(invalid("actual mesh exceeds the declared mesh"));
        }
        if level > 0 && self.declared_mesh(level) > self.declared_mesh(level - 1) {
            return Err(invalid("declared mesh increases"));
        }
        Ok(points)
    }

    /// Consecutive levels from 0 whose partitions have at most `horizon`
    /// subintervals.
    pub fn levels_within(&self, horizon: u64) -> Result<Vec<Vec<Rational>>> {
        let mut out = Vec::new();
        for level in 0..MAX_LEVELS {
            let points = self.partition(level)?;
            if (points.len() - 1) as u64 > horizon {
                if out.is_empty() {
                    return Err(Error::InvalidHorizon {
                        min: (points.len() - 1) as u64,
                    });
                }
                break;
            }
            out.push(points);
        }
        Ok(out)
    }
}

impl fmt::Debug for PartitionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartitionSequence").finish_non_exhaustive()
    }
}

/// b − a > m, decided by cross-multiplication without reducing b − a.
fn gap_exceeds(a: &Rational, b: &Rational, m: &Rational) -> bool {
    let diff_numer = b.numer() * a.denom() - a.numer() * b.denom();
    diff_numer * m.denom() > m.numer() * a.denom() * b.denom()
}

/// Left-tagged sum Σ f(aₖ₋₁)(g(aₖ) − g(aₖ₋₁)); `g` must not decrease.
pub fn rs_sum(f: &RealFn, g: &RealFn, points: &[Rational]) -> Result<Rational> {
    // Terms are accumulated unreduced, one integer numerator per distinct
    // denominator; on regular partitions only a handful of denominators occur.
    let mut buckets: HashMap<BigInt, BigInt> = HashMap::new();
    let mut g_prev = g.eval(&points[0])?;
    for w in points.windows(2) {
        let g_next = g.eval(&w[1])?;
        if cmp_ratio(&g_next, &g_prev) == Ordering::Less {
            return Err(Error::DecreasingIntegrator {
                left: Box::new(w[0].clone()),
                right: Box::new(w[1].clone()),
            });
        }
        let dg = &g_next - &g_prev;
        if !dg.is_zero() {
            let fx = f.eval(&w[0])?;
            *buckets.entry(fx.denom() * dg.denom()).or_default() += fx.numer() * dg.numer();
        }
        g_prev = g_next;
    }
    Ok(buckets.into_iter().map(|(d, n)| Rational::new(n, d)).sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSum {
    pub level: u32,
    pub intervals: u64,
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsEstimate {
    /// st of the sum sequence, when it could be pinned down.
    pub value: Option<Rational>,
    pub sums: Vec<LevelSum>,
}

impl RsEstimate {
    fn as_hyperreal(&self) -> HyperReal {
        let values: Vec<Rational> = self.sums.iter().map(|s| s.sum.clone()).collect();
        // indices past the computed levels repeat the finest sum
        let last = values.last().expect("at least one level").clone();
        HyperReal::tabulated(values, move |_| last.clone())
    }
}

fn estimate(f: &RealFn, g: &RealFn, levels: &[Vec<Rational>], tol: &Rational) -> Result<RsEstimate> {
    let sums = levels
        .iter()
        .enumerate()
        .map(|(level, points)| {
            Ok(LevelSum {
                level: level as u32,
                intervals: (points.len() - 1) as u64,
                sum: rs_sum(f, g, points)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut estimate = RsEstimate { value: None, sums };
    let top = (estimate.sums.len() - 1) as u64;
    if top > 0 {
        estimate.value = standard_part(&estimate.as_hyperreal(), tol, top)?;
    }
    Ok(estimate)
}

/// ∫₀¹ f dg as the standard part of the sums over `parts`, using every level
/// with at most `horizon` subintervals.
pub fn rs_integral(
    f: &RealFn,
    g: &RealFn,
    parts: &PartitionSequence,
    tol: &Rational,
    horizon: u64,
) -> Result<RsEstimate> {
    if !tol.is_positive() {
        return Err(Error::InvalidTolerance);
    }
    estimate(f, g, &parts.levels_within(horizon)?, tol)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionAgreement {
    pub verdict: Verdict,
    pub first: RsEstimate,
    pub second: RsEstimate,
}

/// Union of two increasing point lists, increasing and without repeats.
fn merge(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match cmp_ratio(&a[i], &b[j]) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Whether two partition sequences give the same ∫ f dg.
///
/// Each level is compared with the common refinement of both partitions.
/// With a declared modulus ω for `f`, the refinement bound
/// |S(P) − S(P ∪ P')| ≤ ω(declared mesh of P)·(g(1) − g(0)) is checked on every level and
/// the verdict is `Holds` when both standard parts exist and agree within
/// `tol`. Identical partitions agree trivially.
pub fn partition_agreement(
    f: &RealFn,
    g: &RealFn,
    first: &PartitionSequence,
    second: &PartitionSequence,
    tol: &Rational,
    horizon: u64,
) -> Result<PartitionAgreement> {
    if !tol.is_positive() {
        return Err(Error::InvalidTolerance);
    }
    let levels_a = first.levels_within(horizon)?;
    let levels_b = second.levels_within(horizon)?;
    let a = estimate(f, g, &levels_a, tol)?;
    let b = estimate(f, g, &levels_b, tol)?;
    let common = levels_a.len().min(levels_b.len());
    let window = (0, common as u64 - 1);
    let done = |verdict: Verdict, a: RsEstimate, b: RsEstimate| {
        Ok(PartitionAgreement {
            verdict,
            first: a,
            second: b,
        })
    };

    if levels_a == levels_b {
        return done(Verdict::new(Outcome::Holds, window, "identical partitions"), a, b);
    }

    let Some(modulus) = f.modulus() else {
        let diff = &a.as_hyperreal() - &b.as_hyperreal();
        let gap = (0..common).map(|n| (diff.at(n as u64)).abs()).collect::<Vec<_>>();
        // a difference that never shrinks across levels is reported as a failure
        let persistent = common >= 4 && gap[0].is_positive() && gap.iter().all(|g| *g >= &gap[0] / int(2));
        let verdict = if persistent {
            Verdict::new(Outcome::Fails, window, "sums differ by a persistent gap").with_witness(Witness::Index {
                index: common as u64 - 1,
                gap: gap.last().expect("nonempty").clone(),
            })
        } else {
            Verdict::new(Outcome::Unknown, window, "no modulus declared for the integrand")
        };
        return done(verdict, a, b);
    };

    let variation = g.eval(&Rational::one())? - g.eval(&Rational::zero())?;
    for level in 0..common {
        let merged = merge(&levels_a[level], &levels_b[level]);
        let fine = rs_sum(f, g, &merged)?;
        let level_u32 = level as u32;
        for (parts, sum) in [(first, &a.sums[level].sum), (second, &b.sums[level].sum)] {
            let bound = modulus.bound(&parts.declared_mesh(level_u32)) * &variation;
            if (sum - &fine).abs() > bound {
                return Err(Error::HintViolation(format!(
                    "refinement bound fails at level {level}: sums differ by more than {}",
                    fmt_ratio(&bound)
                )));
            }
        }
    }
    let verdict = match (&a.value, &b.value) {
        (Some(x), Some(y)) if (x - y).abs() < *tol => Verdict::new(
            Outcome::Holds,
            window,
            "refinement bounds hold and standard parts agree",
        ),
        (Some(x), Some(y)) => Verdict::new(Outcome::Unknown, window, "standard parts differ beyond tolerance")
            .with_witness(Witness::Pair {
                x: x.clone(),
                y: y.clone(),
                gap: (x - y).abs(),
            }),
        _ => Verdict::new(Outcome::Unknown, window, "a standard part could not be determined"),
    };
    done(verdict, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn micro() -> Rational {
        ratio(1, 1_000_000)
    }

    #[test]
    fn integrals_of_monomials() {
        let x = RealFn::identity();
        let est = rs_integral(&x, &x, &PartitionSequence::dyadic(), &micro(), 1 << 16).unwrap();
        assert_eq!(est.sums.len(), 17);
        let v = est.value.unwrap();
        assert!((v - ratio(1, 2)).abs() < micro());

        let est = rs_integral(&RealFn::power(2), &x, &PartitionSequence::dyadic(), &micro(), 1 << 16).unwrap();
        assert!((est.value.unwrap() - ratio(1, 3)).abs() < micro());
    }

    #[test]
    fn unit_integrand_gives_total_increase() {
        let g = RealFn::power(3);
        let est = rs_integral(
            &RealFn::constant(int(1)),
            &g,
            &PartitionSequence::uniform(3),
            &micro(),
            1000,
        )
        .unwrap();
        assert_eq!(est.value, Some(int(1)));
    }

    #[test]
    fn decreasing_integrator_is_rejected() {
        let g = RealFn::new(|x| Some(-x.clone()));
        let err = rs_integral(&RealFn::identity(), &g, &PartitionSequence::dyadic(), &micro(), 16).unwrap_err();
        assert!(matches!(err, Error::DecreasingIntegrator { .. }));
    }

    #[test]
    fn partition_validation() {
        let bad = PartitionSequence::new(|_| vec![int(0), ratio(1, 2), ratio(1, 3), int(1)], |_| int(1));
        assert!(matches!(bad.partition(0), Err(Error::InvalidPartitionSequence { .. })));
        let lying_mesh = PartitionSequence::new(|_| vec![int(0), int(1)], |_| ratio(1, 2));
        assert!(lying_mesh.partition(0).is_err());
        assert!(matches!(
            PartitionSequence::dyadic().levels_within(0),
            Err(Error::InvalidHorizon { min: 1 })
        ));
        assert_eq!(PartitionSequence::uniform(3).levels_within(30).unwrap().len(), 4);
    }

    #[test]
    fn agreement_between_partition_families() {
        let x = RealFn::identity();
        let r = partition_agreement(
            &x,
            &x,
            &PartitionSequence::dyadic(),
            &PartitionSequence::uniform(3),
            &micro(),
            1 << 14,
        )
        .unwrap();
        assert!(r.verdict.holds(), "{:?}", r.verdict);

        let same = partition_agreement(
            &RealFn::step(ratio(1, 2)),
            &x,
            &PartitionSequence::dyadic(),
            &PartitionSequence::dyadic(),
            &micro(),
            64,
        )
        .unwrap();
        assert!(same.verdict.holds());

        let step = partition_agreement(
            &RealFn::step(ratio(1, 2)),
            &x,
            &PartitionSequence::dyadic(),
            &PartitionSequence::uniform(3),
            &micro(),
            1 << 10,
        )
        .unwrap();
        assert_ne!(step.verdict.outcome, Outcome::Holds);
    }

    #[test]
    fn uniform_continuity() {
        let v = check_uniform_continuity(&RealFn::power(2), 10, 12).unwrap();
        assert!(v.holds());

        let step = check_uniform_continuity(&RealFn::step(ratio(1, 2)), 3, 12).unwrap();
        assert_eq!(step.outcome, Outcome::Fails);
        match step.witness {
            Some(Witness::Pair { x, y, gap }) => {
                assert!(x < ratio(1, 2) && ratio(1, 2) <= y);
                assert_eq!(gap, int(1));
            }
            other => panic!("unexpected witness {other:?}"),
        }

        let unhinted_square = RealFn::new(|x| Some(x * x));
        assert_eq!(
            check_uniform_continuity(&unhinted_square, 10, 12).unwrap().outcome,
            Outcome::Unknown
        );

        let wrong = RealFn::new(|x| Some(x * x)).with_modulus(Modulus::Lipschitz(ratio(1, 2)));
        assert!(matches!(
            check_uniform_continuity(&wrong, 10, 4),
            Err(Error::HintViolation(_))
        ));

        let undefined_at_half = RealFn::new(|x| (*x != ratio(1, 2)).then(|| x.clone()));
        assert_eq!(
            check_uniform_continuity(&undefined_at_half, 2, 3).unwrap_err(),
            Error::NotEvaluable(ratio(1, 2))
        );
        assert!(check_uniform_continuity(&RealFn::identity(), 1, 3).is_err());
    }
}
