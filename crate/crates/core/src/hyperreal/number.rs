use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::rational::{fmt_ratio, int};
use crate::{Error, Rational, Result};

type Generator = Arc<dyn Fn(u64) -> Rational + Send + Sync>;

/// How far ahead of a monotone hint's start we look for a nonzero value
/// when justifying a division.
const NONZERO_SEARCH: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// x_n ≤ x_{n+1}
    Increasing,
    /// x_n ≥ x_{n+1}
    Decreasing,
}

impl Direction {
    fn flip(self) -> Self {
        match self {
            Self::Increasing => Self::Decreasing,
            Self::Decreasing => Self::Increasing,
        }
    }
}

/// Monotone for every index `n ≥ from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monotone {
    pub direction: Direction,
    pub from: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Limit {
    Finite(Rational),
    PosInfinity,
    NegInfinity,
}

impl Limit {
    fn neg(&self) -> Self {
        match self {
            Self::Finite(v) => Self::Finite(-v),
            Self::PosInfinity => Self::NegInfinity,
            Self::NegInfinity => Self::PosInfinity,
        }
    }

    fn sign(&self) -> i8 {
        match self {
            Self::Finite(v) if v.is_positive() => 1,
            Self::Finite(v) if v.is_negative() => -1,
            Self::Finite(_) => 0,
            Self::PosInfinity => 1,
            Self::NegInfinity => -1,
        }
    }

    fn infinite(sign: i8) -> Self {
        if sign > 0 {
            Self::PosInfinity
        } else {
            Self::NegInfinity
        }
    }

    fn add(&self, other: &Self) -> Option<Self> {
        use Limit::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (Finite(_), inf) | (inf, Finite(_)) => Some(inf.clone()),
            (PosInfinity, PosInfinity) => Some(PosInfinity),
            (NegInfinity, NegInfinity) => Some(NegInfinity),
            _ => None,
        }
    }

    fn mul(&self, other: &Self) -> Option<Self> {
        use Limit::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a * b)),
            _ if self.sign() == 0 || other.sign() == 0 => None,
            _ => Some(Self::infinite(self.sign() * other.sign())),
        }
    }

    fn div(&self, other: &Self) -> Option<Self> {
        use Limit::*;
        match (self, other) {
            (_, Finite(b)) if b.is_zero() => None,
            (Finite(a), Finite(b)) => Some(Finite(a / b)),
            (Finite(_), _) => Some(Finite(Rational::zero())),
            (_, Finite(b)) => Some(Self::infinite(self.sign() * if b.is_positive() { 1 } else { -1 })),
            _ => None,
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => f.write_str(&fmt_ratio(v)),
            Self::PosInfinity => f.write_str("+inf"),
            Self::NegInfinity => f.write_str("-inf"),
        }
    }
}

/// Declared facts about a sequence. They are certificates: verdicts other
/// than sampling-based failures rely on them, and they are checked against
/// sampled values before use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hints {
    pub monotone: Option<Monotone>,
    pub limit: Option<Limit>,
    /// The sequence is identically this value (a standard number).
    pub constant: Option<Rational>,
}

impl Hints {
    /// The declared limit, counting constants as their own limit.
    pub fn effective_limit(&self) -> Option<Limit> {
        match &self.constant {
            Some(c) => Some(Limit::Finite(c.clone())),
            None => self.limit.clone(),
        }
    }

    fn constant(value: Rational) -> Self {
        Self {
            monotone: None,
            limit: Some(Limit::Finite(value.clone())),
            constant: Some(value),
        }
    }

    fn negated(&self) -> Self {
        Self {
            monotone: self.monotone.map(|m| Monotone {
                direction: m.direction.flip(),
                from: m.from,
            }),
            limit: self.limit.as_ref().map(Limit::neg),
            constant: self.constant.as_ref().map(|c| -c),
        }
    }

    fn scaled(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::constant(Rational::zero());
        }
        let monotone = self.monotone.map(|m| Monotone {
            direction: if factor.is_positive() {
                m.direction
            } else {
                m.direction.flip()
            },
            from: m.from,
        });
        Self {
            monotone,
            limit: self
                .effective_limit()
                .and_then(|l| l.mul(&Limit::Finite(factor.clone()))),
            constant: self.constant.as_ref().map(|c| c * factor),
        }
    }
}

/// An element of the sequence model of *ℝ: a deterministic rule
/// index ↦ exact rational, read under eventual-truth (Fréchet filter)
/// semantics, with optional [`Hints`].
#[derive(Clone)]
pub struct HyperReal {
    generator: Generator,
    hints: Hints,
}

impl HyperReal {
    /// A sequence with no hints; only sampling-based verdicts apply to it.
    pub fn from_fn<F>(rule: F) -> Self
    where
        F: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        Self {
            generator: Arc::new(rule),
            hints: Hints::default(),
        }
    }

    /// The standard number *c: the constant sequence.
    pub fn standard(value: Rational) -> Self {
        let v = value.clone();
        Self {
            generator: Arc::new(move |_| v.clone()),
            hints: Hints::constant(value),
        }
    }

    /// ω = [n ↦ n], increasing with limit +∞.
    pub fn omega() -> Self {
        Self::from_fn(|n| Rational::from_integer(n.into()))
            .with_monotone(Direction::Increasing, 0)
            .with_limit(Limit::PosInfinity)
    }

    /// Precomputed values for indices `0..values.len()`, `rule` beyond.
    pub fn tabulated<F>(values: Vec<Rational>, rule: F) -> Self
    where
        F: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        Self::from_fn(move |n| match values.get(n as usize) {
            Some(v) => v.clone(),
            None => rule(n),
        })
    }

    pub fn with_monotone(mut self, direction: Direction, from: u64) -> Self {
        self.hints.monotone = Some(Monotone { direction, from });
        self
    }

    pub fn with_limit(mut self, limit: Limit) -> Self {
        self.hints.limit = Some(limit);
        self
    }

    pub fn hints(&self) -> &Hints {
        &self.hints
    }

    pub fn at(&self, index: u64) -> Rational {
        (self.generator)(index)
    }

    pub fn checked_div(&self, divisor: &HyperReal) -> Result<HyperReal> {
        let start = nonzero_tail(divisor)?;

        let limit = match (self.hints.effective_limit(), divisor.hints.effective_limit()) {
            (Some(a), Some(b)) => a.div(&b),
            _ => None,
        };
        let monotone = match (&self.hints.constant, &divisor.hints.constant) {
            (_, Some(c)) => self.hints.scaled(&c.recip()).monotone,
            // c / y: 1/y reverses y's direction on a tail where y keeps one sign
            (Some(c), None) => match (divisor.hints.monotone, start) {
                (Some(m), Some(k)) if !c.is_zero() => Some(Monotone {
                    direction: if c.is_positive() {
                        m.direction.flip()
                    } else {
                        m.direction
                    },
                    from: k.max(m.from),
                }),
                _ => None,
            },
            _ => None,
        };
        let constant = match (&self.hints.constant, &divisor.hints.constant) {
            (Some(a), Some(b)) => Some(a / b),
            _ => None,
        };

        let (x, y) = (Arc::clone(&self.generator), Arc::clone(&divisor.generator));
        Ok(Self {
            generator: Arc::new(move |n| {
                let d = y(n);
                // finitely many zero divisors do not matter under the filter
                if d.is_zero() {
                    Rational::zero()
                } else {
                    x(n) / d
                }
            }),
            hints: Hints {
                monotone,
                limit,
                constant,
            },
        })
    }

    pub fn recip(&self) -> Result<HyperReal> {
        HyperReal::standard(Rational::one()).checked_div(self)
    }

    fn zip_with(&self, other: &HyperReal, op: fn(&Rational, &Rational) -> Rational, hints: Hints) -> Self {
        let (x, y) = (Arc::clone(&self.generator), Arc::clone(&other.generator));
        Self {
            generator: Arc::new(move |n| op(&x(n), &y(n))),
            hints,
        }
    }
}

/// Index from which `y` is certainly nonzero, `None` when only eventual
/// nonvanishing is known; error when nothing justifies it.
fn nonzero_tail(y: &HyperReal) -> Result<Option<u64>> {
    if let Some(c) = &y.hints.constant {
        return if c.is_zero() {
            Err(Error::NoNonzeroTail)
        } else {
            Ok(Some(0))
        };
    }
    if let Some(m) = y.hints.monotone {
        let away_from_zero = |v: &Rational| match m.direction {
            Direction::Increasing => v.is_positive(),
            Direction::Decreasing => v.is_negative(),
        };
        if let Some(k) = (m.from..m.from + NONZERO_SEARCH).find(|&k| away_from_zero(&y.at(k))) {
            return Ok(Some(k));
        }
    }
    match &y.hints.limit {
        Some(limit) if limit.sign() != 0 => Ok(None),
        _ => Err(Error::NoNonzeroTail),
    }
}

fn add_hints(a: &Hints, b: &Hints) -> Hints {
    let monotone = match (&a.constant, &b.constant, a.monotone, b.monotone) {
        (Some(_), _, _, m) | (_, Some(_), m, _) => m,
        (None, None, Some(x), Some(y)) if x.direction == y.direction => Some(Monotone {
            direction: x.direction,
            from: x.from.max(y.from),
        }),
        _ => None,
    };
    let limit = match (a.effective_limit(), b.effective_limit()) {
        (Some(x), Some(y)) => x.add(&y),
        _ => None,
    };
    let constant = match (&a.constant, &b.constant) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    Hints {
        monotone,
        limit,
        constant,
    }
}

fn mul_hints(a: &Hints, b: &Hints) -> Hints {
    match (&a.constant, &b.constant) {
        (Some(c), _) => b.scaled(c),
        (_, Some(c)) => a.scaled(c),
        _ => Hints {
            monotone: None,
            limit: match (a.effective_limit(), b.effective_limit()) {
                (Some(x), Some(y)) => x.mul(&y),
                _ => None,
            },
            constant: None,
        },
    }
}

impl Add for &HyperReal {
    type Output = HyperReal;

    fn add(self, rhs: &HyperReal) -> HyperReal {
        self.zip_with(rhs, |a, b| a + b, add_hints(&self.hints, &rhs.hints))
    }
}

impl Neg for &HyperReal {
    type Output = HyperReal;

    fn neg(self) -> HyperReal {
        let x = Arc::clone(&self.generator);
        HyperReal {
            generator: Arc::new(move |n| -x(n)),
            hints: self.hints.negated(),
        }
    }
}

impl Sub for &HyperReal {
    type Output = HyperReal;

    fn sub(self, rhs: &HyperReal) -> HyperReal {
        self.zip_with(rhs, |a, b| a - b, add_hints(&self.hints, &rhs.hints.negated()))
    }
}

impl Mul for &HyperReal {
    type Output = HyperReal;

    fn mul(self, rhs: &HyperReal) -> HyperReal {
        self.zip_with(rhs, |a, b| a * b, mul_hints(&self.hints, &rhs.hints))
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr for HyperReal {
            type Output = HyperReal;

            fn $method(self, rhs: HyperReal) -> HyperReal {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for HyperReal {
    type Output = HyperReal;

    fn neg(self) -> HyperReal {
        -&self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Pointwise combination of two sequences.
pub fn arith(x: &HyperReal, y: &HyperReal, op: ArithOp) -> Result<HyperReal> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

impl fmt::Debug for HyperReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = (0..4).map(|n| fmt_ratio(&self.at(n))).collect();
        f.debug_struct("HyperReal")
            .field("head", &head)
            .field("hints", &self.hints)
            .finish()
    }
}

impl From<i64> for HyperReal {
    fn from(value: i64) -> Self {
        HyperReal::standard(int(value))
    }
}
