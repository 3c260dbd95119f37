//! Exact rational helpers.
//!
//! Every rational in reports and input files is written as `p/q`, with the
//! denominator always present (`4/1`, not `4`).

use std::cmp::Ordering;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// numer/denom in lowest terms. Panics if `denom` is 0.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    assert!(denom != 0, "zero denominator");
    // reduce on machine integers; i128 keeps i64::MIN negation safe
    let (mut n, mut d) = (i128::from(numer), i128::from(denom));
    let g = n.gcd(&d);
    n /= g;
    d /= g;
    if d < 0 {
        n = -n;
        d = -d;
    }
    Rational::new_raw(BigInt::from(n), BigInt::from(d))
}

/// Ordering by cross-multiplication, which beats the generic comparison
/// when denominators differ and are small.
pub fn cmp_ratio(a: &Rational, b: &Rational) -> Ordering {
    if a.denom() == b.denom() {
        a.numer().cmp(b.numer())
    } else {
        (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
    }
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `p/q` with the denominator always written out.
pub fn fmt_ratio(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{input:?} is not an exact rational of the form p/q")]
pub struct ParseRatioError {
    pub input: String,
}

/// Parses `p/q` or a bare integer `p`. Decimal and exponent notation are
/// rejected so that no floating-point value can sneak into a measure.
pub fn parse_ratio(input: &str) -> std::result::Result<Rational, ParseRatioError> {
    let err = || ParseRatioError {
        input: input.to_owned(),
    };
    let trimmed = input.trim();
    let valid_int = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let (numer, denom) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    if !valid_int(numer) || !valid_int(denom) {
        return Err(err());
    }
    let numer = BigInt::from_str(numer).map_err(|_| err())?;
    let denom = BigInt::from_str(denom).map_err(|_| err())?;
    if denom.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(numer, denom))
}

pub fn pow2(n: u32) -> Rational {
    Rational::from_integer(BigInt::one() << n)
}

/// floor(value * 2^n) / 2^n
pub fn floor_dyadic(value: &Rational, n: u32) -> Rational {
    let scale = BigInt::one() << n;
    let scaled = value * Rational::from_integer(scale.clone());
    Rational::new(scaled.numer().div_floor(scaled.denom()), scale)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn max_abs<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Rational {
    values
        .into_iter()
        .map(|v| v.abs())
        .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_reduces_and_normalizes_sign() {
        assert_eq!(ratio(6, -4), Rational::new(BigInt::from(-3), BigInt::from(2)));
        assert_eq!(ratio(0, -7), int(0));
        assert_eq!(ratio(i64::MIN, i64::MIN), int(1));
        assert_eq!(fmt_ratio(&ratio(4, 2)), "2/1");
    }

    #[test]
    fn cross_multiplied_ordering() {
        let cases = [
            (ratio(1, 3), ratio(1, 2)),
            (ratio(-1, 2), ratio(-1, 3)),
            (ratio(2, 4), ratio(1, 2)),
        ];
        for (a, b) in cases {
            assert_eq!(cmp_ratio(&a, &b), a.cmp(&b));
            assert_eq!(cmp_ratio(&b, &a), b.cmp(&a));
        }
    }

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(fmt_ratio(&int(4)), "4/1");
        assert_eq!(fmt_ratio(&ratio(-2, 4)), "-1/2");
        assert_eq!(fmt_ratio(&Rational::zero()), "0/1");
    }

    #[test]
    fn parses_exact_forms_only() {
        assert_eq!(parse_ratio("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_ratio("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_ratio("7").unwrap(), int(7));
        for bad in ["0.5", "1e3", "1/0", "", "/3", "a/b", "1/-", "1//2"] {
            assert!(parse_ratio(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn dyadic_floor() {
        assert_eq!(floor_dyadic(&ratio(3, 10), 2), ratio(1, 4));
        assert_eq!(floor_dyadic(&int(1), 2), int(1));
        assert_eq!(floor_dyadic(&ratio(7, 8), 1), ratio(1, 2));
    }
}
