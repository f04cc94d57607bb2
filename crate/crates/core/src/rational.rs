//! Exact rational numbers used for every distance value.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact rational number in reduced form with a positive denominator.
///
/// Displayed as `p/q`, or just `p` when the denominator is one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i128>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("rational literal `{0}` is out of range")]
    OutOfRange(String),
}

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics if `denom` is zero.
    pub fn new(numer: i128, denom: i128) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Rational(Ratio::new(1, 1i128 << k))
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        checked_op(self.0, other.0, |a, b, c, d| {
            Some((a.checked_mul(d)?.checked_add(c.checked_mul(b)?)?, b.checked_mul(d)?))
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        checked_op(self.0, other.0, |a, b, c, d| {
            Some((a.checked_mul(d)?.checked_sub(c.checked_mul(b)?)?, b.checked_mul(d)?))
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        checked_op(self.0, other.0, |a, b, c, d| Some((a.checked_mul(c)?, b.checked_mul(d)?)))
    }
}

fn checked_op(
    x: Ratio<i128>,
    y: Ratio<i128>,
    f: impl Fn(i128, i128, i128, i128) -> Option<(i128, i128)>,
) -> Option<Rational> {
    let (n, d) = f(*x.numer(), *x.denom(), *y.numer(), *y.denom())?;
    Some(Rational(Ratio::new(n, d)))
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n as i128)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p/q`, integers, and finite decimals such as `-0.125`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let invalid = || ParseRationalError::Invalid(s.to_string());
        let out_of_range = || ParseRationalError::OutOfRange(s.to_string());

        if let Some((p, q)) = s.split_once('/') {
            let p = parse_int(p).ok_or_else(invalid)?.ok_or_else(out_of_range)?;
            let q = parse_int(q).ok_or_else(invalid)?.ok_or_else(out_of_range)?;
            if q == 0 {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            return Ok(Rational(Ratio::new(p, q)));
        }

        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(invalid());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let mut numer: i128 = 0;
        for b in int_part.bytes().chain(frac_part.bytes()) {
            numer = numer
                .checked_mul(10)
                .and_then(|n| n.checked_add((b - b'0') as i128))
                .ok_or_else(out_of_range)?;
        }
        let denom = u32::try_from(frac_part.len())
            .ok()
            .and_then(|e| 10i128.checked_pow(e))
            .ok_or_else(out_of_range)?;
        if negative {
            numer = -numer;
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }
}

/// `None` on syntax error, `Some(None)` on overflow.
fn parse_int(s: &str) -> Option<Option<i128>> {
    let s = s.trim();
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(s.parse::<i128>().ok())
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(r("3/4"), Rational::new(3, 4));
        assert_eq!(r("6/8"), Rational::new(3, 4));
        assert_eq!(r("0.75"), Rational::new(3, 4));
        assert_eq!(r("2"), Rational::from_integer(2));
        assert_eq!(r("-0.125"), Rational::new(-1, 8));
        assert_eq!(r(".5"), Rational::new(1, 2));
        assert_eq!(r("1."), Rational::ONE);
        assert_eq!(r("3/-6"), Rational::new(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!("".parse::<Rational>(), Err(ParseRationalError::Empty));
        assert!(matches!("1/0".parse::<Rational>(), Err(ParseRationalError::ZeroDenominator(_))));
        for bad in ["abc", "1/2/3", "1e3", ".", "-", "1.2.3", "0x10", "1/ "] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
        assert!(matches!(
            "1000000000000000000000000000000000000000000".parse::<Rational>(),
            Err(ParseRationalError::OutOfRange(_))
        ));
    }

    #[test]
    fn displays_reduced() {
        assert_eq!(Rational::new(6, 8).to_string(), "3/4");
        assert_eq!(Rational::new(4, 2).to_string(), "2");
        assert_eq!(Rational::ZERO.to_string(), "0");
        assert_eq!(Rational::new(1, -3).to_string(), "-1/3");
    }

    #[test]
    fn ordering_is_exact() {
        assert!(r("1/3") < r("0.3334"));
        assert!(r("1/3") > r("0.3333"));
        assert_eq!(r("1/3").max(r("2/6")), r("1/3"));
    }

    #[test]
    fn checked_arithmetic() {
        assert_eq!(r("1/2").checked_add(&r("1/3")), Some(r("5/6")));
        assert_eq!(r("1/2").checked_sub(&r("3/4")), Some(r("-1/4")));
        assert_eq!(r("2/3").checked_mul(&r("3/4")), Some(r("1/2")));
        assert_eq!(Rational::from_integer(i128::MAX).checked_add(&Rational::ONE), None);
    }

    proptest::proptest! {
        #[test]
        fn display_parse_roundtrip(p in -10_000i128..10_000, q in 1i128..10_000) {
            let x = Rational::new(p, q);
            proptest::prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
