//! Exact rational scalars.
//!
//! Mixture weights, interval endpoints and utility values are all carried as
//! reduced fractions over `i128`. Every arithmetic operation is checked; an
//! overflow panics instead of wrapping, so a result is either exact or absent.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// A reduced fraction `numer / denom` with `denom > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Builds `numer / denom`, reducing to canonical form. Panics on a zero
    /// denominator; use [`Rational::try_new`] for untrusted input.
    pub fn new(numer: i128, denom: i128) -> Self {
        Self::try_new(numer, denom).expect("zero denominator")
    }

    pub fn try_new(numer: i128, denom: i128) -> Option<Self> {
        if denom == 0 {
            None
        } else {
            Some(Rational(Ratio::new(numer, denom)))
        }
    }

    pub fn integer(n: i128) -> Self {
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp(&Ratio::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// True when the value lies in the closed unit interval.
    pub fn is_unit(&self) -> bool {
        *self >= Self::ZERO && *self <= Self::ONE
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Self::ONE - *self
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn midpoint(a: Rational, b: Rational) -> Rational {
        (a + b) / Rational::integer(2)
    }

    pub fn min(self, other: Rational) -> Rational {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0.checked_add(&rhs.0).expect("rational overflow in add"))
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0.checked_sub(&rhs.0).expect("rational overflow in sub"))
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0.checked_mul(&rhs.0).expect("rational overflow in mul"))
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0.checked_div(&rhs.0).expect("rational overflow in div"))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational::ZERO - self
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl From<i128> for Rational {
    fn from(n: i128) -> Self {
        Rational::integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
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

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let invalid = || ParseRationalError::Invalid(s.to_string());
        match s.split_once('/') {
            None => s.parse::<i128>().map(Rational::integer).map_err(|_| invalid()),
            Some((n, d)) => {
                let n = n.trim().parse::<i128>().map_err(|_| invalid())?;
                let d = d.trim().parse::<i128>().map_err(|_| invalid())?;
                Rational::try_new(n, d).ok_or_else(|| ParseRationalError::ZeroDenominator(s.to_string()))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::integer(n as i128)),
        }
    }
}

/// Shorthand used throughout the crate and its tests.
pub fn q(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = q(6, -4);
        assert_eq!(r.numer(), -3);
        assert_eq!(r.denom(), 2);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(q(4, 2).to_string(), "2");
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/9".parse::<Rational>().unwrap(), q(1, 3));
        assert_eq!("-7".parse::<Rational>().unwrap(), Rational::integer(-7));
        assert!(matches!("1/0".parse::<Rational>(), Err(ParseRationalError::ZeroDenominator(_))));
        assert!("a/b".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_as_string() {
        let json = serde_json::to_string(&q(1, 2)).unwrap();
        assert_eq!(json, "\"1/2\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q(1, 2));
        let int: Rational = serde_json::from_str("3").unwrap();
        assert_eq!(int, Rational::integer(3));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q(1, 3) + q(1, 6), q(1, 2));
        assert_eq!(q(1, 3) * q(3, 4), q(1, 4));
        assert_eq!(q(1, 3) / q(2, 3), q(1, 2));
        assert_eq!(q(1, 4).complement(), q(3, 4));
        assert!(q(1, 2).is_unit());
        assert!(!q(3, 2).is_unit());
    }

    #[test]
    #[should_panic(expected = "rational overflow")]
    fn overflow_panics() {
        let big = Rational::integer(i128::MAX / 2 + 1);
        let _ = big + big;
    }
}
