//! Numbers of the form `a + b√2` with rational `a`, `b`.
//!
//! This is the smallest exact field that contains both rational and
//! irrational points, which is all the pointwise rational/irrational relation
//! needs. Comparison is exact: the sign of `a + b√2` is decided by comparing
//! `a²` with `2b²`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
}

impl Surd {
    pub const ZERO: Surd = Surd { a: Rational::ZERO, b: Rational::ZERO };
    pub const ONE: Surd = Surd { a: Rational::ONE, b: Rational::ZERO };

    pub fn new(a: Rational, b: Rational) -> Self {
        Surd { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        Surd { a, b: Rational::ZERO }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Surd { a: self.a, b: -self.b }
    }

    /// `a² - 2b²`, which is rational and nonzero for every nonzero surd.
    pub fn norm(&self) -> Rational {
        self.a * self.a - Rational::integer(2) * self.b * self.b
    }

    pub fn signum(&self) -> i32 {
        let (sa, sb) = (self.a.signum(), self.b.signum());
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // opposite signs: the term with the larger square wins
        let lhs = self.a * self.a;
        let rhs = Rational::integer(2) * self.b * self.b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        *self >= Surd::ZERO && *self <= Surd::ONE
    }

    pub fn complement(&self) -> Surd {
        Surd::ONE - *self
    }

    /// Rational bounds `lo < value < hi` (or equal, when rational) within `1/denom` or so.
    pub fn bracket(&self, denom: i128) -> (Rational, Rational) {
        if self.is_rational() {
            return (self.a, self.a);
        }
        let (r_lo, r_hi) = sqrt2_bracket(denom);
        if self.b.is_positive() {
            (self.a + self.b * r_lo, self.a + self.b * r_hi)
        } else {
            (self.a + self.b * r_hi, self.a + self.b * r_lo)
        }
    }
}

/// Rational `p/denom` and `(p+1)/denom` bracketing √2.
fn sqrt2_bracket(denom: i128) -> (Rational, Rational) {
    let target = 2 * denom * denom;
    let p = num_integer::Roots::sqrt(&target);
    let p = if p * p > target { p - 1 } else { p };
    (Rational::new(p, denom), Rational::new(p + 1, denom))
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        Surd { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        Surd { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let two = Rational::integer(2);
        Surd { a: self.a * rhs.a + two * self.b * rhs.b, b: self.a * rhs.b + self.b * rhs.a }
    }
}

impl Div for Surd {
    type Output = Surd;
    fn div(self, rhs: Surd) -> Surd {
        assert!(!rhs.is_zero(), "division by zero");
        let n = rhs.norm();
        let num = self * rhs.conjugate();
        Surd { a: num.a / n, b: num.b / n }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -self.a, b: -self.b }
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Self {
        Surd::rational(r)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}√2", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}√2", self.a, -self.b)
        } else {
            write!(f, "{}+{}√2", self.a, self.b)
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
