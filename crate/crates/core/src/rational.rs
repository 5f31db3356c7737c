//! Arbitrary-precision rationals with reduction guaranteed by
//! construction.
//!
//! This is a thin newtype over [`num_rational::BigRational`], which
//! already maintains the invariants we rely on everywhere (gcd of
//! numerator and denominator is 1, denominator strictly positive). The
//! wrapper pins down construction errors, the `"p/q"` display format
//! used in JSON output, and keeps the rest of the crate independent of
//! the backing library.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// num/den, reduced, denominator made positive. Fails on den == 0.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        Self::from_big(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    /// Ratio of two counts, e.g. binomial coefficients.
    pub fn from_counts(num: &BigUint, den: &BigUint) -> Result<Self> {
        Self::from_big(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Numerator after reduction; carries the sign.
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator after reduction; always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Smallest integer >= self.
    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Nearest f64; loses precision by design (used only for reporting
    /// and sigma-band comparisons, never for exact checks).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    /// Always `numerator/denominator`, even for integers ("4/1"), so
    /// the serialized form is uniform.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }

        impl<'a> $trait<&'a Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }

        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }

        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    /// Division panics on a zero divisor, mirroring integer division.
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn construction_reduces() {
        let x = r(10, 6);
        assert_eq!(x.numer(), &BigInt::from(5));
        assert_eq!(x.denom(), &BigInt::from(3));
        assert_eq!(x.to_string(), "5/3");
    }

    #[test]
    fn denominator_sign_normalized() {
        let x = r(1, -2);
        assert_eq!(x.to_string(), "-1/2");
        assert!(x.is_negative());
        assert_eq!(r(-3, -6), r(1, 2));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(Rational::new(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(r(1, 3) + r(1, 6), r(1, 2));
        assert_eq!(r(1, 2) - r(2, 3), r(-1, 6));
        assert_eq!(r(2, 3) * r(9, 4), r(3, 2));
        assert_eq!(r(1, 2) / r(3, 4), r(2, 3));
        assert_eq!(-r(1, 2), r(-1, 2));
    }

    #[test]
    fn ordering_is_numeric() {
        assert!(r(1, 3) < r(1, 2));
        assert!(r(-1, 2) < r(0, 1));
        assert!(r(7, 8) < Rational::one());
    }

    #[test]
    fn ceil_values() {
        assert_eq!(r(5, 3).ceil_int(), BigInt::from(2));
        assert_eq!(r(6, 3).ceil_int(), BigInt::from(2));
        assert_eq!(r(-1, 2).ceil_int(), BigInt::from(0));
        assert_eq!(Rational::zero().ceil_int(), BigInt::from(0));
    }

    #[test]
    fn display_always_has_slash() {
        assert_eq!(Rational::from_integer(4).to_string(), "4/1");
        assert_eq!(Rational::zero().to_string(), "0/1");
    }

    #[test]
    fn serializes_as_string() {
        let json = serde_json::to_string(&r(2, 3)).unwrap();
        assert_eq!(json, "\"2/3\"");
    }

    #[test]
    fn sum_over_iterator() {
        let total: Rational = (1..=4).map(|d| r(1, d)).sum();
        assert_eq!(total, r(25, 12));
    }
}
