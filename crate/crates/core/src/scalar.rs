//! Scalar traits the algebra is generic over.
//!
//! Everything in this crate is exact. The traits are implemented for
//! arbitrary-precision rationals (the default, see [`crate::Rational`]),
//! machine rationals `Ratio<i64>` / `Ratio<i128>` for cheap property tests,
//! and univariate polynomials over any ring (used for symbolic degrees).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

/// A commutative ring with exact equality.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Ring for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}
impl Field for BigRational {}

impl Ring for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }
}
impl Field for Ratio<i64> {}

impl Ring for Ratio<i128> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }
}
impl Field for Ratio<i128> {}

/// Shorthand for building a big rational from a numerator and denominator.
///
/// Panics if `den == 0`.
pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Big rational from an integer.
pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
