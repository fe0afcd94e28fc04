//! The scalar interface shared by the exact linear algebra.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// An exact field embedded in the complex numbers and stable under complex
/// conjugation.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn mul_ref(&self, other: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    /// Sign of a real element; `Err(NotReal)` otherwise.
    fn real_sign(&self) -> Result<i8>;
    /// `Some` when the element lies in Q.
    fn as_rational(&self) -> Option<Rational>;
    fn to_cyclo(&self) -> Cyclo;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_int(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div_ref(&self, other: &Self) -> Result<Self> {
        other.inv().map(|i| self.mul_ref(&i)).ok_or(Error::DivisionByZero)
    }

    fn scale(&self, r: &Rational) -> Self {
        self.mul_ref(&Self::from_rational(r))
    }

    fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv().ok_or(Error::DivisionByZero)? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul_ref(&base);
        }
        Ok(acc)
    }

    fn is_real(&self) -> bool {
        self.conj() == *self
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn real_sign(&self) -> Result<i8> {
        Ok(self.signum())
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn to_cyclo(&self) -> Cyclo {
        Cyclo::rational(self.clone())
    }
    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
}
