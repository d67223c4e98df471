//! The numeric contract every simulation routine is generic over.
//!
//! Both `f64` and [`Dual`](crate::Dual) implement [`Scalar`]. Code written
//! against the trait produces identical real parts under either type as long
//! as it evaluates in the same order, so a rollout can be run cheaply in
//! `f64` and then again in duals to get exact parameter derivatives.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// Lifts a plain number. The result carries no derivative information.
    fn from_f64(value: f64) -> Self;

    /// Real part. All comparisons and branches go through this.
    fn re(&self) -> f64;

    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tan(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn exp(&self) -> Self;
    fn tanh(&self) -> Self;
    /// Sign-of-real-part subgradient; the derivative at exactly zero is zero.
    fn abs(&self) -> Self;

    /// Unchecked square root. Yields non-finite values outside the domain.
    fn sqrt(&self) -> Self;
    /// Unchecked natural logarithm.
    fn ln(&self) -> Self;
    /// `self^p` for a constant exponent.
    fn powf(&self, p: f64) -> Self;
    /// `self^e` with a differentiable exponent, via `exp(e ln self)`.
    fn pow(&self, e: &Self) -> Self;

    /// True when the real part and every derivative component are finite.
    fn is_finite(&self) -> bool;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.re() == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.clone() / rhs.clone())
    }

    /// Square root restricted to positive arguments, where the derivative is
    /// finite. Zero is accepted only for plain numbers with no derivative part.
    fn try_sqrt(&self) -> Result<Self> {
        let x = self.re();
        if x > 0.0 || (x == 0.0 && self.is_constant()) {
            Ok(self.sqrt())
        } else {
            Err(Error::Domain {
                function: "sqrt",
                value: x,
            })
        }
    }

    fn try_ln(&self) -> Result<Self> {
        let x = self.re();
        if x > 0.0 {
            Ok(self.ln())
        } else {
            Err(Error::Domain {
                function: "log",
                value: x,
            })
        }
    }

    fn try_powf(&self, p: f64) -> Result<Self> {
        let x = self.re();
        let integral = p.fract() == 0.0;
        if x < 0.0 && !integral {
            return Err(Error::Domain {
                function: "pow",
                value: x,
            });
        }
        // d/dx x^p = p x^(p-1) blows up at zero for p < 1.
        if x == 0.0 && p < 1.0 && p != 0.0 && !self.is_constant() {
            return Err(Error::Domain {
                function: "pow",
                value: x,
            });
        }
        Ok(self.powf(p))
    }

    /// Whether this value carries no derivative information.
    fn is_constant(&self) -> bool;

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    /// Returns `self` if its real part is positive, otherwise zero.
    fn clamp_positive(self) -> Self {
        if self.re() > 0.0 {
            self
        } else {
            Self::zero()
        }
    }
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(value: f64) -> Self {
        value
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    #[inline]
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    #[inline]
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    #[inline]
    fn tan(&self) -> Self {
        f64::tan(*self)
    }
    #[inline]
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    #[inline]
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    #[inline]
    fn tanh(&self) -> Self {
        f64::tanh(*self)
    }
    #[inline]
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    #[inline]
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    #[inline]
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    #[inline]
    fn powf(&self, p: f64) -> Self {
        f64::powf(*self, p)
    }
    #[inline]
    fn pow(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    #[inline]
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    #[inline]
    fn is_constant(&self) -> bool {
        true
    }
}

/// Lifts a slice of plain numbers.
pub fn lift<S: Scalar>(values: &[f64]) -> Vec<S> {
    values.iter().map(|&v| S::from_f64(v)).collect()
}

/// Real parts of a slice of scalars.
pub fn real_parts<S: Scalar>(values: &[S]) -> Vec<f64> {
    values.iter().map(Scalar::re).collect()
}
