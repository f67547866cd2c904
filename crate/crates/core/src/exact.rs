//! Arbitrary-precision rational scalars and the coefficient trait shared by
//! the exact and floating-point polynomial layers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exact rational scalar. All symbolic identity checks run over this type so
/// that a zero residual means a genuinely zero residual.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn from_integer(n: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// p/q with q != 0.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        ExactScalar(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactScalar(self.0.abs())
    }

    /// Exact integer power; negative exponents invert (self must be nonzero).
    pub fn powi(&self, e: i32) -> Self {
        if e >= 0 {
            ExactScalar(self.0.pow(e))
        } else {
            assert!(!self.is_zero(), "inverting zero");
            ExactScalar(self.0.pow(e))
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "inverting zero");
        ExactScalar(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational out of f64 range")
    }

    /// Exact conversion of a finite double into a rational.
    pub fn from_f64_exact(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(ExactScalar)
            .ok_or_else(|| Error::InvalidParameter(format!("non-finite value {x}")))
    }

    /// Parses "p/q" or a plain integer.
    pub fn parse(s: &str) -> Result<Self> {
        BigRational::from_str(s.trim())
            .map(ExactScalar)
            .map_err(|e| Error::InvalidParameter(format!("cannot parse '{s}' as rational: {e}")))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar((self.0).$method(rhs.0))
            }
        }
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar((self.0).$method(&rhs.0))
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "division by zero");
        ExactScalar(self.0 / rhs.0)
    }
}

impl Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "division by zero");
        ExactScalar(&self.0 / &rhs.0)
    }
}

impl Div<&ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "division by zero");
        ExactScalar(self.0 / &rhs.0)
    }
}

impl Div<ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "division by zero");
        ExactScalar(&self.0 / rhs.0)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-&self.0)
    }
}

/// Coefficient ring shared by the exact and double-precision polynomial
/// layers. Zero pruning relies on exact equality, which is the right notion
/// for rationals and acceptable for doubles because every construction here
/// produces exact zeros only through integer exponent bookkeeping.
pub trait Coeff: Clone + PartialEq {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn is_c_zero(&self) -> bool;
    fn c_add(&self, rhs: &Self) -> Self;
    fn c_sub(&self, rhs: &Self) -> Self;
    fn c_mul(&self, rhs: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn from_int(n: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Coeff for ExactScalar {
    fn c_zero() -> Self {
        ExactScalar::zero()
    }
    fn c_one() -> Self {
        ExactScalar::one()
    }
    fn is_c_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn c_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn c_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        ExactScalar::from_integer(n)
    }
    fn to_f64(&self) -> f64 {
        self.to_f64()
    }
}

impl Coeff for f64 {
    fn c_zero() -> Self {
        0.0
    }
    fn c_one() -> Self {
        1.0
    }
    fn is_c_zero(&self) -> bool {
        *self == 0.0
    }
    fn c_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn c_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn c_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}
