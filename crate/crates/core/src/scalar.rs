//! Scalar abstraction shared by the float, rational and number-field backends.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, ToPrimitive, Zero};

use crate::algebra::AlgebraError;

/// Arithmetic needed by the maps and orbit code.
///
/// Constants are built relative to an existing value because number-field
/// elements need to know which field they live in.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when comparisons are certified rather than rounded.
    const EXACT: bool;

    fn from_i64_like(&self, k: i64) -> Self;

    /// Nearest representable value. Exact backends convert the binary
    /// expansion of `x` without rounding.
    fn from_f64_like(&self, x: f64) -> Self;

    fn certified_sign(&self) -> Result<Ordering, AlgebraError>;

    fn as_f64(&self) -> f64;

    fn floor_i64(&self) -> Result<i64, AlgebraError>;

    fn zero_like(&self) -> Self {
        self.from_i64_like(0)
    }

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }

    fn is_zero_value(&self) -> Result<bool, AlgebraError> {
        Ok(self.certified_sign()? == Ordering::Equal)
    }

    fn cmp_value(&self, other: &Self) -> Result<Ordering, AlgebraError> {
        (self.clone() - other.clone()).certified_sign()
    }

    fn abs_value(&self) -> Result<Self, AlgebraError> {
        Ok(if self.certified_sign()? == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        })
    }

    fn powi_like(&self, n: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_i64_like(&self, k: i64) -> Self {
                k as $t
            }

            fn from_f64_like(&self, x: f64) -> Self {
                x as $t
            }

            fn certified_sign(&self) -> Result<Ordering, AlgebraError> {
                self.partial_cmp(&0.0).ok_or(AlgebraError::NotFinite)
            }

            fn as_f64(&self) -> f64 {
                *self as f64
            }

            fn floor_i64(&self) -> Result<i64, AlgebraError> {
                if !Float::is_finite(*self) {
                    return Err(AlgebraError::NotFinite);
                }
                Ok(Float::floor(*self) as i64)
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64_like(&self, k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }

    fn from_f64_like(&self, x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }

    fn certified_sign(&self) -> Result<Ordering, AlgebraError> {
        Ok(self.numer().sign().cmp(&num_bigint::Sign::NoSign))
    }

    fn as_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn floor_i64(&self) -> Result<i64, AlgebraError> {
        self.numer()
            .div_floor(self.denom())
            .to_i64()
            .ok_or(AlgebraError::Overflow)
    }
}

/// Conversion that survives numerators and denominators beyond the f64 range.
pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer();
    let d = q.denom();
    let shift = n.bits() as i64 - d.bits() as i64 - 60;
    let scaled = if shift >= 0 {
        n / (d << shift as usize)
    } else {
        (n << (-shift) as usize) / d
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}
