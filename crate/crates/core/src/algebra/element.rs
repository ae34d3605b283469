use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::BetaField;
use super::poly::QPoly;
use super::AlgebraError;
use crate::scalar::Scalar;

/// Exact element `Σ c_i β^i` of ℚ(β), stored as integer numerators over a
/// common positive denominator in lowest terms.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<BetaField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElement {
    pub(crate) fn from_parts(field: Arc<BetaField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), field.degree());
        if den.is_negative() {
            den = -den;
            for n in num.iter_mut() {
                *n = -&*n;
            }
        }
        let mut g = den.clone();
        for n in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if !g.is_one() && !g.is_zero() {
            den /= &g;
            for n in num.iter_mut() {
                *n /= &g;
            }
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        }
        FieldElement { field, num, den }
    }

    pub fn field(&self) -> &Arc<BetaField> {
        &self.field
    }

    /// Rational coefficients `c_0, …, c_{N-1}`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch)
        }
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let l = self.den.lcm(&other.den);
        let fa = &l / &self.den;
        let fb = &l / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| if negate { a * &fa - b * &fb } else { a * &fa + b * &fb })
            .collect();
        FieldElement::from_parts(self.field.clone(), num, l)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_field(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_field(other)?;
        Ok(self.combine(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_field(other)?;
        if other.is_generator() {
            return Ok(self.mul_generator());
        }
        if self.is_generator() {
            return Ok(other.mul_generator());
        }
        let n = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let a = self.field.coeffs();
        for k in (n..2 * n - 1).rev() {
            let t = std::mem::take(&mut prod[k]);
            if t.is_zero() {
                continue;
            }
            for (i, ai) in a.iter().enumerate() {
                if !ai.is_zero() {
                    prod[k - n + i] += &t * ai;
                }
            }
        }
        prod.truncate(n);
        Ok(FieldElement::from_parts(
            self.field.clone(),
            prod,
            &self.den * &other.den,
        ))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_field(other)?;
        self.try_mul(&other.inverse()?)
    }

    fn is_generator(&self) -> bool {
        self.den.is_one()
            && self
                .num
                .iter()
                .enumerate()
                .all(|(i, c)| if i == 1 { c.is_one() } else { c.is_zero() })
    }

    /// `β · self`, using `β^N = Σ a_i β^i` directly.
    pub fn mul_generator(&self) -> Self {
        let n = self.num.len();
        let top = &self.num[n - 1];
        let mut out = Vec::with_capacity(n);
        for (i, ai) in self.field.coeffs().iter().enumerate() {
            let mut v = if i == 0 {
                BigInt::zero()
            } else {
                self.num[i - 1].clone()
            };
            if !top.is_zero() {
                v += top * ai;
            }
            out.push(v);
        }
        FieldElement::from_parts(self.field.clone(), out, self.den.clone())
    }

    /// Multiplicative inverse by the extended Euclidean algorithm modulo P.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let a = QPoly::new(self.coeffs());
        let (g, s) = a.ext_gcd_mod(self.field.reduction_poly());
        if g.degree() != Some(0) {
            return Err(AlgebraError::NotInvertible);
        }
        self.field.element(&s.0)
    }

    /// Certified sign of the real value.
    pub fn sign(&self) -> Result<Ordering, AlgebraError> {
        self.field.sign_of(&self.num)
    }

    pub fn floor(&self) -> Result<i64, AlgebraError> {
        self.field.floor_of(&self.num, &self.den)
    }

    /// Real value within 2^-50.
    pub fn to_f64(&self) -> f64 {
        self.field.approx_of(&self.num, &self.den).unwrap_or_else(|_| {
            // precision cap reached: fall back to the midpoint of the enclosure
            let b = self.field.beta_f64();
            self.coeffs()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * b + crate::scalar::rational_to_f64(c))
        })
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(mut self) -> FieldElement {
        for n in self.num.iter_mut() {
            *n = -&*n;
        }
        self
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -self.clone()
    }
}

impl Scalar for FieldElement {
    const EXACT: bool = true;

    fn from_i64_like(&self, k: i64) -> Self {
        self.field.from_int(k)
    }

    fn from_f64_like(&self, x: f64) -> Self {
        let q = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        self.field.from_rational(&q)
    }

    fn certified_sign(&self) -> Result<Ordering, AlgebraError> {
        self.sign()
    }

    fn as_f64(&self) -> f64 {
        FieldElement::to_f64(self)
    }

    fn floor_i64(&self) -> Result<i64, AlgebraError> {
        self.floor()
    }
}
