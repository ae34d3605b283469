use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::element::FieldElement;
use super::pisot;
use super::poly::{count_roots, QPoly};
use super::AlgebraError;

/// Refinement stops here unless the caller raises the cap.
pub const DEFAULT_PRECISION_CAP_BITS: u32 = 4096;

const INITIAL_BITS: u32 = 64;

/// Dyadic enclosure `[lo, hi] / 2^bits` together with scaled powers of both
/// ends, so that `Σ n_i β^i` can be bounded with `N` multiplications.
#[derive(Clone, Debug)]
struct Enclosure {
    bits: u32,
    lo: BigInt,
    hi: BigInt,
    lo_pows: Vec<BigInt>,
    hi_pows: Vec<BigInt>,
}

impl Enclosure {
    fn new(bits: u32, lo: BigInt, hi: BigInt, degree: usize) -> Self {
        let scaled = |m: &BigInt| {
            let mut pows = Vec::with_capacity(degree);
            let mut p = BigInt::one();
            for i in 0..degree {
                pows.push(&p << (bits as usize * (degree - 1 - i)));
                p *= m;
            }
            pows
        };
        Enclosure {
            lo_pows: scaled(&lo),
            hi_pows: scaled(&hi),
            bits,
            lo,
            hi,
        }
    }

    /// Bounds on `Σ n_i β^i · 2^{bits(N-1)}`; requires `lo > 0`.
    fn bounds(&self, num: &[BigInt]) -> (BigInt, BigInt) {
        let mut l = BigInt::zero();
        let mut u = BigInt::zero();
        for (i, n) in num.iter().enumerate() {
            if n.is_negative() {
                l += n * &self.hi_pows[i];
                u += n * &self.lo_pows[i];
            } else if n.is_positive() {
                l += n * &self.lo_pows[i];
                u += n * &self.hi_pows[i];
            }
        }
        (l, u)
    }

    fn scale_bits(&self) -> usize {
        self.bits as usize * (self.lo_pows.len() - 1)
    }
}

/// The field ℚ(β) for the dominant root β > 1 of `β^N − Σ a_i β^i`.
pub struct BetaField {
    coeffs: Vec<BigInt>,
    poly: QPoly,
    pisot_verified: bool,
    enclosure: RwLock<Enclosure>,
    precision_cap: AtomicU32,
}

impl fmt::Debug for BetaField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BetaField")
            .field("coeffs", &self.coeffs)
            .field("pisot_verified", &self.pisot_verified)
            .finish()
    }
}

impl BetaField {
    /// Field of the root in (1, 2) of `β^N = β^{N-1} + … + β + 1`.
    pub fn multinacci(n: usize) -> Result<Arc<Self>, AlgebraError> {
        if n < 2 {
            return Err(AlgebraError::InvalidDegree(n));
        }
        Self::pisot(&vec![1; n])
    }

    /// Field of the largest real root of `β^N − Σ a_i β^i`, `coeffs = [a_0, …, a_{N-1}]`.
    ///
    /// Non-Pisot polynomials are accepted with `pisot_verified() == false`.
    pub fn pisot(coeffs: &[i64]) -> Result<Arc<Self>, AlgebraError> {
        Self::from_big(coeffs.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn from_big(coeffs: Vec<BigInt>) -> Result<Arc<Self>, AlgebraError> {
        let n = coeffs.len();
        if n < 2 {
            return Err(AlgebraError::InvalidDegree(n));
        }
        let mut full: Vec<BigInt> = coeffs.iter().map(|a| -a).collect();
        full.push(BigInt::one());
        let poly = QPoly::from_ints(&full);
        let enclosure = isolate_dominant_root(&poly, &coeffs)?;
        let beta_guess = dyadic_mid_f64(&enclosure);
        let pisot_verified = pisot::verify(&coeffs, beta_guess);
        let field = BetaField {
            coeffs,
            poly,
            pisot_verified,
            enclosure: RwLock::new(enclosure),
            precision_cap: AtomicU32::new(DEFAULT_PRECISION_CAP_BITS),
        };
        field.refine_to(INITIAL_BITS);
        Ok(Arc::new(field))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `[a_0, …, a_{N-1}]`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn pisot_verified(&self) -> bool {
        self.pisot_verified
    }

    pub fn is_multinacci(&self) -> bool {
        self.coeffs.iter().all(One::is_one)
    }

    pub fn same_as(&self, other: &BetaField) -> bool {
        std::ptr::eq(self, other) || self.coeffs == other.coeffs
    }

    pub fn precision_cap_bits(&self) -> u32 {
        self.precision_cap.load(AtomicOrdering::Relaxed)
    }

    pub fn set_precision_cap_bits(&self, bits: u32) {
        self.precision_cap
            .store(bits.max(INITIAL_BITS), AtomicOrdering::Relaxed);
    }

    /// Current enclosure `(lo, hi)` of β.
    pub fn enclosure(&self) -> (BigRational, BigRational) {
        let e = self.enclosure.read().unwrap();
        let d = BigInt::one() << e.bits as usize;
        (
            BigRational::new(e.lo.clone(), d.clone()),
            BigRational::new(e.hi.clone(), d),
        )
    }

    pub fn enclosure_bits(&self) -> u32 {
        self.enclosure.read().unwrap().bits
    }

    pub fn beta_f64(&self) -> f64 {
        dyadic_mid_f64(&self.enclosure.read().unwrap())
    }

    /// Bisects the enclosure until it has at least `bits` fractional bits.
    pub fn refine_to(&self, bits: u32) {
        if self.enclosure.read().unwrap().bits >= bits {
            return;
        }
        let mut guard = self.enclosure.write().unwrap();
        if guard.bits >= bits {
            return;
        }
        let (mut b, mut lo, mut hi) = (guard.bits, guard.lo.clone(), guard.hi.clone());
        while b < bits {
            b += 1;
            lo <<= 1;
            hi <<= 1;
            let mid: BigInt = (&lo + &hi) >> 1;
            match scaled_poly_sign(&self.coeffs, &mid, b) {
                Ordering::Greater => hi = mid,
                Ordering::Less => lo = mid,
                Ordering::Equal => {
                    b += 1;
                    lo = (&mid << 1) - 1;
                    hi = (&mid << 1) + 1;
                }
            }
        }
        *guard = Enclosure::new(b, lo, hi, self.degree());
    }

    pub(crate) fn sign_of(&self, num: &[BigInt]) -> Result<Ordering, AlgebraError> {
        if num.iter().all(Zero::is_zero) {
            return Ok(Ordering::Equal);
        }
        loop {
            let bits = {
                let e = self.enclosure.read().unwrap();
                let (l, u) = e.bounds(num);
                if l.is_positive() {
                    return Ok(Ordering::Greater);
                }
                if u.is_negative() {
                    return Ok(Ordering::Less);
                }
                e.bits
            };
            self.grow_precision(bits)?;
        }
    }

    /// `⌊Σ n_i β^i / den⌋`, certified.
    pub(crate) fn floor_of(&self, num: &[BigInt], den: &BigInt) -> Result<i64, AlgebraError> {
        loop {
            let (klo, khi, bits) = {
                let e = self.enclosure.read().unwrap();
                let (l, u) = e.bounds(num);
                let d = den << e.scale_bits();
                (l.div_floor(&d), u.div_floor(&d), e.bits)
            };
            if klo == khi {
                return klo.to_i64().ok_or(AlgebraError::Overflow);
            }
            if &khi - &klo == BigInt::one() {
                // decide whether the value reaches the integer khi
                let mut shifted = num.to_vec();
                shifted[0] -= &khi * den;
                let s = self.sign_of(&shifted)?;
                let k = if s == Ordering::Less { klo } else { khi };
                return k.to_i64().ok_or(AlgebraError::Overflow);
            }
            self.grow_precision(bits)?;
        }
    }

    /// Value of `Σ n_i β^i / den` within 2^-50 absolute (and 2^-52 relative).
    pub(crate) fn approx_of(&self, num: &[BigInt], den: &BigInt) -> Result<f64, AlgebraError> {
        if num.iter().all(Zero::is_zero) {
            return Ok(0.0);
        }
        loop {
            let (l, u, d, bits) = {
                let e = self.enclosure.read().unwrap();
                let (l, u) = e.bounds(num);
                (l, u, den << e.scale_bits(), e.bits)
            };
            let width = &u - &l;
            let tight_abs = (&width << 52usize) <= d;
            let same_sign = l.signum() == u.signum();
            let tight_rel = same_sign && (&width << 54usize) <= l.abs().min(u.abs());
            let at_cap = bits >= self.precision_cap_bits();
            if tight_abs && (tight_rel || at_cap) {
                let mid = BigRational::new(l + u, d << 1usize);
                return Ok(crate::scalar::rational_to_f64(&mid));
            }
            self.grow_precision(bits)?;
        }
    }

    fn grow_precision(&self, current: u32) -> Result<(), AlgebraError> {
        let cap = self.precision_cap_bits();
        if current >= cap {
            return Err(AlgebraError::PrecisionExhausted(cap));
        }
        self.refine_to((current * 2).min(cap));
        Ok(())
    }

    pub(crate) fn reduction_poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_parts(self.clone(), vec![BigInt::zero(); self.degree()], BigInt::one())
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, k: i64) -> FieldElement {
        self.from_rational(&BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_rational(self: &Arc<Self>, q: &BigRational) -> FieldElement {
        let mut num = vec![BigInt::zero(); self.degree()];
        num[0] = q.numer().clone();
        FieldElement::from_parts(self.clone(), num, q.denom().clone())
    }

    /// The element `Σ c_i β^i`; shorter vectors are padded with zeros.
    pub fn element(self: &Arc<Self>, coeffs: &[BigRational]) -> Result<FieldElement, AlgebraError> {
        if coeffs.len() > self.degree() {
            return Err(AlgebraError::BadLength {
                got: coeffs.len(),
                degree: self.degree(),
            });
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        num.resize(self.degree(), BigInt::zero());
        Ok(FieldElement::from_parts(self.clone(), num, den))
    }

    /// β itself.
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        let mut num = vec![BigInt::zero(); self.degree()];
        num[1] = BigInt::one();
        FieldElement::from_parts(self.clone(), num, BigInt::one())
    }

    /// β^k for any integer k.
    pub fn beta_pow(self: &Arc<Self>, k: i64) -> FieldElement {
        let base = if k < 0 {
            self.generator().inverse().expect("β is a unit of the order")
        } else {
            self.generator()
        };
        let mut acc = self.one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

fn dyadic_mid_f64(e: &Enclosure) -> f64 {
    let mid = BigRational::new(&e.lo + &e.hi, BigInt::one() << (e.bits as usize + 1));
    crate::scalar::rational_to_f64(&mid)
}

/// Sign of `P(m / 2^bits)` using integer arithmetic only.
fn scaled_poly_sign(coeffs: &[BigInt], m: &BigInt, bits: u32) -> Ordering {
    let n = coeffs.len();
    let mut acc = num_traits::pow(m.clone(), n);
    let mut p = BigInt::one();
    for (i, a) in coeffs.iter().enumerate() {
        if !a.is_zero() {
            acc -= a * &p << (bits as usize * (n - i));
        }
        p *= m;
    }
    acc.sign().cmp(&num_bigint::Sign::NoSign)
}

fn fujiwara_bound(coeffs: &[BigInt]) -> u32 {
    // monic x^N + Σ c_i x^i with c_i = −a_i
    let n = coeffs.len();
    let mut m: f64 = 0.0;
    for (i, a) in coeffs.iter().enumerate() {
        let k = n - i;
        let mut v = a.abs().to_f64().unwrap_or(f64::MAX);
        if i == 0 {
            v /= 2.0;
        }
        m = m.max(v.powf(1.0 / k as f64));
    }
    let bound = (2.0 * m * 1.01).max(2.0);
    bound.log2().ceil() as u32
}

fn isolate_dominant_root(poly: &QPoly, coeffs: &[BigInt]) -> Result<Enclosure, AlgebraError> {
    let chain = poly.sturm_chain();
    let dyadic = |m: &BigInt, b: u32| BigRational::new(m.clone(), BigInt::one() << b as usize);
    let mut b = 0u32;
    let mut lo = BigInt::one();
    let mut hi = BigInt::one() << fujiwara_bound(coeffs) as usize;
    if count_roots(&chain, &dyadic(&lo, b), &dyadic(&hi, b)) == 0 {
        return Err(AlgebraError::NoDominantRoot);
    }
    while count_roots(&chain, &dyadic(&lo, b), &dyadic(&hi, b)) > 1 {
        b += 1;
        lo <<= 1;
        hi <<= 1;
        let mid: BigInt = (&lo + &hi) >> 1;
        if count_roots(&chain, &dyadic(&mid, b), &dyadic(&hi, b)) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let square_part = poly.gcd(&poly.derivative());
    if square_part.degree().unwrap_or(0) > 0 {
        let sq_chain = square_part.sturm_chain();
        if count_roots(&sq_chain, &dyadic(&lo, b), &dyadic(&hi, b)) > 0 {
            return Err(AlgebraError::RepeatedRoot);
        }
    }
    if scaled_poly_sign(coeffs, &hi, b) == Ordering::Equal {
        b += 1;
        lo = (&hi << 1) - 1;
        hi = (&hi << 1) + 1;
    }
    // make sure P(lo) < 0 strictly
    while scaled_poly_sign(coeffs, &lo, b) != Ordering::Less {
        b += 1;
        lo <<= 1;
        hi <<= 1;
        let mid: BigInt = (&lo + &hi) >> 1;
        match scaled_poly_sign(coeffs, &mid, b) {
            Ordering::Greater => hi = mid,
            Ordering::Less => lo = mid,
            Ordering::Equal => {
                b += 1;
                lo = (&mid << 1) - 1;
                hi = (&mid << 1) + 1;
            }
        }
    }
    Ok(Enclosure::new(b, lo, hi, coeffs.len()))
}
