//! Independent oracles for the integration tests: binary fixed-point
//! arithmetic on `BigInt` with no use of the library's field code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Real numbers as `m · 2^-bits`.
#[derive(Debug, Clone, Copy)]
pub struct Fixed {
    pub bits: u32,
}

impl Fixed {
    pub fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }

    pub fn int(&self, k: i64) -> BigInt {
        BigInt::from(k) << self.bits
    }

    pub fn ratio(&self, p: i64, q: i64) -> BigInt {
        (BigInt::from(p) << self.bits).div_floor(&BigInt::from(q))
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a << self.bits).div_floor(b)
    }

    pub fn floor(&self, a: &BigInt) -> BigInt {
        a >> self.bits
    }

    /// Smallest integer `≥ a`.
    pub fn ceil(&self, a: &BigInt) -> BigInt {
        -((-a) >> self.bits)
    }

    pub fn to_f64(&self, a: &BigInt) -> f64 {
        let shift = self.bits.saturating_sub(60);
        (a >> shift).to_f64().unwrap() / 2f64.powi((self.bits - shift) as i32)
    }

    pub fn from_f64(&self, x: f64) -> BigInt {
        let m = (x * 2f64.powi(52)).round() as i64;
        (BigInt::from(m) << self.bits) >> 52
    }

    /// Dominant root of `x^N − Σ a_i x^i` in `[lo, hi]` by bisection.
    pub fn root(&self, a: &[i64], lo: i64, hi: i64) -> BigInt {
        let p = |x: &BigInt| -> BigInt {
            let mut xp = self.one();
            let mut acc = BigInt::zero();
            for c in a {
                acc += self.mul(&xp, &self.int(*c));
                xp = self.mul(&xp, x);
            }
            xp - acc
        };
        let (mut l, mut h) = (self.int(lo), self.int(hi));
        assert!(p(&l).is_negative() && p(&h).is_positive());
        while &h - &l > BigInt::one() {
            let m: BigInt = (&l + &h) >> 1;
            if p(&m).is_positive() {
                h = m;
            } else {
                l = m;
            }
        }
        l
    }

    pub fn multinacci(&self, n: usize) -> BigInt {
        self.root(&vec![1; n], 1, 2)
    }

    /// `x ↦ βx + α mod 1`, right-continuous (`side_left = false`) or
    /// left-continuous.
    pub fn genbeta_step(&self, x: &BigInt, beta: &BigInt, alpha: &BigInt, side_left: bool) -> BigInt {
        let y = self.mul(beta, x) + alpha;
        let k = if side_left { self.ceil(&y) - 1 } else { self.floor(&y) };
        y - (k << self.bits)
    }
}

/// First `n ≤ cap` with `|G^n(x0) − G^n(x1)| < 2^-threshold_bits`, with the
/// orbit of `x0` right-continuous and that of `x1` left-continuous.
pub fn oracle_matching(
    fx: &Fixed,
    beta: &BigInt,
    alpha: &BigInt,
    x0: BigInt,
    x1: BigInt,
    cap: usize,
    threshold_bits: u32,
) -> Option<usize> {
    let tol = BigInt::one() << (fx.bits - threshold_bits);
    let (mut a, mut b) = (x0, x1);
    for n in 1..=cap {
        a = fx.genbeta_step(&a, beta, alpha, false);
        b = fx.genbeta_step(&b, beta, alpha, true);
        if (&a - &b).abs() < tol {
            return Some(n);
        }
    }
    None
}

/// Dominant root of `x^N − Σ a_i x^i` in f64 by bisection.
pub fn root_f64(a: &[i64], lo: f64, hi: f64) -> f64 {
    let p = |x: f64| {
        x.powi(a.len() as i32)
            - a.iter()
                .enumerate()
                .map(|(i, c)| *c as f64 * x.powi(i as i32))
                .sum::<f64>()
    };
    let (mut l, mut h) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (l + h);
        if p(m) > 0.0 {
            h = m;
        } else {
            l = m;
        }
    }
    0.5 * (l + h)
}
