//! Certification that every root other than β lies inside the unit disk.
//!
//! Roots are approximated in floating point, then enclosed by inclusion
//! disks `|z − z_i| ≤ N |W_i|` with `W_i = P(z_i) / ∏_{j≠i} (z_i − z_j)`,
//! evaluated exactly over ℚ(i). A connected group of m disks holds exactly
//! m roots.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::rational_to_f64;

type C64 = Complex<f64>;
type CQ = Complex<BigRational>;

pub(crate) fn verify(coeffs: &[BigInt], beta: f64) -> bool {
    let n = coeffs.len();
    let mut c: Vec<f64> = coeffs.iter().map(|a| -a.to_f64().unwrap_or(f64::MAX)).collect();
    c.push(1.0);
    let mut roots = aberth(&c);
    let Some(k) = (0..n).min_by(|&i, &j| {
        let di = (roots[i] - C64::new(beta, 0.0)).norm();
        let dj = (roots[j] - C64::new(beta, 0.0)).norm();
        di.total_cmp(&dj)
    }) else {
        return false;
    };
    // the guess only identifies β; the approximation itself is sharper
    roots.swap(0, k);
    if roots.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return false;
    }

    let exact: Vec<CQ> = roots.iter().map(|z| Complex::new(q(z.re), q(z.im))).collect();
    let poly_q: Vec<BigRational> = c.iter().map(|&v| q(v)).collect();
    let mut radius_up = Vec::with_capacity(n);
    for i in 0..n {
        let pz = horner(&poly_q, &exact[i]);
        let mut prod = CQ::new(BigRational::from_integer(1.into()), BigRational::zero());
        for j in 0..n {
            if j != i {
                prod = prod * (exact[i].clone() - exact[j].clone());
            }
        }
        let den = norm_sqr(&prod);
        if den.is_zero() {
            return false;
        }
        let nn = BigRational::from_integer(BigInt::from(n * n));
        let r2 = nn * norm_sqr(&pz) / den;
        radius_up.push(sqrt_upper(&r2));
    }

    for j in 1..n {
        // β's disk must be isolated from every other disk
        let gap2 = norm_sqr(&(exact[0].clone() - exact[j].clone()));
        let reach = &radius_up[0] + &radius_up[j];
        if &reach * &reach >= gap2 {
            return false;
        }
        // every other disk sits strictly inside the unit circle
        let modulus = sqrt_upper(&norm_sqr(&exact[j]));
        if modulus + &radius_up[j] >= BigRational::from_integer(1.into()) {
            return false;
        }
    }
    true
}

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

fn norm_sqr(z: &CQ) -> BigRational {
    &z.re * &z.re + &z.im * &z.im
}

fn horner(c: &[BigRational], z: &CQ) -> CQ {
    let mut acc = CQ::new(BigRational::zero(), BigRational::zero());
    for ci in c.iter().rev() {
        acc = acc * z.clone() + CQ::new(ci.clone(), BigRational::zero());
    }
    acc
}

/// A rational `u ≥ √s`.
fn sqrt_upper(s: &BigRational) -> BigRational {
    let approx = rational_to_f64(s).max(0.0).sqrt();
    let mut u = q(approx * (1.0 + 1e-12) + f64::MIN_POSITIVE);
    while &(&u * &u) < s {
        u = &u * q(1.0 + 1e-9) + q(f64::MIN_POSITIVE);
    }
    u
}

fn eval_c(c: &[f64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &ci in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

/// Simultaneous approximation of all roots of the monic polynomial `c`.
fn aberth(c: &[f64]) -> Vec<C64> {
    let n = c.len() - 1;
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius * 0.9, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval_c(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| C64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn aberth_finds_cubic_roots() {
        // (x − 1)(x − 2)(x + 3) = x³ − 7x + 6
        let mut r: Vec<f64> = aberth(&[6.0, -7.0, 0.0, 1.0]).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (a, b) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn certifies_known_cases() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(verify(&ints(&[1, 1]), golden));
        // β² − 3β + 1
        assert!(verify(&ints(&[-1, 3]), (3.0 + 5f64.sqrt()) / 2.0));
        // β² − 4 has conjugate −2
        assert!(!verify(&ints(&[4, 0]), 2.0));
        // β³ − 2: complex conjugates of modulus 2^{1/3}
        assert!(!verify(&ints(&[2, 0, 0]), 2f64.cbrt()));
    }

    #[test]
    fn coarse_guess_still_certifies() {
        for n in 2..=10 {
            assert!(verify(&ints(&vec![1; n]), 1.9), "N={n}");
        }
    }
}
