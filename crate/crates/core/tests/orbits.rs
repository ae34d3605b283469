mod common;

use betamatch::algebra::BetaField;
use betamatch::maps::{GenBeta, MapParams, SkewTent};
use betamatch::orbits::{
    attractor, closest_approach_times, cutting_times, density_profile, param_window, q_sequence, XiCurve,
};
use betamatch::Scalar;
use common::root_f64;
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn genbeta_q_closed_form_and_cli_example() {
    let b = 1.9f64;
    let r = q_sequence(&MapParams::GenBeta(GenBeta::new(0.3, b).unwrap()), 40).unwrap();
    let last = r.values_f64[39];
    assert!((last - (1.0 - b.powi(-40)) / (b - 1.0)).abs() < 1e-10);
    assert!((r.fitted_rate.unwrap() - 1.0 / b).abs() < 1e-6);
}

#[test]
fn tent_q_converges() {
    let r = q_sequence(&MapParams::SkewTent(SkewTent::new(0.45, 0.95).unwrap()), 30).unwrap();
    assert!(r.fitted_rate.unwrap() < 1.0);
    let d = &r.differences;
    assert!(d[d.len() - 1] < 1e-3 * d[0].max(1e-300) || d[d.len() - 1] < 1e-8);
}

#[test]
fn tribonacci_windows_are_exact() {
    let f = BetaField::multinacci(3).unwrap();
    let beta = root_f64(&[1, 1, 1], 1.0, 2.0);
    let m = MapParams::GenBeta(GenBeta::new(f.from_rational(&q(2, 5)), f.generator()).unwrap());
    for n in 10..=20 {
        let w = param_window(&m, n).unwrap();
        let res = w.endpoint_residuals().unwrap();
        assert!(res.lower.map_or(true, |r| r.is_zero()), "n={n}");
        assert!(res.upper.map_or(true, |r| r.is_zero()), "n={n}");
        let slope = w.lift_slope().unwrap().unwrap().to_f64();
        let oracle = (beta.powi(n as i32) - 1.0) / (beta - 1.0);
        assert!((slope / oracle - 1.0).abs() < 1e-10);
        let a = f.from_rational(&q(2, 5));
        assert!(w.lo.cmp_value(&a).unwrap().is_le() && a.cmp_value(&w.hi).unwrap().is_le());
    }
}

#[test]
fn xi_derivative_matches_finite_difference() {
    let m = MapParams::SkewTent(SkewTent::new(0.45f64, 0.93).unwrap());
    let c = XiCurve::new(m, 6);
    let t = 0.93;
    let h = 1e-7;
    let fd = (c.eval(&(t + h * 0.5)).unwrap() - c.eval(&(t - h * 0.5)).unwrap()) / h;
    let d = c.derivative(&t).unwrap();
    assert!((fd - d).abs() < 1e-4 * d.abs().max(1.0), "{fd} vs {d}");
}

#[test]
fn cutting_times_start_at_one() {
    let t = SkewTent::new(q(2, 5), q(9, 10)).unwrap();
    let ct = cutting_times(&t, 30).unwrap();
    assert_eq!(
        ct.left.first().or(ct.right.first()).copied().map(|s| s >= 1),
        Some(true)
    );
    let ca = closest_approach_times(&MapParams::SkewTent(SkewTent::new(0.4, 0.9).unwrap()), 200).unwrap();
    assert!(ca.is_empty() || ca[..2] == [0, 1]);
    assert!(ca.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn attractor_is_invariant() {
    let g = GenBeta::new(0.2, 1.5).unwrap();
    let cyc = attractor(&g, 1e-10).unwrap();
    assert!(cyc.invariance_defect() < 1e-8);
    assert!(cyc.total_length() > 0.0 && cyc.total_length() <= 1.0);
    let full = attractor(&GenBeta::new(0.0, 2.0).unwrap(), 1e-10).unwrap();
    assert!((full.total_length() - 1.0).abs() < 1e-9);
}

#[test]
fn density_limits() {
    let m = MapParams::GenBeta(GenBeta::new(0.0, 2.0).unwrap());
    let d0 = density_profile(&m, 0.3, 0, 0.01).unwrap();
    assert_eq!(d0.visited_cells, 1);
    assert_eq!(d0.total_cells, 100);
    let m = MapParams::GenBeta(GenBeta::new(0.1, 1.9).unwrap());
    let d = density_profile(&m, 0.0, 20_000, 0.01).unwrap();
    assert!(d.fraction > 0.95, "{}", d.fraction);
}
