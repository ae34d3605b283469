mod common;

use betamatch::algebra::BetaField;
use betamatch::matching::{
    flowchart_check, matching_index, parse_digits, regime_classify, two_branch_matching, AlphaValue, EVectorState,
    MatchingConfig, Mode, Outcome, Regime, Start,
};
use common::{oracle_matching, Fixed};
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn exact(a: &BigRational, n: usize) -> (std::sync::Arc<BetaField>, AlphaValue) {
    let f = BetaField::multinacci(n).unwrap();
    let v = AlphaValue::Exact(f.from_rational(a));
    (f, v)
}

#[test]
fn cli_example_two_branch() {
    let (f, a) = exact(&q(1, 10), 3);
    let r = matching_index(&f, &a, &MatchingConfig::default()).unwrap();
    assert_eq!(r.outcome, Outcome::Matched(3));
    let AlphaValue::Exact(e) = &a else { unreachable!() };
    assert_eq!(two_branch_matching(&f, e).unwrap().kappa, 3);
}

#[test]
fn first_step_is_the_init_state() {
    let (f, a) = exact(&q(1, 2), 3);
    let r = matching_index(&f, &a, &MatchingConfig::default()).unwrap();
    assert_eq!(r.trace[1].state().digits, EVectorState::init(&f).unwrap().digits);
    assert_eq!(r.trace[1].sign, 1);
}

#[test]
fn engine_agrees_with_fixed_point_oracle() {
    let fx = Fixed { bits: 1024 };
    for n in 2..=4 {
        let beta = fx.multinacci(n);
        for k in [41, 47, 53, 59] {
            let (f, a) = exact(&q(k, 100), n);
            let r = matching_index(&f, &a, &MatchingConfig::default()).unwrap();
            let o = oracle_matching(&fx, &beta, &fx.ratio(k, 100), BigInt::from(0), fx.one(), 800, 300);
            assert_eq!(r.kappa(), o, "N={n} α={k}/100");
        }
    }
}

#[test]
fn float_mode_matches_exact_mode() {
    for k in 1..30 {
        let (f, a) = exact(&q(300 + 7 * k, 1000), 3);
        let e = matching_index(&f, &a, &MatchingConfig::default()).unwrap();
        let cfg = MatchingConfig {
            mode: Mode::Float,
            ..MatchingConfig::default()
        };
        let fl = matching_index(&f, &a, &cfg).unwrap();
        assert_eq!(e.outcome, fl.outcome);
        assert!(fl.max_discrepancy < 1e-12);
        let plain = matching_index(&f, &AlphaValue::Float(a.to_f64()), &cfg).unwrap();
        assert!(plain.max_discrepancy < 1e-12);
    }
}

#[test]
fn near_fixed_point_start() {
    let (f, a) = exact(&q(2, 5), 4);
    let cfg = MatchingConfig {
        start: Start::NearFixedPoint {
            eps: q(1, 100),
            digits: parse_digits("0111", 4).unwrap(),
        },
        ..MatchingConfig::default()
    };
    let r = matching_index(&f, &a, &cfg).unwrap();
    assert!(r.kappa().is_some());
    assert_eq!(r.trace[0].sign, 1);
    let bad = MatchingConfig {
        start: Start::NearFixedPoint {
            eps: q(1, 100),
            digits: vec![0, 1],
        },
        ..MatchingConfig::default()
    };
    assert!(matching_index(&f, &a, &bad).is_err());
}

#[test]
fn cap_and_trace_export() {
    let (f, a) = exact(&q(23, 50), 3);
    let r = matching_index(
        &f,
        &a,
        &MatchingConfig {
            cap: 2,
            ..MatchingConfig::default()
        },
    )
    .unwrap();
    assert_eq!(r.outcome, Outcome::NotMatchedWithinCap);
    let csv = r.trace_csv(&f);
    assert!(csv.starts_with("n,sign,e,d_float,d_exact\n"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn tribonacci_traces_use_the_alphabet() {
    let f = BetaField::multinacci(3).unwrap();
    for k in 0..20 {
        let a = AlphaValue::Exact(f.from_rational(&q(460 + 4 * k, 1000)));
        let r = matching_index(&f, &a, &MatchingConfig::default()).unwrap();
        if r.kappa().is_some() {
            let rep = flowchart_check(&r.trace, &f).unwrap();
            assert_eq!(rep.transitions + 1, r.trace.iter().filter(|s| s.n >= 1).count());
        }
        assert!(matches!(regime_classify(&f, &a), Ok(Regime::FourII)));
    }
}
