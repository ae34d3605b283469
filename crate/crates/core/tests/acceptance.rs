//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

mod common;

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use betamatch::algebra::{BetaField, FieldElement};
use betamatch::harness::{
    grid_points, records_to_string, sweep_density, sweep_field, sweep_matching, OutputFormat, Sampling, SweepConfig,
    SweepKind,
};
use betamatch::maps::{GenBeta, MapParams, Param, Side, SkewTent, SlopeSpec};
use betamatch::matching::{flowchart_check, matching_index, AlphaValue, MatchingConfig, Mode, Start};
use betamatch::orbits::{genbeta_xi_slope, param_window, q_sequence};
use betamatch::Scalar;
use common::{oracle_matching, root_f64, Fixed};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Verdict {
    pass: bool,
    detail: String,
}

/// Largest float-mode automaton discrepancy seen by criteria 2 to 5.
#[derive(Default)]
struct Discrepancy {
    max: f64,
    runs: usize,
}

impl Discrepancy {
    fn absorb(&mut self, d: f64) {
        self.max = self.max.max(d);
        self.runs += 1;
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn exact_cfg(cap: usize, keep_trace: bool) -> MatchingConfig {
    MatchingConfig {
        cap,
        keep_trace,
        ..MatchingConfig::default()
    }
}

fn float_cfg(cap: usize) -> MatchingConfig {
    MatchingConfig {
        cap,
        mode: Mode::Float,
        keep_trace: false,
        ..MatchingConfig::default()
    }
}

/// Dyadic rational `⌊x·2^40⌋ / 2^40`.
fn dyadic(x: f64) -> BigRational {
    BigRational::new(
        BigInt::from((x * 2f64.powi(40)).floor() as i64),
        BigInt::from(1i64 << 40),
    )
}

/// `count` random dyadic rationals strictly between the exact bounds.
fn random_rationals(
    field: &Arc<BetaField>,
    lo: &FieldElement,
    hi: &FieldElement,
    count: usize,
    seed: u64,
) -> Vec<FieldElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lf, hf) = (lo.to_f64(), hi.to_f64());
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = field.from_rational(&dyadic(rng.gen_range(lf..hf)));
        if a.cmp_value(lo).unwrap().is_gt() && a.cmp_value(hi).unwrap().is_lt() {
            out.push(a);
        }
    }
    out
}

fn float_discrepancy(field: &Arc<BetaField>, alphas: &[FieldElement], cap: usize, acc: &mut Discrepancy) {
    let ds: Vec<f64> = alphas
        .par_iter()
        .map(|a| {
            matching_index(field, &AlphaValue::Exact(a.clone()), &float_cfg(cap))
                .map(|r| r.max_discrepancy)
                .unwrap_or(f64::INFINITY)
        })
        .collect();
    for d in ds {
        acc.absorb(d);
    }
}

fn criterion_1() -> Verdict {
    let t = Instant::now();
    let mut bad = Vec::new();
    for n in 2..=8usize {
        let f = BetaField::multinacci(n).unwrap();
        let mut s = f.one();
        for i in 1..=n as i64 {
            s = &s - &f.beta_pow(-i);
        }
        let t2 = &(&f.from_int(2) - &f.generator()) - &f.beta_pow(-(n as i64));
        let zero = |e: &FieldElement| e.sign().map(|o| o.is_eq()).unwrap_or(false);
        if !zero(&s) || !zero(&t2) {
            bad.push(n);
        }
    }
    let el = t.elapsed();
    Verdict {
        pass: bad.is_empty() && el < Duration::from_secs(1),
        detail: format!("N=2..8 both identities exact zero, failures {bad:?}, {el:.2?}"),
    }
}

fn criterion_2(acc: &mut Discrepancy) -> Verdict {
    let mut failures = Vec::new();
    for n in 2..=4usize {
        let f = BetaField::multinacci(n).unwrap();
        let edge = &f.from_int(2) - &f.generator();
        let alphas: Vec<FieldElement> = (1..=100)
            .map(|j| f.from_rational(&dyadic(j as f64 / 100.0 * edge.to_f64())))
            .filter(|a| a.sign().unwrap().is_gt() && a.cmp_value(&edge).unwrap().is_le())
            .collect();
        assert_eq!(alphas.len(), 100);
        let ks: Vec<Option<usize>> = alphas
            .par_iter()
            .map(|a| {
                matching_index(&f, &AlphaValue::Exact(a.clone()), &exact_cfg(100_000, false))
                    .ok()
                    .and_then(|r| r.kappa())
            })
            .collect();
        for (a, k) in alphas.iter().zip(ks) {
            if k != Some(n) {
                failures.push((n, a.to_f64(), k));
            }
        }
        float_discrepancy(&f, &alphas, 100_000, acc);
    }
    Verdict {
        pass: failures.is_empty(),
        detail: format!(
            "300 exact runs, κ = N everywhere except {} points {:?}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    }
}

fn criterion_3(acc: &mut Discrepancy) -> Verdict {
    let t = Instant::now();
    let f = BetaField::multinacci(3).unwrap();
    let lo = &f.from_int(2) - &f.generator();
    let alphas = random_rationals(&f, &lo, &f.beta_pow(-1), 1000, 3);
    let runs: Vec<_> = alphas
        .par_iter()
        .map(|a| matching_index(&f, &AlphaValue::Exact(a.clone()), &exact_cfg(100_000, true)))
        .collect();
    let mut matched = 0;
    let mut errors = 0;
    let mut off_graph_traces = 0;
    let mut off_graph_edges = 0;
    let mut example = None;
    for r in &runs {
        match r {
            Ok(r) if r.kappa().is_some() => {
                matched += 1;
                match flowchart_check(&r.trace, &f) {
                    Ok(rep) if rep.conforms() => {}
                    Ok(rep) => {
                        off_graph_traces += 1;
                        off_graph_edges += rep.off_graph.len();
                        if example.is_none() {
                            let o = &rep.off_graph[0];
                            example = Some(format!("{}→{} at n={}", o.from, o.to, o.n));
                        }
                    }
                    Err(_) => off_graph_traces += 1,
                }
            }
            Ok(_) => {}
            Err(_) => errors += 1,
        }
    }
    float_discrepancy(&f, &alphas, 100_000, acc);
    let frac = matched as f64 / 1000.0;
    let el = t.elapsed();
    Verdict {
        pass: frac >= 0.995 && off_graph_traces == 0 && errors == 0 && el < Duration::from_secs(300),
        detail: format!(
            "matched {matched}/1000 ({frac:.3}), engine errors {errors}; flowchart: {off_graph_traces} matched traces with {off_graph_edges} off-graph transitions (first {}); {el:.1?}",
            example.unwrap_or_else(|| "none".into())
        ),
    }
}

fn criterion_4(acc: &mut Discrepancy) -> Verdict {
    let f = BetaField::multinacci(2).unwrap();
    let lo = &f.from_int(2) - &f.generator();
    let alphas = random_rationals(&f, &lo, &f.beta_pow(-1), 500, 4);
    let matched = alphas
        .par_iter()
        .filter(|a| {
            matching_index(&f, &AlphaValue::Exact((*a).clone()), &exact_cfg(100_000, false))
                .map(|r| r.kappa().is_some())
                .unwrap_or(false)
        })
        .count();
    float_discrepancy(&f, &alphas, 100_000, acc);
    let frac = matched as f64 / 500.0;
    Verdict {
        pass: frac >= 0.995,
        detail: format!("matched {matched}/500 ({frac:.3})"),
    }
}

/// Direct orbit oracle with 2048-bit fixed point (far beyond 4× the 53-bit
/// float mantissa), independent of the field arithmetic.
fn campaign_oracle(j: usize, start: &Start) -> Option<usize> {
    let fx = Fixed { bits: 2048 };
    let beta = fx.multinacci(4);
    let inv = fx.div(&fx.one(), &beta);
    let inv3 = fx.mul(&fx.mul(&inv, &inv), &inv);
    let alpha = &inv3 + fx.div(&((&inv - &inv3) * BigInt::from(j)), &fx.int(99));
    let (x0, x1) = match start {
        Start::ZeroOne => (BigInt::from(0), fx.one()),
        Start::NearFixedPoint { eps, digits } => {
            let p = fx.div(&(fx.one() - &alpha), &(&beta - fx.one()));
            let e = fx.div(
                &(BigInt::from(eps.numer().clone()) << fx.bits),
                &(BigInt::from(eps.denom().clone()) << fx.bits),
            );
            let x0 = p - e;
            let mut v = BigInt::from(0);
            let mut pw = fx.one();
            for d in digits {
                pw = fx.mul(&pw, &inv);
                if *d == 1 {
                    v += &pw;
                }
            }
            let x1 = &x0 - v;
            (x0, x1)
        }
    };
    oracle_matching(&fx, &beta, &alpha, x0, x1, 1500, 300)
}

fn criterion_5(acc: &mut Discrepancy) -> Verdict {
    let t = Instant::now();
    let cfg = SweepConfig::tetrabonacci_campaign();
    let a = sweep_matching(&cfg).unwrap();
    let b = sweep_matching(&cfg).unwrap();
    let (sa, sb) = (
        records_to_string(&a, OutputFormat::Csv).unwrap(),
        records_to_string(&b, OutputFormat::Csv).unwrap(),
    );
    let identical = sa.as_bytes() == sb.as_bytes();
    let mut per_curve = Vec::new();
    let mut disagreements = Vec::new();
    for start in &cfg.starts {
        let tag = start.tag();
        let curve: Vec<_> = a.iter().filter(|r| r.start == tag).collect();
        per_curve.push(curve.iter().filter(|r| r.kappa.is_some()).count());
        for j in (0..100).step_by(11) {
            let k = curve[j].kappa;
            let o = campaign_oracle(j, start);
            if k != o {
                disagreements.push((tag.clone(), j, k, o));
            }
        }
    }
    let field = sweep_field(&cfg).unwrap().unwrap();
    let pts: Vec<FieldElement> = grid_points(&cfg, Some(&field))
        .unwrap()
        .into_iter()
        .map(|p| p.exact.unwrap())
        .collect();
    float_discrepancy(&field, &pts, cfg.cap, acc);
    let el = t.elapsed();
    let curves_ok = per_curve.iter().all(|&m| m >= 95);
    Verdict {
        pass: identical && disagreements.is_empty() && curves_ok && el < Duration::from_secs(600),
        detail: format!(
            "(a) byte-identical {identical}; (b) oracle disagreements {} of 40 {:?}; (c) matched per curve {per_curve:?}; {el:.1?}",
            disagreements.len(),
            disagreements.iter().take(2).collect::<Vec<_>>()
        ),
    }
}

fn criterion_6(acc: &Discrepancy) -> Verdict {
    Verdict {
        pass: acc.max <= 1e-9,
        detail: format!(
            "max |d_float − value(e)| = {:.3e} over {} float runs",
            acc.max, acc.runs
        ),
    }
}

fn criterion_7() -> Verdict {
    let f = BetaField::multinacci(3).unwrap();
    let beta = root_f64(&[1, 1, 1], 1.0, 2.0);
    let m = MapParams::GenBeta(GenBeta::new(f.from_rational(&q(2, 5)), f.generator()).unwrap());
    let fm = MapParams::GenBeta(GenBeta::new(0.4, beta).unwrap());
    let mut bad = Vec::new();
    let mut identities = 0;
    let mut worst = 0.0f64;
    for n in 10..=60usize {
        let w = match param_window(&m, n) {
            Ok(w) => w,
            Err(e) => {
                bad.push(format!("n={n}: {e}"));
                continue;
            }
        };
        let res = w.endpoint_residuals().unwrap();
        for r in [res.lower, res.upper].into_iter().flatten() {
            identities += 1;
            if !r.is_zero() {
                bad.push(format!("n={n}: residual {}", r.to_f64()));
            }
        }
        let oracle = (beta.powi(n as i32) - 1.0) / (beta - 1.0);
        let slope = w.lift_slope().unwrap().map(|s| s.to_f64());
        let point = betamatch::orbits::XiCurve::new(fm.clone(), n).derivative(&0.4).unwrap();
        for s in slope.into_iter().chain([point]) {
            let rel = (s - oracle).abs() / oracle;
            worst = worst.max(rel);
            if rel > 1e-8 {
                bad.push(format!("n={n}: slope {s} vs {oracle}"));
            }
        }
        let lib = genbeta_xi_slope(&f.generator(), n).to_f64();
        worst = worst.max((lib - oracle).abs() / oracle);
    }
    Verdict {
        pass: bad.is_empty(),
        detail: format!(
            "{identities} endpoint identities exact, worst slope rel. error {worst:.2e}, failures {:?}",
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    }
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 40;
    let mut bad = Vec::new();
    let mut worst_rate = 0.0f64;
    let mut worst_closed = 0.0f64;
    for _ in 0..20 {
        let a: f64 = rng.gen_range(0.25..0.75);
        let b: f64 = rng.gen_range(a.max(1.0 - a) + 0.02..1.0);
        let m = MapParams::SkewTent(SkewTent::new(a, b).unwrap());
        match q_sequence(&m, n) {
            Ok(r) => match r.fitted_rate {
                Some(rate) if rate < 1.0 => worst_rate = worst_rate.max(rate),
                other => bad.push(format!("tent α={a:.4} β={b:.4}: rate {other:?}")),
            },
            Err(e) => bad.push(format!("tent α={a:.4} β={b:.4}: {e}")),
        }
    }
    for _ in 0..20 {
        let a: f64 = rng.gen_range(0.0..1.0);
        let b: f64 = rng.gen_range(1.1..3.0);
        let m = MapParams::GenBeta(GenBeta::new(a, b).unwrap());
        match q_sequence(&m, n) {
            Ok(r) => {
                match r.fitted_rate {
                    Some(rate) if rate < 1.0 => worst_rate = worst_rate.max(rate),
                    other => bad.push(format!("genbeta α={a:.4} β={b:.4}: rate {other:?}")),
                }
                for (k, v) in r.values_f64.iter().enumerate() {
                    let bk = b.powi(k as i32 + 1);
                    let closed = (bk - 1.0) / (bk * (b - 1.0));
                    worst_closed = worst_closed.max((v - closed).abs());
                }
            }
            Err(e) => bad.push(format!("genbeta α={a:.4} β={b:.4}: {e}")),
        }
    }
    Verdict {
        pass: bad.is_empty() && worst_closed <= 1e-12,
        detail: format!(
            "40 parameter sets, worst fitted rate {worst_rate:.4}, GenBeta closed-form max error {worst_closed:.2e}, failures {:?}",
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    }
}

fn criterion_9() -> Verdict {
    let t = Instant::now();
    let mut cfg = SweepConfig::matching(
        SlopeSpec::Multinacci(3),
        Param::rational(q(0, 1)),
        Param::rational(q(999_999, 1_000_000)),
        100,
    );
    cfg.kind = SweepKind::Density {
        steps: 100_000,
        eps: 0.01,
    };
    cfg.sampling = Sampling::Random;
    cfg.seed = 9;
    let recs = sweep_density(&cfg).unwrap();
    let good = recs.iter().filter(|r| r.fraction.map_or(false, |f| f >= 0.95)).count();
    let errors = recs.iter().filter(|r| r.error.is_some()).count();
    let min = recs.iter().filter_map(|r| r.fraction).fold(1.0f64, f64::min);
    let el = t.elapsed();
    Verdict {
        pass: good >= 95 && el < Duration::from_secs(300),
        detail: format!("{good}/100 parameters with fraction ≥ 0.95 (min {min:.3}, errors {errors}); {el:.1?}"),
    }
}

fn criterion_10() -> Verdict {
    let f = BetaField::multinacci(3).unwrap();
    let beta = f.beta_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let steps = 200;
    let mut worst = 0.0f64;
    let mut first_bad = usize::MAX;
    let mut itinerary_mismatch = 0;
    let mut failing_params = 0;
    for _ in 0..200 {
        let a = f.from_rational(&dyadic(rng.gen_range(0.0..1.0)));
        let em = MapParams::GenBeta(GenBeta::new(a.clone(), f.generator()).unwrap());
        let fm = MapParams::GenBeta(GenBeta::new(a.to_f64(), beta).unwrap());
        let mut failed = false;
        for (x0, side) in [(0i64, Side::Right), (1, Side::Left)] {
            let eo = em.orbit_sided(&f.from_int(x0), steps, side).unwrap();
            let fo = fm.orbit_sided(&(x0 as f64), steps, side).unwrap();
            for (n, (e, x)) in eo.iter().zip(&fo).enumerate() {
                if x.guard_hit {
                    continue;
                }
                let d = (e.point.to_f64() - x.point).abs();
                worst = worst.max(d);
                let branch_differs = e.branch != x.branch;
                if d > 1e-9 || branch_differs {
                    failed = true;
                    first_bad = first_bad.min(n);
                    if branch_differs {
                        itinerary_mismatch += 1;
                    }
                }
            }
        }
        failing_params += failed as usize;
    }
    Verdict {
        pass: failing_params == 0,
        detail: format!(
            "{failing_params}/200 parameters disagree; earliest disagreement at step {}, max deviation {worst:.2e}, {itinerary_mismatch} branch mismatches (f64 error grows like 2^-53·β^n)",
            if first_bad == usize::MAX { "none".to_string() } else { first_bad.to_string() }
        ),
    }
}

fn main() {
    let t = Instant::now();
    let mut acc = Discrepancy::default();
    let mut verdicts = vec![
        criterion_1(),
        criterion_2(&mut acc),
        criterion_3(&mut acc),
        criterion_4(&mut acc),
        criterion_5(&mut acc),
    ];
    verdicts.push(criterion_6(&acc));
    verdicts.extend([criterion_7(), criterion_8(), criterion_9(), criterion_10()]);
    let mut out = std::io::stdout().lock();
    for (i, v) in verdicts.iter().enumerate() {
        let _ = writeln!(
            out,
            "criterion {:>2}: {}  {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    let passed = verdicts.iter().filter(|v| v.pass).count();
    let _ = writeln!(
        out,
        "acceptance: {passed}/{} criteria passed in {:.1?}",
        verdicts.len(),
        t.elapsed()
    );
    let _ = out.flush();
    if passed != verdicts.len() {
        std::process::exit(1);
    }
}
