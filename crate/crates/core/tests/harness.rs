use betamatch::algebra::BetaField;
use betamatch::harness::{
    point_config, records_to_string, sweep_density, sweep_matching, OutputFormat, Sampling, SweepConfig, SweepKind,
    SweepMode,
};
use betamatch::maps::{Param, SlopeSpec};
use betamatch::matching::{matching_index, AlphaValue};

fn small_campaign() -> SweepConfig {
    SweepConfig {
        grid: 12,
        ..SweepConfig::tetrabonacci_campaign()
    }
}

#[test]
fn config_file_round_trip() {
    let cfg = small_campaign();
    let text = cfg.serialize();
    assert_eq!(SweepConfig::parse(&text).unwrap(), cfg);
    assert_eq!(SweepConfig::parse(&text).unwrap().serialize(), text);
}

#[test]
fn sweeps_are_deterministic() {
    let cfg = small_campaign();
    let a = records_to_string(&sweep_matching(&cfg).unwrap(), OutputFormat::Csv).unwrap();
    let b = records_to_string(&sweep_matching(&cfg).unwrap(), OutputFormat::Csv).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 1 + 4 * 12);
    let j = records_to_string(&sweep_matching(&cfg).unwrap(), OutputFormat::Json).unwrap();
    assert_eq!(j.lines().count(), 4 * 12);
}

#[test]
fn records_equal_standalone_runs() {
    let cfg = small_campaign();
    let recs = sweep_matching(&cfg).unwrap();
    let f = BetaField::multinacci(4).unwrap();
    for r in recs.iter().step_by(5) {
        let start = cfg.starts.iter().find(|s| s.tag() == r.start).unwrap();
        let alpha: Param = r.alpha_exact.parse().unwrap();
        let a = AlphaValue::Exact(alpha.to_field(&f));
        let direct = matching_index(&f, &a, &point_config(&cfg, start, betamatch::matching::Mode::Exact)).unwrap();
        assert_eq!(r.kappa, direct.kappa());
        assert_eq!(r.iterations, direct.iterations);
    }
}

#[test]
fn both_mode_agrees() {
    let cfg = SweepConfig {
        mode: SweepMode::Both,
        ..small_campaign()
    };
    let recs = sweep_matching(&cfg).unwrap();
    for pair in recs.chunks(2) {
        assert_eq!(pair[0].index, pair[1].index);
        assert_eq!(pair[0].kappa, pair[1].kappa, "{:?}", pair);
    }
}

#[test]
fn density_sweep_records() {
    let mut cfg = SweepConfig::matching(
        SlopeSpec::Multinacci(3),
        "0.1".parse().unwrap(),
        "0.9".parse().unwrap(),
        5,
    );
    cfg.kind = SweepKind::Density { steps: 5000, eps: 0.05 };
    cfg.sampling = Sampling::Random;
    let recs = sweep_density(&cfg).unwrap();
    assert_eq!(recs.len(), 5);
    assert!(recs.iter().all(|r| r.error.is_none() && r.fraction.unwrap() > 0.5));
    assert_eq!(recs, sweep_density(&cfg).unwrap());
}
