use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{Sampling, SweepConfig, SweepKind, SweepMode};
use super::HarnessError;
use crate::algebra::{BetaField, FieldElement};
use crate::maps::{GenBeta, MapParams, SlopeSpec};
use crate::matching::{matching_index, AlphaValue, MatchingConfig, MatchingResult, Mode, Outcome, Start};
use crate::orbits::density_profile;

/// One parameter of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    /// Present when the slope is algebraic.
    pub exact: Option<FieldElement>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub index: usize,
    pub start: String,
    pub mode: String,
    pub alpha: f64,
    /// Coefficients `[c_0;…;c_{N−1}]` of `α = Σ c_i β^i`.
    pub alpha_exact: String,
    /// `matched`, `not-matched`, `periodic` or `error`.
    pub outcome: String,
    pub kappa: Option<usize>,
    pub period: Option<usize>,
    pub iterations: usize,
    pub guard_hits: usize,
    pub escalated_at: Option<usize>,
    pub max_discrepancy: f64,
    pub error: Option<String>,
}

impl SweepRecord {
    fn new(p: &GridPoint, start: &Start, mode: Mode) -> Self {
        SweepRecord {
            index: p.index,
            start: start.tag(),
            mode: match mode {
                Mode::Exact => "exact".into(),
                Mode::Float => "float".into(),
            },
            alpha: p.value,
            alpha_exact: p.exact.as_ref().map(exact_string).unwrap_or_default(),
            outcome: String::new(),
            kappa: None,
            period: None,
            iterations: 0,
            guard_hits: 0,
            escalated_at: None,
            max_discrepancy: 0.0,
            error: None,
        }
    }

    /// Fills the record from an engine result.
    pub fn with_result(mut self, r: &MatchingResult) -> Self {
        let (outcome, kappa, period) = match r.outcome {
            Outcome::Matched(k) => ("matched", Some(k), None),
            Outcome::NotMatchedWithinCap => ("not-matched", None, None),
            Outcome::PeriodicObstruction(p) => ("periodic", None, Some(p)),
        };
        self.outcome = outcome.into();
        self.kappa = kappa;
        self.period = period;
        self.iterations = r.iterations;
        self.guard_hits = r.guard_hits;
        self.escalated_at = r.escalated_at;
        self.max_discrepancy = r.max_discrepancy;
        self
    }

    pub fn is_failure(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRecord {
    pub index: usize,
    pub alpha: f64,
    pub fraction: Option<f64>,
    pub visited_cells: Option<usize>,
    pub total_cells: Option<usize>,
    /// Median first-visit time over visited cells.
    pub first_visit_q50: Option<usize>,
    pub first_visit_q90: Option<usize>,
    pub error: Option<String>,
}

impl DensityRecord {
    pub fn is_failure(&self) -> bool {
        self.error.is_some()
    }
}

fn exact_string(e: &FieldElement) -> String {
    let parts: Vec<String> = e.coeffs().iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(";"))
}

fn rational_to_f64(q: &BigRational) -> f64 {
    crate::scalar::rational_to_f64(q)
}

/// Field of the configured slope, with the precision cap applied.
pub fn sweep_field(cfg: &SweepConfig) -> Result<Option<Arc<BetaField>>, HarnessError> {
    let field = cfg.field.field()?;
    if let (Some(f), Some(bits)) = (&field, cfg.precision_cap_bits) {
        f.set_precision_cap_bits(bits);
    }
    Ok(field)
}

fn validate(cfg: &SweepConfig, field: Option<&Arc<BetaField>>) -> Result<(), HarnessError> {
    if cfg.grid == 0 {
        return Err(HarnessError::Config("grid must be at least 1".into()));
    }
    if !(cfg.guard_band >= 0.0) {
        return Err(HarnessError::Config("guard band must be non-negative".into()));
    }
    if cfg.kind == SweepKind::Matching {
        let f = field.ok_or_else(|| HarnessError::Config("matching sweeps need an algebraic slope".into()))?;
        if cfg.starts.is_empty() {
            return Err(HarnessError::Config("no start modes".into()));
        }
        for s in &cfg.starts {
            if let Start::NearFixedPoint { digits, .. } = s {
                if digits.len() != f.degree() || digits.iter().all(|&d| d == 0) {
                    return Err(HarnessError::Config(format!(
                        "start {} needs a nonzero digit vector of length {}",
                        s.tag(),
                        f.degree()
                    )));
                }
            }
        }
        if cfg.cap == 0 {
            return Err(HarnessError::Config("cap must be at least 1".into()));
        }
    }
    if let SweepKind::Density { eps, .. } = cfg.kind {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(HarnessError::Config("eps must lie in (0, 1)".into()));
        }
    }
    Ok(())
}

/// The sweep parameters in increasing order, exact when the slope is
/// algebraic.
pub fn grid_points(cfg: &SweepConfig, field: Option<&Arc<BetaField>>) -> Result<Vec<GridPoint>, HarnessError> {
    let g = cfg.grid;
    let offsets: Vec<BigRational> = match cfg.sampling {
        Sampling::Grid if g == 1 => vec![BigRational::from_integer(0.into())],
        Sampling::Grid => (0..g)
            .map(|j| BigRational::new(BigInt::from(j), BigInt::from(g - 1)))
            .collect(),
        Sampling::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut k: Vec<u64> = (0..g).map(|_| rng.gen::<u32>() as u64).collect();
            k.sort_unstable();
            k.into_iter()
                .map(|k| BigRational::new(BigInt::from(k), BigInt::from(1u64 << 32)))
                .collect()
        }
    };
    let points: Vec<GridPoint> = match (field, &cfg.field) {
        (Some(f), _) => {
            let lo = cfg.alpha_lo.to_field(f);
            let span = &cfg.alpha_hi.to_field(f) - &lo;
            offsets
                .iter()
                .enumerate()
                .map(|(index, t)| {
                    let a = &lo + &(&span * &f.from_rational(t));
                    GridPoint {
                        index,
                        value: a.to_f64(),
                        exact: Some(a),
                    }
                })
                .collect()
        }
        (None, SlopeSpec::Value(beta)) => {
            let lo = cfg.alpha_lo.to_rational(beta);
            let span = cfg.alpha_hi.to_rational(beta) - &lo;
            offsets
                .iter()
                .enumerate()
                .map(|(index, t)| GridPoint {
                    index,
                    value: rational_to_f64(&(&lo + &span * t)),
                    exact: None,
                })
                .collect()
        }
        (None, _) => unreachable!("algebraic slopes always carry a field"),
    };
    let (first, last) = (points[0].value, points[points.len() - 1].value);
    if first > last || first < 0.0 || last >= 1.0 {
        return Err(HarnessError::Config(format!(
            "parameter range [{first}, {last}] must be increasing inside [0, 1)"
        )));
    }
    Ok(points)
}

fn modes(m: SweepMode) -> &'static [Mode] {
    match m {
        SweepMode::Exact => &[Mode::Exact],
        SweepMode::Float => &[Mode::Float],
        SweepMode::Both => &[Mode::Exact, Mode::Float],
    }
}

/// Engine configuration for one start and mode of a sweep.
pub fn point_config(cfg: &SweepConfig, start: &Start, mode: Mode) -> MatchingConfig {
    MatchingConfig {
        cap: cfg.cap,
        mode,
        guard: cfg.guard_band,
        start: start.clone(),
        keep_trace: false,
    }
}

/// Matching outcome for every start, grid point and mode, ordered by start,
/// then grid index, then mode (exact before float).
pub fn sweep_matching(cfg: &SweepConfig) -> Result<Vec<SweepRecord>, HarnessError> {
    if cfg.kind != SweepKind::Matching {
        return Err(HarnessError::Config("not a matching sweep".into()));
    }
    let field = sweep_field(cfg)?;
    validate(cfg, field.as_ref())?;
    let field = field.expect("validated");
    let points = grid_points(cfg, Some(&field))?;
    let mut jobs = Vec::new();
    for start in &cfg.starts {
        for p in &points {
            for &mode in modes(cfg.mode) {
                jobs.push((start, p, mode));
            }
        }
    }
    // collect keeps the job order whatever order the workers finish in
    Ok(jobs
        .par_iter()
        .map(|&(start, p, mode)| {
            let rec = SweepRecord::new(p, start, mode);
            let alpha = AlphaValue::Exact(p.exact.clone().expect("field grid"));
            match matching_index(&field, &alpha, &point_config(cfg, start, mode)) {
                Ok(r) => rec.with_result(&r),
                Err(e) => SweepRecord {
                    outcome: "error".into(),
                    error: Some(e.to_string()),
                    ..rec
                },
            }
        })
        .collect())
}

/// Visited fraction of attractor cells by the orbit of 0 under
/// `x ↦ βx + α mod 1` at every grid point.
pub fn sweep_density(cfg: &SweepConfig) -> Result<Vec<DensityRecord>, HarnessError> {
    let SweepKind::Density { steps, eps } = cfg.kind else {
        return Err(HarnessError::Config("not a density sweep".into()));
    };
    let field = sweep_field(cfg)?;
    validate(cfg, field.as_ref())?;
    let points = grid_points(cfg, field.as_ref())?;
    let beta = match (&field, &cfg.field) {
        (Some(f), _) => f.beta_f64(),
        (None, SlopeSpec::Value(b)) => rational_to_f64(b),
        (None, _) => unreachable!("algebraic slopes always carry a field"),
    };
    Ok(points
        .par_iter()
        .map(|p| {
            let mut rec = DensityRecord {
                index: p.index,
                alpha: p.value,
                fraction: None,
                visited_cells: None,
                total_cells: None,
                first_visit_q50: None,
                first_visit_q90: None,
                error: None,
            };
            let prof = GenBeta::new(p.value, beta)
                .map(|m| MapParams::GenBeta(m.with_guard(cfg.guard_band)))
                .map_err(|e| e.to_string())
                .and_then(|m| density_profile(&m, 0.0, steps, eps).map_err(|e| e.to_string()));
            match prof {
                Ok(d) => {
                    rec.fraction = Some(d.fraction);
                    rec.visited_cells = Some(d.visited_cells);
                    rec.total_cells = Some(d.total_cells);
                    rec.first_visit_q50 = d.first_visit_quantile(0.5);
                    rec.first_visit_q90 = d.first_visit_quantile(0.9);
                }
                Err(e) => rec.error = Some(e),
            }
            rec
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Param;

    #[test]
    fn exact_grid_endpoints() {
        let cfg = SweepConfig::matching(SlopeSpec::Multinacci(4), Param::beta_pow(-3), Param::beta_pow(-1), 5);
        let f = sweep_field(&cfg).unwrap().unwrap();
        let pts = grid_points(&cfg, Some(&f)).unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0].exact.as_ref().unwrap(), &f.beta_pow(-3));
        assert_eq!(pts[4].exact.as_ref().unwrap(), &f.beta_pow(-1));
        let mid = &(&f.beta_pow(-3) + &f.beta_pow(-1)) * &f.from_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(pts[2].exact.as_ref().unwrap(), &mid);
    }

    #[test]
    fn random_sampling_is_seeded() {
        let mut cfg = SweepConfig::matching(
            SlopeSpec::Multinacci(3),
            "0.1".parse().unwrap(),
            "0.5".parse().unwrap(),
            20,
        );
        cfg.sampling = Sampling::Random;
        cfg.seed = 7;
        let f = sweep_field(&cfg).unwrap().unwrap();
        let a = grid_points(&cfg, Some(&f)).unwrap();
        assert_eq!(a, grid_points(&cfg, Some(&f)).unwrap());
        assert!(a.windows(2).all(|w| w[0].value <= w[1].value));
        assert!(a.iter().all(|p| (0.1..0.5).contains(&p.value)));
        cfg.seed = 8;
        assert_ne!(a, grid_points(&cfg, Some(&f)).unwrap());
    }

    #[test]
    fn single_point_matches_direct_call() {
        let cfg = SweepConfig::matching(
            SlopeSpec::Multinacci(3),
            "1/10".parse().unwrap(),
            "1/10".parse().unwrap(),
            1,
        );
        let recs = sweep_matching(&cfg).unwrap();
        assert_eq!(recs.len(), 1);
        let f = BetaField::multinacci(3).unwrap();
        let a = AlphaValue::Exact(f.from_rational(&BigRational::new(1.into(), 10.into())));
        let direct = matching_index(&f, &a, &point_config(&cfg, &Start::ZeroOne, Mode::Exact)).unwrap();
        assert_eq!(
            recs[0],
            SweepRecord::new(
                &GridPoint {
                    index: 0,
                    exact: a.to_exact(&f).ok(),
                    value: 0.1
                },
                &Start::ZeroOne,
                Mode::Exact
            )
            .with_result(&direct)
        );
        assert_eq!(recs[0].kappa, Some(3));
    }

    #[test]
    fn both_modes_interleave() {
        let mut cfg = SweepConfig::matching(
            SlopeSpec::Multinacci(2),
            "0.3".parse().unwrap(),
            "0.6".parse().unwrap(),
            4,
        );
        cfg.mode = SweepMode::Both;
        let recs = sweep_matching(&cfg).unwrap();
        assert_eq!(recs.len(), 8);
        for pair in recs.chunks(2) {
            assert_eq!((pair[0].mode.as_str(), pair[1].mode.as_str()), ("exact", "float"));
            assert_eq!(pair[0].kappa, pair[1].kappa);
        }
    }

    #[test]
    fn bad_configs() {
        let mut cfg = SweepConfig::matching(
            SlopeSpec::Value(BigRational::new(3.into(), 2.into())),
            Param::beta_pow(0),
            Param::beta_pow(0),
            3,
        );
        assert!(sweep_matching(&cfg).is_err());
        cfg.field = SlopeSpec::Multinacci(3);
        cfg.alpha_lo = "0.2".parse().unwrap();
        cfg.alpha_hi = "0.1".parse().unwrap();
        assert!(sweep_matching(&cfg).is_err());
        cfg.alpha_hi = "0.3".parse().unwrap();
        cfg.starts = vec![Start::NearFixedPoint {
            eps: BigRational::new(1.into(), 100.into()),
            digits: vec![0, 1],
        }];
        assert!(sweep_matching(&cfg).is_err());
    }

    #[test]
    fn density_full_branch() {
        let mut cfg = SweepConfig::matching(
            SlopeSpec::Value(BigRational::from_integer(2.into())),
            Param::beta_pow(0),
            Param::beta_pow(0),
            1,
        );
        cfg.alpha_lo = "0".parse().unwrap();
        cfg.alpha_hi = "0".parse().unwrap();
        cfg.kind = SweepKind::Density { steps: 0, eps: 0.25 };
        let r = sweep_density(&cfg).unwrap();
        assert_eq!(r[0].total_cells, Some(4));
        assert_eq!(r[0].visited_cells, Some(1));
    }
}
