use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::evector::{inverse_powers_f64, EVectorState, Update};
use super::MatchingError;
use crate::algebra::{AlgebraError, BetaField, FieldElement};
use crate::maps::{Branch, GenBeta, Side, DEFAULT_GUARD_BAND};
use crate::scalar::Scalar;

/// Default iteration cap.
pub const DEFAULT_CAP: usize = 100_000;

/// Distance below which float orbits count as matched when no digit
/// representation is available.
const FLOAT_MATCH_DISTANCE: f64 = 1e-13;

/// Tolerance of the per-step automaton cross-check.
pub const AUTOMATON_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaValue {
    Exact(FieldElement),
    Float(f64),
}

impl AlphaValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            AlphaValue::Exact(a) => a.to_f64(),
            AlphaValue::Float(a) => *a,
        }
    }

    /// The exact element, converting a float by its binary expansion.
    pub fn to_exact(&self, field: &Arc<BetaField>) -> Result<FieldElement, MatchingError> {
        match self {
            AlphaValue::Exact(a) => {
                if !a.field().same_as(field) {
                    return Err(AlgebraError::FieldMismatch.into());
                }
                Ok(a.clone())
            }
            AlphaValue::Float(x) => {
                let q = BigRational::from_float(*x).ok_or(AlgebraError::NotFinite)?;
                Ok(field.from_rational(&q))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Initial pair of the two orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Start {
    /// `(0, 1)`: the one-sided limits at the discontinuity.
    ZeroOne,
    /// `(p − ε, p − ε − value(e))` with `p` the fixed point.
    NearFixedPoint { eps: BigRational, digits: Vec<u8> },
}

impl Start {
    pub fn tag(&self) -> String {
        match self {
            Start::ZeroOne => "zero-one".into(),
            Start::NearFixedPoint { eps, digits } => {
                let d: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
                format!("near-fixed({eps},{d})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingConfig {
    pub cap: usize,
    pub mode: Mode,
    pub guard: f64,
    pub start: Start,
    pub keep_trace: bool,
}

impl Default for MatchingConfig {
    fn default() -> Self {
        MatchingConfig {
            cap: DEFAULT_CAP,
            mode: Mode::Exact,
            guard: DEFAULT_GUARD_BAND,
            start: Start::ZeroOne,
            keep_trace: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum Outcome {
    Matched(usize),
    NotMatchedWithinCap,
    PeriodicObstruction(usize),
}

impl Outcome {
    pub fn kappa(&self) -> Option<usize> {
        match self {
            Outcome::Matched(k) => Some(*k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub n: usize,
    pub sign: i8,
    /// Empty in orbit-distance mode.
    pub digits: Vec<u8>,
    /// `|G^n(0) − G^n(1)|` from the simulated orbits.
    pub d_float: f64,
    /// Branch decision inside the guard band.
    pub flagged: bool,
}

impl TraceStep {
    pub fn state(&self) -> EVectorState {
        EVectorState {
            digits: self.digits.clone(),
            sign: self.sign,
            n: self.n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchingResult {
    pub outcome: Outcome,
    pub mode: Mode,
    /// Steps taken.
    pub iterations: usize,
    pub guard_hits: usize,
    /// Step at which a float run handed over to exact arithmetic.
    pub escalated_at: Option<usize>,
    /// Largest `|d_float − value(e)|` over unflagged steps.
    pub max_discrepancy: f64,
    pub trace: Vec<TraceStep>,
}

impl MatchingResult {
    pub fn kappa(&self) -> Option<usize> {
        self.outcome.kappa()
    }

    /// `n,sign,e-digits,d_float,d_exact` lines with a header; `d_exact` lists
    /// the coefficients of `value(e)` as `num/den` separated by `;`.
    pub fn trace_csv(&self, field: &Arc<BetaField>) -> String {
        let mut out = String::from("n,sign,e,d_float,d_exact\n");
        for s in &self.trace {
            let digits: String = s.digits.iter().map(|d| char::from(b'0' + d)).collect();
            let exact = if s.digits.is_empty() {
                String::new()
            } else {
                s.state()
                    .value(field)
                    .coeffs()
                    .iter()
                    .map(|c| format!("{}/{}", c.numer(), c.denom()))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let _ = writeln!(out, "{},{},{},{:e},{}", s.n, s.sign, digits, s.d_float, exact);
        }
        out
    }
}

/// Runs both orbits until they coincide, cycle, or exceed the cap.
pub fn matching_index(
    field: &Arc<BetaField>,
    alpha: &AlphaValue,
    cfg: &MatchingConfig,
) -> Result<MatchingResult, MatchingError> {
    if cfg.cap == 0 {
        return Err(MatchingError::InvalidArgument("cap must be at least 1".into()));
    }
    match (cfg.mode, alpha) {
        (Mode::Exact, _) => run_exact(field, &alpha.to_exact(field)?, cfg),
        (Mode::Float, AlphaValue::Exact(a)) => {
            if !a.field().same_as(field) {
                return Err(AlgebraError::FieldMismatch.into());
            }
            run_float(field, a.to_f64(), Some(a), cfg)
        }
        (Mode::Float, AlphaValue::Float(a)) => run_float(field, *a, None, cfg),
    }
}

fn lap(b: Branch) -> i64 {
    match b {
        Branch::Lap(k) => k,
        _ => unreachable!("β-transformations only produce lap indices"),
    }
}

fn exact_start(
    field: &Arc<BetaField>,
    map: &GenBeta<FieldElement>,
    start: &Start,
) -> Result<(FieldElement, FieldElement, EVectorState), MatchingError> {
    let multi = field.is_multinacci();
    match start {
        Start::ZeroOne => {
            let state = if multi {
                EVectorState::start(field)?
            } else {
                EVectorState {
                    digits: Vec::new(),
                    sign: -1,
                    n: 0,
                }
            };
            Ok((field.zero(), field.one(), state))
        }
        Start::NearFixedPoint { eps, digits } => {
            if !multi {
                return Err(MatchingError::NotMultinacci);
            }
            if digits.len() != field.degree() || digits.iter().all(|&d| d == 0) || digits.iter().any(|&d| d > 1) {
                return Err(MatchingError::InvalidStart(format!("bad digit vector {digits:?}")));
            }
            let state = EVectorState {
                digits: digits.clone(),
                sign: 1,
                n: 0,
            };
            let x0 = map.fixed_point()? - field.from_rational(eps);
            let x1 = &x0 - &state.value(field);
            let zero = field.zero();
            let one = field.one();
            for x in [&x0, &x1] {
                if x.cmp_value(&zero)?.is_lt() || x.cmp_value(&one)?.is_ge() {
                    return Err(MatchingError::InvalidStart(format!(
                        "start point {} outside [0, 1)",
                        x.to_f64()
                    )));
                }
            }
            Ok((x0, x1, state))
        }
    }
}

fn run_exact(
    field: &Arc<BetaField>,
    alpha: &FieldElement,
    cfg: &MatchingConfig,
) -> Result<MatchingResult, MatchingError> {
    let map = GenBeta::new(alpha.clone(), field.generator())?;
    let multi = field.is_multinacci();
    let inv = inverse_powers_f64(field);
    let (mut x0, mut x1, mut state) = exact_start(field, &map, &cfg.start)?;
    let mut seen: HashMap<(FieldElement, FieldElement), usize> = HashMap::new();
    let mut trace = Vec::new();
    let mut max_discrepancy = 0.0f64;
    let record = |trace: &mut Vec<TraceStep>, state: &EVectorState, d: f64| {
        if cfg.keep_trace {
            trace.push(TraceStep {
                n: state.n,
                sign: state.sign,
                digits: state.digits.clone(),
                d_float: d,
                flagged: false,
            });
        }
    };
    record(&mut trace, &state, (&x0 - &x1).to_f64().abs());
    let outcome = loop {
        if state.is_matched() {
            break Outcome::Matched(state.n);
        }
        if state.n >= cfg.cap {
            break Outcome::NotMatchedWithinCap;
        }
        if let Some(prev) = seen.insert((x0.clone(), x1.clone()), state.n) {
            break Outcome::PeriodicObstruction(state.n - prev);
        }
        let s0 = map.step(&x0, Side::Right)?;
        let s1 = map.step(&x1, Side::Left)?;
        x0 = s0.point;
        x1 = s1.point;
        let diff = &x0 - &x1;
        if multi {
            let upd = state.update_for(lap(s0.branch), lap(s1.branch))?;
            state = state.step(upd)?;
            let mut v = state.value(field);
            if state.sign < 0 {
                v = -v;
            }
            if diff != v {
                return Err(MatchingError::AutomatonMismatch { step: state.n });
            }
            let d = diff.to_f64().abs();
            max_discrepancy = max_discrepancy.max((d - state.value_f64(&inv)).abs());
            record(&mut trace, &state, d);
        } else {
            let sign = match diff.sign()? {
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => 1,
            };
            state = EVectorState {
                digits: Vec::new(),
                sign,
                n: state.n + 1,
            };
            record(&mut trace, &state, diff.to_f64().abs());
        }
    };
    Ok(MatchingResult {
        outcome,
        mode: Mode::Exact,
        iterations: state.n,
        guard_hits: 0,
        escalated_at: None,
        max_discrepancy,
        trace,
    })
}

/// Float simulation with a rigorous error radius on the orbit of 0. The
/// orbit of 1 is re-derived from the automaton after each step, so the
/// radius only grows through the orbit of 0.
fn run_float(
    field: &Arc<BetaField>,
    alpha: f64,
    exact_alpha: Option<&FieldElement>,
    cfg: &MatchingConfig,
) -> Result<MatchingResult, MatchingError> {
    let beta = field.beta_f64();
    let multi = field.is_multinacci();
    let inv = inverse_powers_f64(field);
    let unit = f64::EPSILON;
    let alpha_err = if exact_alpha.is_some() { unit * alpha } else { 0.0 };
    let step_err = |x: f64, k: f64| unit * (beta * x + alpha + k.abs() + 1.0) + unit * beta * x + alpha_err;

    let (mut x0, mut x1, mut state, mut rad0, mut rad1) = match &cfg.start {
        Start::ZeroOne => {
            let state = if multi {
                EVectorState::start(field)?
            } else {
                EVectorState {
                    digits: Vec::new(),
                    sign: -1,
                    n: 0,
                }
            };
            (0.0, 1.0, state, 0.0, 0.0)
        }
        Start::NearFixedPoint { .. } => {
            // start points come from exact arithmetic, then rounded
            let a = AlphaValue::Float(alpha).to_exact(field)?;
            let a = exact_alpha.cloned().unwrap_or(a);
            let map = GenBeta::new(a, field.generator())?;
            let (e0, e1, st) = exact_start(field, &map, &cfg.start)?;
            let (f0, f1) = (e0.to_f64(), e1.to_f64());
            (f0, f1, st, unit * f0, unit * f1)
        }
    };
    let mut trace = Vec::new();
    let mut guard_hits = 0;
    let mut max_discrepancy = 0.0f64;
    if cfg.keep_trace {
        trace.push(TraceStep {
            n: 0,
            sign: state.sign,
            digits: state.digits.clone(),
            d_float: (x0 - x1).abs(),
            flagged: false,
        });
    }
    let outcome = loop {
        if state.is_matched() {
            break Outcome::Matched(state.n);
        }
        if state.n >= cfg.cap {
            break Outcome::NotMatchedWithinCap;
        }
        let y0 = beta * x0 + alpha;
        let k0 = y0.floor();
        let f0 = y0 - k0;
        let y1 = beta * x1 + alpha;
        let k1 = y1.ceil() - 1.0;
        let f1 = y1 - k1;
        rad0 = beta * rad0 + step_err(x0, k0);
        rad1 = beta * rad1 + step_err(x1, k1);
        let near = |f: f64, r: f64| f.min(1.0 - f) < cfg.guard + r;
        let flagged = near(f0, rad0) || near(f1, rad1);
        if flagged {
            if let Some(a) = exact_alpha {
                let mut exact = run_exact(field, a, cfg)?;
                exact.escalated_at = Some(state.n + 1);
                exact.guard_hits = guard_hits + 1;
                return Ok(exact);
            }
            guard_hits += 1;
        }
        let d = (f0 - f1).abs();
        if multi {
            let upd = state.update_for(k0 as i64, k1 as i64)?;
            state = state.step(upd)?;
            let v = state.value_f64(&inv);
            if !flagged {
                max_discrepancy = max_discrepancy.max((d - v).abs());
            }
            x0 = f0;
            rad1 = rad0 + unit;
            x1 = if upd == Update::Wrap {
                1.0
            } else {
                f0 - state.sign as f64 * v
            };
        } else {
            let sign = if d < FLOAT_MATCH_DISTANCE {
                0
            } else if f0 < f1 {
                -1
            } else {
                1
            };
            state = EVectorState {
                digits: Vec::new(),
                sign,
                n: state.n + 1,
            };
            x0 = f0;
            x1 = f1;
        }
        if cfg.keep_trace {
            trace.push(TraceStep {
                n: state.n,
                sign: state.sign,
                digits: state.digits.clone(),
                d_float: d,
                flagged,
            });
        }
    };
    Ok(MatchingResult {
        outcome,
        mode: Mode::Float,
        iterations: state.n,
        guard_hits,
        escalated_at: None,
        max_discrepancy,
        trace,
    })
}

/// Verified two-branch matching for `0 < α ≤ 2 − β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwoBranch {
    pub kappa: usize,
    /// `α = 2 − β`: the orbits meet at the discontinuity, `G^N(0) = 0`,
    /// `G^N(1) = 1`.
    pub boundary: bool,
}

/// Checks `G^n(0) = α(β^n − 1)/(β − 1) < G^n(1)` for `1 ≤ n < N` and
/// `G^N(0) = G^N(1)` (modulo 1 on the boundary).
pub fn two_branch_matching(field: &Arc<BetaField>, alpha: &FieldElement) -> Result<TwoBranch, MatchingError> {
    super::evector::require_multinacci(field)?;
    if !alpha.field().same_as(field) {
        return Err(AlgebraError::FieldMismatch.into());
    }
    let beta = field.generator();
    let one = field.one();
    let edge = &field.from_int(2) - &beta;
    let pos = alpha.sign()?.is_gt();
    let vs_edge = alpha.cmp_value(&edge)?;
    if !pos || vs_edge.is_gt() {
        return Err(MatchingError::OutsideRegion(format!(
            "α = {} is not in (0, 2 − β]",
            alpha.to_f64()
        )));
    }
    let boundary = vs_edge.is_eq();
    let map = GenBeta::new(alpha.clone(), beta.clone())?;
    let n_deg = field.degree();
    let (mut x0, mut x1) = (field.zero(), one.clone());
    let mut pow = one.clone();
    let bm1_inv = (&beta - &one).inverse()?;
    for n in 1..=n_deg {
        x0 = map.step(&x0, Side::Right)?.point;
        x1 = map.step(&x1, Side::Left)?.point;
        pow = &pow * &beta;
        let closed = alpha * &(&(&pow - &one) * &bm1_inv);
        if n < n_deg {
            if x0 != closed || x0.cmp_value(&x1)?.is_ge() {
                return Err(MatchingError::AutomatonMismatch { step: n });
            }
        } else {
            let ok = if boundary {
                x0.is_zero() && x1 == one && closed == one
            } else {
                x0 == x1 && x0 == closed
            };
            if !ok {
                return Err(MatchingError::AutomatonMismatch { step: n });
            }
        }
    }
    Ok(TwoBranch { kappa: n_deg, boundary })
}
