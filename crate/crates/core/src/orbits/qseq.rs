use serde::Serialize;

use super::{param_window, OrbitError, XiCurve};
use crate::maps::{MapParams, Side};
use crate::scalar::Scalar;

/// `Q_k = ξ'_k / (F^k)'(c)` for `k = 1..=n`, plus a geometric fit of the
/// increments.
#[derive(Debug, Clone, Serialize)]
pub struct QSequenceReport<S> {
    #[serde(skip)]
    pub values: Vec<S>,
    #[serde(rename = "values")]
    pub values_f64: Vec<f64>,
    /// `|Q_{k+1} − Q_k|` for `k = 1..n`.
    pub differences: Vec<f64>,
    /// `r` in `|ΔQ_k| ≈ C r^k`; `None` when fewer than two increments are nonzero.
    pub fitted_rate: Option<f64>,
    pub fit_constant: Option<f64>,
    /// `max_k |ΔQ_k| λ^k`.
    pub bound_constant: f64,
    pub limit: f64,
    /// Smallest slope modulus `λ`.
    pub expansion: f64,
}

/// Least-squares fit of `ln |v_k| = ln C + k ln r` over the nonzero entries,
/// with `k` starting at 1. Returns `(r, C)`.
pub fn fitted_rate(v: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_finite() && **x != 0.0)
        .map(|(i, x)| ((i + 1) as f64, x.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let icpt = (sy - slope * sx) / m;
    Some((slope.exp(), icpt.exp()))
}

pub fn q_sequence<S: Scalar>(m: &MapParams<S>, n: usize) -> Result<QSequenceReport<S>, OrbitError> {
    if n < 2 {
        return Err(OrbitError::InvalidArgument(format!("need n ≥ 2, got {n}")));
    }
    let (mut x, mut deriv, dparam) = match m {
        MapParams::SkewTent(t) => (t.alpha().clone(), t.slope_left(), t.alpha().one_like()),
        MapParams::GenBeta(g) => (g.alpha().zero_like(), g.beta().clone(), g.alpha().one_like()),
    };
    // Q_1 = ∂_t F(c) / F'(c)
    let mut q = dparam / deriv.clone();
    let mut values = vec![q.clone()];
    let mut differences = Vec::with_capacity(n - 1);
    for k in 2..=n {
        let next = m.step(&x, Side::Right)?.point;
        x = next;
        let (dx, dt) = match m {
            MapParams::SkewTent(t) => {
                if x.cmp_value(t.alpha())?.is_eq() {
                    return Err(OrbitError::BoundOrbit {
                        step: k - 1,
                        left_derivative: (deriv.clone() * t.slope_left()).as_f64(),
                        right_derivative: (-(deriv.clone() * t.slope_right())).as_f64(),
                    });
                }
                (t.dx(&x)?, t.dbeta(&x)?)
            }
            MapParams::GenBeta(g) => (g.beta().clone(), x.one_like()),
        };
        deriv = deriv * dx;
        let inc = dt / deriv.clone();
        differences.push(inc.as_f64().abs());
        q = inc + q;
        values.push(q.clone());
    }
    let values_f64: Vec<f64> = values.iter().map(|v| v.as_f64()).collect();
    let expansion = m.expansion().as_f64();
    let bound_constant = differences
        .iter()
        .enumerate()
        .map(|(i, d)| d * expansion.powi(i as i32 + 1))
        .fold(0.0, f64::max);
    let fit = fitted_rate(&differences);
    Ok(QSequenceReport {
        limit: *values_f64.last().unwrap(),
        values,
        values_f64,
        differences,
        fitted_rate: fit.map(|f| f.0),
        fit_constant: fit.map(|f| f.1),
        bound_constant,
        expansion,
    })
}

/// `max|ξ'_n| / min|ξ'_n| − 1` over `samples` interior points of the
/// parameter window of `ξ_n` around the current parameter.
pub fn distortion(m: &MapParams<f64>, n: usize, samples: usize) -> Result<f64, OrbitError> {
    let w = param_window(m, n)?;
    let curve = XiCurve::new(m.clone(), n);
    let (lo, hi) = (w.lo, w.hi);
    let mut dmax = 0.0f64;
    let mut dmin = f64::INFINITY;
    for i in 1..=samples {
        let t = lo + (hi - lo) * i as f64 / (samples + 1) as f64;
        let d = curve.derivative(&t)?.abs();
        dmax = dmax.max(d);
        dmin = dmin.min(d);
    }
    Ok(dmax / dmin - 1.0)
}
