use std::sync::Arc;

use serde::Serialize;

use super::engine::AlphaValue;
use super::MatchingError;
use crate::algebra::BetaField;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `α > (3β − β² − 1)/β`.
    FourI,
    /// `(β² − 2)/β² ≤ α ≤ (3β − β² − 1)/β`.
    FourII,
    Other,
}

/// Thresholds `(β² − 2)/β²` and `(3β − β² − 1)/β`.
pub fn regime_thresholds<S: Scalar>(beta: &S) -> (S, S) {
    let b2 = beta.clone() * beta.clone();
    let lower = (b2.clone() - beta.from_i64_like(2)) / b2.clone();
    let upper = (beta.from_i64_like(3) * beta.clone() - b2 - beta.one_like()) / beta.clone();
    (lower, upper)
}

fn classify<S: Scalar>(beta: &S, alpha: &S) -> Result<Regime, MatchingError> {
    let strip_lo = beta.one_like() / (beta.clone() * beta.clone());
    let strip_hi = beta.one_like() / beta.clone();
    if !alpha.cmp_value(&strip_lo)?.is_gt() || !alpha.cmp_value(&strip_hi)?.is_lt() {
        return Err(MatchingError::OutsideRegion(format!(
            "α = {} is not in (β^-2, β^-1)",
            alpha.as_f64()
        )));
    }
    let (lower, upper) = regime_thresholds(beta);
    Ok(if alpha.cmp_value(&upper)?.is_gt() {
        Regime::FourI
    } else if alpha.cmp_value(&lower)?.is_ge() {
        Regime::FourII
    } else {
        Regime::Other
    })
}

/// Case split for the tribonacci slope; exact when `α` is exact.
pub fn regime_classify(field: &Arc<BetaField>, alpha: &AlphaValue) -> Result<Regime, MatchingError> {
    if !field.is_multinacci() || field.degree() != 3 {
        return Err(MatchingError::InvalidArgument(
            "regimes are defined for the tribonacci field".into(),
        ));
    }
    match alpha {
        AlphaValue::Exact(a) => classify(&field.generator(), a),
        AlphaValue::Float(a) => classify(&field.beta_f64(), a),
    }
}
