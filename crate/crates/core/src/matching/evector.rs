use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::MatchingError;
use crate::algebra::{BetaField, FieldElement};

/// Binary digits of `|G^n(0) − G^n(1)| = Σ e_i β^{-i}` and the sign of
/// `G^n(0) − G^n(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EVectorState {
    pub digits: Vec<u8>,
    /// −1, 0 or +1; zero exactly when every digit is zero.
    pub sign: i8,
    pub n: usize,
}

/// Admissible updates of the digit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Update {
    Shift,
    Flip,
    /// Both points sit on the discontinuity, `G^n(0) = 0` and `G^n(1) = 1`:
    /// the difference is `−1` and the digits return to all ones.
    Wrap,
}

pub(crate) fn require_multinacci(field: &BetaField) -> Result<(), MatchingError> {
    if field.is_multinacci() {
        Ok(())
    } else {
        Err(MatchingError::NotMultinacci)
    }
}

impl EVectorState {
    /// State after one step from `(0, 1)` when `α > 2 − β`:
    /// `d(1) = 2 − β = β^{-N}`, sign `+`.
    pub fn init(field: &BetaField) -> Result<Self, MatchingError> {
        require_multinacci(field)?;
        let mut digits = vec![0; field.degree()];
        digits[field.degree() - 1] = 1;
        Ok(EVectorState { digits, sign: 1, n: 1 })
    }

    /// `G^0(0) − G^0(1) = −1`, all digits one.
    pub fn start(field: &BetaField) -> Result<Self, MatchingError> {
        require_multinacci(field)?;
        Ok(EVectorState {
            digits: vec![1; field.degree()],
            sign: -1,
            n: 0,
        })
    }

    pub fn is_matched(&self) -> bool {
        self.sign == 0
    }

    pub fn step(&self, update: Update) -> Result<Self, MatchingError> {
        if self.is_matched() {
            return Err(MatchingError::SteppingMatched);
        }
        let len = self.digits.len();
        let (digits, sign) = match update {
            Update::Shift => {
                let mut d = self.digits[1..].to_vec();
                d.push(0);
                (d, self.sign)
            }
            Update::Flip => {
                let mut d: Vec<u8> = self.digits[1..].iter().map(|e| 1 - e).collect();
                d.push(1);
                (d, -self.sign)
            }
            Update::Wrap => (vec![1; len], self.sign),
        };
        debug_assert_eq!(digits.len(), len);
        let sign = if digits.iter().all(|&d| d == 0) { 0 } else { sign };
        Ok(EVectorState {
            digits,
            sign,
            n: self.n + 1,
        })
    }

    /// The update consistent with branch integers `k0` (orbit of 0) and
    /// `k1` (orbit of 1): with `j = σ(k0 − k1)`, `j = e_1` shifts and
    /// `j = e_1 + 1` flips.
    pub fn update_for(&self, k0: i64, k1: i64) -> Result<Update, MatchingError> {
        let j = self.sign as i64 * (k0 - k1);
        let e1 = self.digits[0] as i64;
        if j == e1 {
            Ok(Update::Shift)
        } else if j == e1 + 1 {
            Ok(Update::Flip)
        } else if j == e1 - 1 && self.digits[1..].iter().all(|&d| d == 0) {
            Ok(Update::Wrap)
        } else {
            Err(MatchingError::Inconsistent {
                step: self.n + 1,
                j,
                e1,
            })
        }
    }

    /// `Σ e_i β^{-i}` exactly.
    pub fn value(&self, field: &Arc<BetaField>) -> FieldElement {
        let inv = field.beta_pow(-1);
        let mut acc = field.zero();
        let mut p = field.one();
        for &d in &self.digits {
            p = &p * &inv;
            if d == 1 {
                acc = &acc + &p;
            }
        }
        acc
    }

    pub fn value_f64(&self, inv_powers: &[f64]) -> f64 {
        self.digits
            .iter()
            .zip(inv_powers)
            .filter(|(d, _)| **d == 1)
            .map(|(_, p)| p)
            .sum()
    }

    /// Flowchart label such as `+011`, or `match`.
    pub fn code(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for EVectorState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_matched() {
            return f.write_str("match");
        }
        f.write_str(if self.sign > 0 { "+" } else { "-" })?;
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// `β^{-1}, …, β^{-N}` in floating point, each correctly rounded.
pub fn inverse_powers_f64(field: &Arc<BetaField>) -> Vec<f64> {
    (1..=field.degree() as i64)
        .map(|i| field.beta_pow(-i).to_f64())
        .collect()
}

/// Digits from a string such as `0110`.
pub fn parse_digits(s: &str, degree: usize) -> Result<Vec<u8>, MatchingError> {
    let d: Vec<u8> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(MatchingError::InvalidStart(format!("bad digit {c:?} in {s:?}"))),
        })
        .collect::<Result<_, _>>()?;
    if d.len() != degree {
        return Err(MatchingError::InvalidStart(format!(
            "digit string {s:?} has length {}, field degree is {degree}",
            d.len()
        )));
    }
    Ok(d)
}
