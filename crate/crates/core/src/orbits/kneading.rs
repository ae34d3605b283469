use std::cmp::Ordering;

use serde::Serialize;

use super::OrbitError;
use crate::maps::{MapParams, SkewTent};
use crate::scalar::Scalar;

/// Cutting times of the two one-sided monotone extensions at the critical
/// value: `left` grows from `[0, c_1]`, `right` from `[c_1, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuttingTimes {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl CuttingTimes {
    /// Largest left and right cutting times below `n`.
    pub fn last_before(&self, n: usize) -> (Option<usize>, Option<usize>) {
        let last = |v: &[usize]| v.iter().copied().filter(|&s| s < n).max();
        (last(&self.left), last(&self.right))
    }
}

/// Hofbauer-tower levels `D_k` for `k = 1..=n`: `k` is a cutting time when
/// the turning point lies inside `D_k`, and then `D_{k+1} = [c_{k+1}, c_1]`;
/// otherwise `D_{k+1} = T(D_k)`.
pub fn cutting_times<S: Scalar>(m: &SkewTent<S>, n: usize) -> Result<CuttingTimes, OrbitError> {
    if n == 0 {
        return Err(OrbitError::InvalidArgument("need n ≥ 1".into()));
    }
    let c = m.alpha().clone();
    let c1 = m.beta().clone();
    let tower = |start: S| -> Result<Vec<usize>, OrbitError> {
        let mut out = Vec::new();
        // D_k = hull(cv, other) where cv = c_k
        let mut cv = c1.clone();
        let mut other = start;
        for k in 1..=n {
            let (a, b) = if cv.cmp_value(&other)? == Ordering::Less {
                (cv.clone(), other.clone())
            } else {
                (other.clone(), cv.clone())
            };
            let inside = a.cmp_value(&c)? == Ordering::Less && c.cmp_value(&b)? == Ordering::Less;
            let next_cv = m.step(&cv)?.point;
            other = if inside { c1.clone() } else { m.step(&other)?.point };
            cv = next_cv;
            if inside {
                out.push(k);
            }
        }
        Ok(out)
    };
    Ok(CuttingTimes {
        left: tower(c.zero_like())?,
        right: tower(c.one_like())?,
    })
}

/// Times `m ≤ n` at which `|ξ_{m+1} − c_1|` sets a strict record among
/// `m ≥ 1`, with `m = 0` prepended. Empty when no later iterate improves on
/// the first distance.
pub fn closest_approach_times<S: Scalar>(m: &MapParams<S>, n: usize) -> Result<Vec<usize>, OrbitError> {
    let MapParams::SkewTent(t) = m else {
        return Err(OrbitError::InvalidArgument(
            "closest approach times need a skew tent map".into(),
        ));
    };
    let c1 = t.beta().clone();
    let orbit = m.orbit(t.alpha(), n + 1)?;
    let dist = |j: usize| (orbit[j + 1].point.clone() - c1.clone()).abs_value();
    if n < 1 {
        return Ok(vec![0]);
    }
    let mut out = vec![0, 1];
    let mut best = dist(1)?;
    for j in 2..=n {
        let d = dist(j)?;
        if d.cmp_value(&best)? == Ordering::Less {
            out.push(j);
            best = d;
        }
    }
    if out.len() == 2 {
        return Ok(Vec::new());
    }
    Ok(out)
}
