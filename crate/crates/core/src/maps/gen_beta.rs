use std::cmp::Ordering;

use serde::Serialize;

use super::skew_tent::check_fixed;
use super::{check_unit, lt, Branch, MapError, MapGeometry, Side, Step, DEFAULT_GUARD_BAND};
use crate::scalar::Scalar;

/// `G(x) = βx + α (mod 1)` viewed as a circle map with its single
/// discontinuity at `0 ≡ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenBeta<S> {
    alpha: S,
    beta: S,
    guard: f64,
}

/// Where the fixed point sits relative to its neighbouring breakpoints,
/// for multinacci β and `β^{1−N} < α < β^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StripInequalities {
    /// `1/β² < p − c_1`
    pub p_c1_lower: bool,
    /// `p − c_1 < (β − 1)/β`
    pub p_c1_upper: bool,
    /// `1/β^{N+1} < c_2 − p`
    pub c2_p_lower: bool,
    /// `c_2 − p < 1/β − 1/β²`
    pub c2_p_upper: bool,
}

impl StripInequalities {
    pub fn all(&self) -> bool {
        self.p_c1_lower && self.p_c1_upper && self.c2_p_lower && self.c2_p_upper
    }
}

impl<S: Scalar> GenBeta<S> {
    /// Requires `β > 1` and `0 ≤ α < 1`.
    pub fn new(alpha: S, beta: S) -> Result<Self, MapError> {
        let one = alpha.one_like();
        if !lt(&one, &beta)? {
            return Err(MapError::InvalidParameters(format!(
                "slope {} must exceed 1",
                beta.as_f64()
            )));
        }
        if alpha.certified_sign()? == Ordering::Less || !lt(&alpha, &one)? {
            return Err(MapError::InvalidParameters(format!(
                "shift {} must lie in [0, 1)",
                alpha.as_f64()
            )));
        }
        Ok(GenBeta {
            alpha,
            beta,
            guard: DEFAULT_GUARD_BAND,
        })
    }

    pub fn with_guard(mut self, g: f64) -> Self {
        self.guard = g;
        self
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    pub fn beta(&self) -> &S {
        &self.beta
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }

    /// Same slope, different shift.
    pub fn with_alpha(&self, alpha: S) -> Result<Self, MapError> {
        Ok(GenBeta::new(alpha, self.beta.clone())?.with_guard(self.guard))
    }

    /// `βx + α − k`, with `k` chosen by comparison so that the result lies in
    /// `[0, 1)` (right) or `(0, 1]` (left).
    pub fn step(&self, x: &S, side: Side) -> Result<Step<S>, MapError> {
        let y = self.beta.clone() * x.clone() + self.alpha.clone();
        let mut k = y.floor_i64()?;
        let mut point = y.clone() - y.from_i64_like(k);
        if side == Side::Left && point.is_zero_value()? {
            k -= 1;
            point = point.one_like();
        }
        let guard_hit = !S::EXACT && {
            let f = point.as_f64();
            f.min(1.0 - f) / self.beta.as_f64() < self.guard
        };
        Ok(Step {
            point,
            branch: Branch::Lap(k),
            guard_hit,
        })
    }

    /// Checked right-continuous evaluation.
    pub fn eval(&self, x: &S) -> Result<(S, Branch), MapError> {
        self.eval_sided(x, Side::Right)
    }

    /// `G(x^+)`.
    pub fn eval_right(&self, x: &S) -> Result<(S, Branch), MapError> {
        self.eval_sided(x, Side::Right)
    }

    /// `G(x^−)`.
    pub fn eval_left(&self, x: &S) -> Result<(S, Branch), MapError> {
        self.eval_sided(x, Side::Left)
    }

    fn eval_sided(&self, x: &S, side: Side) -> Result<(S, Branch), MapError> {
        check_unit(x)?;
        let s = self.step(x, side)?;
        if s.guard_hit {
            let Branch::Lap(k) = s.branch else { unreachable!() };
            let near = if s.point.as_f64() < 0.5 { k } else { k + 1 };
            return Err(MapError::BreakpointAmbiguity {
                x: x.as_f64(),
                breakpoint: (near as f64 - self.alpha.as_f64()) / self.beta.as_f64(),
            });
        }
        Ok((s.point, s.branch))
    }

    /// `c_k = (k − α)/β` for every integer `k` with `0 < c_k < 1`.
    pub fn breakpoints(&self) -> Result<Vec<S>, MapError> {
        let one = self.alpha.one_like();
        let mut out = Vec::new();
        let mut k = 1;
        loop {
            let c = (self.alpha.from_i64_like(k) - self.alpha.clone()) / self.beta.clone();
            if !lt(&c, &one)? {
                break;
            }
            if c.certified_sign()? == Ordering::Greater {
                out.push(c);
            }
            k += 1;
        }
        Ok(out)
    }

    /// `p = (1 − α)/(β − 1)`, which exists when `α + β ≥ 2`; `α + β = 2`
    /// gives `p = 1 ≡ 0`.
    pub fn fixed_point(&self) -> Result<S, MapError> {
        let one = self.alpha.one_like();
        let two = self.alpha.from_i64_like(2);
        if lt(&(self.alpha.clone() + self.beta.clone()), &two)? {
            return Err(MapError::NoFixedPoint(format!(
                "α + β = {} < 2, the branch through p is missing",
                (self.alpha.as_f64() + self.beta.as_f64())
            )));
        }
        let p = (one.clone() - self.alpha.clone()) / (self.beta.clone() - one);
        let gp = self.step(&p, Side::Left)?.point;
        check_fixed(&gp, &p)?;
        Ok(p)
    }

    pub fn geometry(&self) -> Result<MapGeometry<S>, MapError> {
        let breakpoints = self.breakpoints()?;
        let fixed_point = self.fixed_point().ok();
        let mut secondary = Vec::new();
        if let Some(p) = &fixed_point {
            secondary.push(("p_hat", p.clone() - self.beta.one_like() / self.beta.clone()));
        }
        if let Some(c1) = breakpoints.first() {
            secondary.push(("c1", c1.clone()));
        }
        if let Some(c2) = breakpoints.get(1) {
            secondary.push(("c2", c2.clone()));
        }
        Ok(MapGeometry {
            breakpoints,
            fixed_point,
            secondary,
        })
    }

    /// For `2 < α + β < 3`: `p̂ < c_1 < p < c_2 < 1`.
    pub fn check_ordering(&self) -> Result<(), MapError> {
        let s = self.alpha.clone() + self.beta.clone();
        let two = s.from_i64_like(2);
        let three = s.from_i64_like(3);
        if !lt(&two, &s)? || !lt(&s, &three)? {
            return Ok(());
        }
        let one = s.one_like();
        let p = self.fixed_point()?;
        let ph = p.clone() - one.clone() / self.beta.clone();
        let c1 = (one.clone() - self.alpha.clone()) / self.beta.clone();
        let c2 = (two - self.alpha.clone()) / self.beta.clone();
        let chain = [("p̂", &ph), ("c1", &c1), ("p", &p), ("c2", &c2), ("1", &one)];
        for w in chain.windows(2) {
            if !lt(w[0].1, w[1].1)? {
                return Err(MapError::OrderingViolated(format!(
                    "{} = {} is not below {} = {}",
                    w[0].0,
                    w[0].1.as_f64(),
                    w[1].0,
                    w[1].1.as_f64()
                )));
            }
        }
        Ok(())
    }

    /// The bounds on `p − c_1` and `c_2 − p` for a multinacci slope of
    /// order `n`, valid when `β^{1−n} < α < β^{-1}`.
    pub fn strip_inequalities(&self, n: usize) -> Result<StripInequalities, MapError> {
        let one = self.alpha.one_like();
        let inv = one.clone() / self.beta.clone();
        let inv_pow = |k: usize| inv.powi_like(k as u32);
        if !lt(&inv_pow(n - 1), &self.alpha)? || !lt(&self.alpha, &inv)? {
            return Err(MapError::InvalidParameters(format!(
                "α = {} is outside (β^{{1−N}}, β^{{-1}})",
                self.alpha.as_f64()
            )));
        }
        let p = self.fixed_point()?;
        let c1 = (one.clone() - self.alpha.clone()) / self.beta.clone();
        let c2 = (self.alpha.from_i64_like(2) - self.alpha.clone()) / self.beta.clone();
        let pc1 = p.clone() - c1;
        let c2p = c2 - p;
        Ok(StripInequalities {
            p_c1_lower: lt(&inv_pow(2), &pc1)?,
            p_c1_upper: lt(&pc1, &((self.beta.clone() - one.clone()) / self.beta.clone()))?,
            c2_p_lower: lt(&inv_pow(n + 1), &c2p)?,
            c2_p_upper: lt(&c2p, &(inv.clone() - inv_pow(2)))?,
        })
    }

    /// `α' = 1 − ((α + β) mod 1)`, reduced into `[0, 1)`; then
    /// `G_{α,β}(1 − x) = 1 − G_{α',β}(x)` off breakpoints.
    pub fn symmetry_conjugate(&self) -> Result<Self, MapError> {
        let s = self.alpha.clone() + self.beta.clone();
        let k = s.floor_i64()?;
        let frac = s.clone() - s.from_i64_like(k);
        let mut a = s.one_like() - frac;
        if a.cmp_value(&a.one_like())? == Ordering::Equal {
            a = a.zero_like();
        }
        self.with_alpha(a)
    }
}
