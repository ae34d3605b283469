use std::cmp::Ordering;

use super::{check_unit, lt, Branch, MapError, MapGeometry, Step, DEFAULT_GUARD_BAND};
use crate::scalar::Scalar;

/// `T(x) = βx/α` on `[0, α]`, `β(1 − x)/(1 − α)` on `[α, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewTent<S> {
    alpha: S,
    beta: S,
    guard: f64,
}

impl<S: Scalar> SkewTent<S> {
    /// Requires `0 < α < 1` and `max(α, 1 − α) < β ≤ 1`.
    pub fn new(alpha: S, beta: S) -> Result<Self, MapError> {
        let zero = alpha.zero_like();
        let one = alpha.one_like();
        if !lt(&zero, &alpha)? || !lt(&alpha, &one)? {
            return Err(MapError::InvalidParameters(format!(
                "turning point {} must lie in (0, 1)",
                alpha.as_f64()
            )));
        }
        let co = one.clone() - alpha.clone();
        if !lt(&alpha, &beta)? || !lt(&co, &beta)? || lt(&one, &beta)? {
            return Err(MapError::InvalidParameters(format!(
                "peak {} must satisfy max(α, 1 − α) < β ≤ 1",
                beta.as_f64()
            )));
        }
        Ok(SkewTent {
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

    pub fn slope_left(&self) -> S {
        self.beta.clone() / self.alpha.clone()
    }

    pub fn slope_right(&self) -> S {
        self.beta.clone() / (self.alpha.one_like() - self.alpha.clone())
    }

    pub fn step(&self, x: &S) -> Result<Step<S>, MapError> {
        let d = x.clone() - self.alpha.clone();
        let guard_hit = !S::EXACT && d.as_f64().abs() < self.guard;
        let (point, branch) = match d.certified_sign()? {
            Ordering::Less => (self.beta.clone() * x.clone() / self.alpha.clone(), Branch::L),
            Ordering::Greater => {
                let one = x.one_like();
                (
                    self.beta.clone() * (one.clone() - x.clone()) / (one - self.alpha.clone()),
                    Branch::R,
                )
            }
            Ordering::Equal => (self.beta.clone(), Branch::C),
        };
        Ok(Step {
            point,
            branch,
            guard_hit,
        })
    }

    pub fn eval(&self, x: &S) -> Result<(S, Branch), MapError> {
        check_unit(x)?;
        let s = self.step(x)?;
        if s.guard_hit && s.branch != Branch::C {
            return Err(MapError::BreakpointAmbiguity {
                x: x.as_f64(),
                breakpoint: self.alpha.as_f64(),
            });
        }
        Ok((s.point, s.branch))
    }

    /// `∂T/∂x` on the branch containing `x`; the left slope at the turning point.
    pub fn dx(&self, x: &S) -> Result<S, MapError> {
        Ok(match x.cmp_value(&self.alpha)? {
            Ordering::Greater => -self.slope_right(),
            _ => self.slope_left(),
        })
    }

    /// `∂T/∂β` at `x`.
    pub fn dbeta(&self, x: &S) -> Result<S, MapError> {
        let one = x.one_like();
        Ok(match x.cmp_value(&self.alpha)? {
            Ordering::Greater => (one.clone() - x.clone()) / (one - self.alpha.clone()),
            _ => x.clone() / self.alpha.clone(),
        })
    }

    /// Orientation reversing fixed point `β / (1 − α + β)`.
    pub fn fixed_point(&self) -> Result<S, MapError> {
        let one = self.alpha.one_like();
        let p = self.beta.clone() / (one - self.alpha.clone() + self.beta.clone());
        let tp = self.step(&p)?.point;
        check_fixed(&tp, &p)?;
        Ok(p)
    }

    /// The other preimage of `T(p)`, on the left branch.
    pub fn secondary_point(&self) -> Result<S, MapError> {
        Ok(self.alpha.clone() * self.fixed_point()? / self.beta.clone())
    }

    /// The point `x̂ ≠ x` with `T(x̂) = T(x)`.
    pub fn involution(&self, x: &S) -> Result<S, MapError> {
        check_unit(x)?;
        let one = x.one_like();
        let co = one.clone() - self.alpha.clone();
        match x.cmp_value(&self.alpha)? {
            Ordering::Less => Ok(one - co * x.clone() / self.alpha.clone()),
            Ordering::Greater => Ok(self.alpha.clone() * (one - x.clone()) / co),
            Ordering::Equal => Err(MapError::AtTurningPoint),
        }
    }

    pub fn geometry(&self) -> Result<MapGeometry<S>, MapError> {
        Ok(MapGeometry {
            breakpoints: vec![self.alpha.clone()],
            fixed_point: Some(self.fixed_point()?),
            secondary: vec![("p_hat", self.secondary_point()?)],
        })
    }

    /// `T²(α) < p̂ < p < T(α)`.
    pub fn check_ordering(&self) -> Result<(), MapError> {
        let c1 = self.beta.clone();
        let c2 = self.step(&c1)?.point;
        let p = self.fixed_point()?;
        let ph = self.secondary_point()?;
        let chain = [("T²(α)", &c2), ("p̂", &ph), ("p", &p), ("T(α)", &c1)];
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
}

pub(super) fn check_fixed<S: Scalar>(image: &S, p: &S) -> Result<(), MapError> {
    let diff = image.clone() - p.clone();
    let ok = if S::EXACT {
        diff.is_zero_value()?
    } else {
        diff.as_f64().abs() <= 1e-12
    };
    if ok {
        Ok(())
    } else {
        Err(MapError::FixedPointCheck(diff.as_f64()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn full_tent_values() {
        let t = SkewTent::new(0.5, 1.0).unwrap();
        assert_eq!(t.eval(&0.25).unwrap(), (0.5, Branch::L));
        assert_eq!(t.eval(&0.5).unwrap(), (1.0, Branch::C));
        assert_eq!(t.fixed_point().unwrap(), 2.0 / 3.0);
        assert_eq!(t.involution(&0.25).unwrap(), 0.75);
    }

    #[test]
    fn involution_exact_example() {
        let t = SkewTent::new(r(1, 4), r(9, 10)).unwrap();
        let x = r(1, 10);
        let xh = t.involution(&x).unwrap();
        assert_eq!(xh, r(7, 10));
        assert_eq!(t.step(&x).unwrap().point, t.step(&xh).unwrap().point);
        assert_eq!(t.involution(&xh).unwrap(), x);
        assert_eq!(t.involution(&r(0, 1)).unwrap(), r(1, 1));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SkewTent::new(0.3, 0.6).is_err());
        assert!(SkewTent::new(0.5, 1.1).is_err());
        assert!(SkewTent::new(0.0, 0.9).is_err());
        assert!(matches!(
            SkewTent::new(0.5, 0.9).unwrap().involution(&0.5),
            Err(MapError::AtTurningPoint)
        ));
    }

    #[test]
    fn guard_band_raises_ambiguity() {
        let t = SkewTent::new(0.4, 0.9).unwrap();
        assert!(matches!(
            t.eval(&(0.4 + 1e-14)),
            Err(MapError::BreakpointAmbiguity { .. })
        ));
        assert!(t.step(&(0.4 + 1e-14)).unwrap().guard_hit);
        assert!(t.eval(&(0.4 + 1e-9)).is_ok());
    }

    #[test]
    fn exact_fixed_point_and_ordering() {
        let t = SkewTent::new(r(2, 5), r(9, 10)).unwrap();
        let p = t.fixed_point().unwrap();
        assert_eq!(t.step(&p).unwrap().point, p);
        t.check_ordering().unwrap();
    }
}
