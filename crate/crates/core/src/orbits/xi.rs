use super::OrbitError;
use crate::maps::{Branch, GenBeta, MapParams, Side, SkewTent};
use crate::scalar::Scalar;

/// `ξ_n` as a function of the varied parameter: the peak `β` for skew tents
/// (`ξ_n(β) = T^n(α)`), the shift `α` for β-transformations
/// (`ξ_n(α) = G^n(0)`).
#[derive(Debug, Clone)]
pub struct XiCurve<S> {
    base: MapParams<S>,
    n: usize,
}

impl<S: Scalar> XiCurve<S> {
    pub fn new(base: MapParams<S>, n: usize) -> Self {
        XiCurve { base, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &MapParams<S> {
        &self.base
    }

    /// Current value of the varied parameter.
    pub fn parameter(&self) -> &S {
        match &self.base {
            MapParams::SkewTent(m) => m.beta(),
            MapParams::GenBeta(m) => m.alpha(),
        }
    }

    pub fn map_at(&self, t: &S) -> Result<MapParams<S>, OrbitError> {
        Ok(match &self.base {
            MapParams::SkewTent(m) => {
                MapParams::SkewTent(SkewTent::new(m.alpha().clone(), t.clone())?.with_guard(m.guard()))
            }
            MapParams::GenBeta(m) => {
                MapParams::GenBeta(GenBeta::new(t.clone(), m.beta().clone())?.with_guard(m.guard()))
            }
        })
    }

    /// Starting point of the critical orbit.
    pub fn critical_point(map: &MapParams<S>) -> S {
        match map {
            MapParams::SkewTent(m) => m.alpha().clone(),
            MapParams::GenBeta(m) => m.alpha().zero_like(),
        }
    }

    /// `(ξ_j, branch used to reach ξ_j)` for `j = 0..=len`.
    ///
    /// `Side::Left` gives the limit as the parameter increases to `t`.
    pub fn orbit_at(&self, t: &S, len: usize, side: Side) -> Result<Vec<(S, Option<Branch>)>, OrbitError> {
        let map = self.map_at(t)?;
        let mut x = Self::critical_point(&map);
        let mut out = Vec::with_capacity(len + 1);
        out.push((x.clone(), None));
        for j in 0..len {
            // G(0) = α from either side of the parameter
            let s = if j == 0 { Side::Right } else { side };
            let st = map.step(&x, s)?;
            x = st.point;
            out.push((x.clone(), Some(st.branch)));
        }
        Ok(out)
    }

    pub fn eval(&self, t: &S) -> Result<S, OrbitError> {
        self.eval_sided(t, Side::Right)
    }

    pub fn eval_sided(&self, t: &S, side: Side) -> Result<S, OrbitError> {
        Ok(self.orbit_at(t, self.n, side)?.pop().unwrap().0)
    }

    /// Branches used for `ξ_1, …, ξ_len`.
    pub fn itinerary(&self, t: &S, len: usize, side: Side) -> Result<Vec<Branch>, OrbitError> {
        Ok(self
            .orbit_at(t, len, side)?
            .into_iter()
            .skip(1)
            .map(|(_, b)| b.unwrap())
            .collect())
    }

    /// `ξ'_n(t)` by the chain rule; tent orbits through the turning point
    /// use the left branch.
    pub fn derivative(&self, t: &S) -> Result<S, OrbitError> {
        let map = self.map_at(t)?;
        let mut x = Self::critical_point(&map);
        let mut d = t.zero_like();
        for _ in 0..self.n {
            d = match &map {
                MapParams::SkewTent(m) => m.dx(&x)? * d + m.dbeta(&x)?,
                MapParams::GenBeta(m) => m.beta().clone() * d + t.one_like(),
            };
            x = map.step(&x, Side::Right)?.point;
        }
        Ok(d)
    }
}

/// `(β^n − 1)/(β − 1)`.
pub fn genbeta_xi_slope<S: Scalar>(beta: &S, n: usize) -> S {
    let one = beta.one_like();
    (beta.powi_like(n as u32) - one.clone()) / (beta.clone() - one)
}
