use std::cmp::Ordering;

use serde::Serialize;

use super::{OrbitError, XiCurve};
use crate::maps::{Branch, GenBeta, MapKind, MapParams, Side, SkewTent};
use crate::scalar::Scalar;

/// Maximal parameter interval around the current parameter on which the
/// critical itinerary up to iterate `n − 1` is constant.
#[derive(Debug, Clone)]
pub struct ParamWindow<S> {
    pub n: usize,
    pub lo: S,
    pub hi: S,
    /// Last iterate `r < n` with `ξ_r(lo)` on the breakpoint; `None` at a domain edge.
    pub r_lo: Option<usize>,
    pub r_hi: Option<usize>,
    /// Branch words of `ξ_1, …, ξ_{n−1}` on the window.
    pub itinerary: Vec<Branch>,
    /// The current parameter is itself a window endpoint.
    pub bound_parameter: bool,
    /// Float guard-band hits along the critical orbit at the current parameter.
    pub guard_hits: usize,
    base: MapParams<S>,
    /// `ξ_j = A_j t + B_j` on the window, `j = 0..=n` (β-transformations only).
    affine: Vec<(S, S)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointResiduals<S> {
    pub lower: Option<S>,
    pub upper: Option<S>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowSummary {
    pub kind: MapKind,
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
    pub r_lo: Option<usize>,
    pub r_hi: Option<usize>,
    pub itinerary: String,
    pub bound_parameter: bool,
    pub guard_hits: usize,
}

pub fn param_window<S: Scalar>(m: &MapParams<S>, n: usize) -> Result<ParamWindow<S>, OrbitError> {
    if n < 4 {
        return Err(OrbitError::InvalidArgument(format!("window needs n ≥ 4, got {n}")));
    }
    match m {
        MapParams::GenBeta(g) => genbeta_window(g, n),
        MapParams::SkewTent(t) => tent_window(t, n),
    }
}

impl<S: Scalar> ParamWindow<S> {
    pub fn kind(&self) -> MapKind {
        self.base.kind()
    }

    pub fn base(&self) -> &MapParams<S> {
        &self.base
    }

    pub fn width(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn curve(&self) -> XiCurve<S> {
        XiCurve::new(self.base.clone(), self.n)
    }

    pub fn summary(&self) -> WindowSummary {
        WindowSummary {
            kind: self.kind(),
            n: self.n,
            lo: self.lo.as_f64(),
            hi: self.hi.as_f64(),
            width: self.width().as_f64(),
            r_lo: self.r_lo,
            r_hi: self.r_hi,
            itinerary: self
                .itinerary
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            bound_parameter: self.bound_parameter,
            guard_hits: self.guard_hits,
        }
    }

    /// The monotone map from the window onto `[0, 1]`; 0 at `lo`, 1 at `hi`.
    pub fn quotient(&self, t: &S) -> Result<S, OrbitError> {
        let (Some(rl), Some(rh)) = (self.r_lo, self.r_hi) else {
            return Err(OrbitError::InvalidArgument("window touches the domain edge".into()));
        };
        match &self.base {
            MapParams::GenBeta(g) => {
                let beta = g.beta();
                let xi = |j: usize| self.affine[j].0.clone() * t.clone() + self.affine[j].1.clone();
                let a = beta.powi_like((self.n - rl) as u32) * xi(rl);
                let b = beta.powi_like((self.n - rh) as u32) * (t.one_like() - xi(rh));
                Ok(a.clone() / (a + b))
            }
            MapParams::SkewTent(_) => {
                let c = self.curve();
                let orbit = c.orbit_at(t, self.n, Side::Right)?;
                let at = |j: usize| orbit[j].0.clone();
                let num = at(self.n) - at(self.n - rl);
                let den = at(self.n - rh) - at(self.n - rl);
                Ok(num / den)
            }
        }
    }

    /// `ξ_n − ξ_{n−r}` at both endpoints. For β-transformations the upper
    /// identity uses the left-continuous orbit, `ξ_n(hi⁻) − G_−^{n−r}(1)`.
    pub fn endpoint_residuals(&self) -> Result<EndpointResiduals<S>, OrbitError> {
        let c = self.curve();
        let lower = match self.r_lo {
            Some(r) => {
                let o = c.orbit_at(&self.lo, self.n, Side::Right)?;
                Some(o[self.n].0.clone() - o[self.n - r].0.clone())
            }
            None => None,
        };
        let upper = match (self.r_hi, &self.base) {
            (None, _) => None,
            (Some(r), MapParams::SkewTent(_)) => {
                let o = c.orbit_at(&self.hi, self.n, Side::Right)?;
                Some(o[self.n].0.clone() - o[self.n - r].0.clone())
            }
            (Some(r), MapParams::GenBeta(g)) => {
                if self.hi.cmp_value(&self.hi.one_like())? != Ordering::Less {
                    None
                } else {
                    let o = c.orbit_at(&self.hi, self.n, Side::Left)?;
                    let map = MapParams::GenBeta(g.with_alpha(self.hi.clone())?);
                    let top = map.orbit_sided(&self.hi.one_like(), self.n - r, Side::Left)?;
                    Some(o[self.n].0.clone() - top.last().unwrap().point.clone())
                }
            }
        };
        Ok(EndpointResiduals { lower, upper })
    }

    /// Slope of the lift `βξ_{n−1} + t` between the endpoints, from the
    /// right orbit at `lo` and the left orbit at `hi`. Equals
    /// `(β^n − 1)/(β − 1)` on a genuine window.
    pub fn lift_slope(&self) -> Result<Option<S>, OrbitError> {
        let MapParams::GenBeta(g) = &self.base else {
            return Ok(None);
        };
        if self.hi.cmp_value(&self.hi.one_like())? != Ordering::Less {
            return Ok(None);
        }
        let c = self.curve();
        let lift = |t: &S, side| -> Result<S, OrbitError> {
            let o = c.orbit_at(t, self.n - 1, side)?;
            Ok(g.beta().clone() * o[self.n - 1].0.clone() + t.clone())
        };
        let rise = lift(&self.hi, Side::Left)? - lift(&self.lo, Side::Right)?;
        Ok(Some(rise / self.width()))
    }

    /// Affine coefficients `(A_j, B_j)` of `ξ_j` on the window.
    pub fn affine(&self) -> &[(S, S)] {
        &self.affine
    }
}

fn genbeta_window<S: Scalar>(g: &GenBeta<S>, n: usize) -> Result<ParamWindow<S>, OrbitError> {
    let base = MapParams::GenBeta(g.clone());
    let a0 = g.alpha().clone();
    let curve = XiCurve::new(base.clone(), n);
    let orbit = curve.orbit_at(&a0, n, Side::Right)?;
    let guard_hits = base.orbit(&a0.zero_like(), n)?.iter().filter(|p| p.guard_hit).count();
    // the right window starts at α0 when some ξ_j(α0) = 0
    let mut bound = false;
    for (x, _) in &orbit[1..n] {
        if x.is_zero_value()? {
            bound = true;
        }
    }
    let side = if bound && !a0.is_zero_value()? {
        Side::Left
    } else {
        Side::Right
    };
    let orbit = if side == Side::Left {
        curve.orbit_at(&a0, n, Side::Left)?
    } else {
        orbit
    };

    let beta = g.beta().clone();
    let one = a0.one_like();
    let mut affine = vec![(a0.zero_like(), a0.zero_like()), (one.clone(), a0.zero_like())];
    let mut itinerary = Vec::with_capacity(n - 1);
    let mut lo: Option<(S, usize)> = None;
    let mut hi: Option<(S, usize)> = None;
    for j in 1..n {
        let (a, b) = affine[j].clone();
        let lower = -b.clone() / a.clone();
        let upper = (one.clone() - b.clone()) / a.clone();
        if lo
            .as_ref()
            .map_or(true, |(v, _)| lower.cmp_value(v) == Ok(Ordering::Greater))
        {
            lo = Some((lower, j));
        }
        if hi
            .as_ref()
            .map_or(true, |(v, _)| upper.cmp_value(v) == Ok(Ordering::Less))
        {
            hi = Some((upper, j));
        }
        let branch = orbit[j + 1].1.unwrap();
        let Branch::Lap(k) = branch else { unreachable!() };
        itinerary.push(branch);
        affine.push((beta.clone() * a + one.clone(), beta.clone() * b - a0.from_i64_like(k)));
    }
    let (lo, r_lo) = lo.unwrap();
    let (hi, r_hi) = hi.unwrap();
    Ok(ParamWindow {
        n,
        lo,
        hi,
        r_lo: Some(r_lo),
        r_hi: Some(r_hi),
        itinerary,
        bound_parameter: bound,
        guard_hits,
        base,
        affine,
    })
}

/// Side of `ξ_j` relative to the turning point, `j = 1..n−1`.
fn tent_word<S: Scalar>(curve: &XiCurve<S>, t: &S) -> Result<Vec<Branch>, OrbitError> {
    let map = curve.map_at(t)?;
    let alpha = map.alpha().clone();
    let orbit = curve.orbit_at(t, curve.n() - 1, Side::Right)?;
    orbit[1..]
        .iter()
        .map(|(x, _)| {
            Ok(match x.cmp_value(&alpha)? {
                Ordering::Less => Branch::L,
                Ordering::Greater => Branch::R,
                Ordering::Equal => Branch::C,
            })
        })
        .collect()
}

fn last_difference(a: &[Branch], b: &[Branch]) -> Option<usize> {
    a.iter().zip(b).rposition(|(x, y)| x != y).map(|i| i + 1)
}

struct Search<'a, S> {
    curve: &'a XiCurve<S>,
    reference: Vec<Branch>,
    /// Excluded lower domain edge and included upper edge.
    floor: S,
    ceil: S,
}

impl<S: Scalar> Search<'_, S> {
    fn same(&self, t: &S) -> Result<bool, OrbitError> {
        Ok(tent_word(self.curve, t)? == self.reference)
    }

    /// Expands from `start` in direction `dir` (±1), then bisects. Returns the
    /// endpoint and the first iterate whose side changes there.
    fn run(&self, start: &S, dir: i64) -> Result<(S, Option<usize>), OrbitError> {
        let two = start.from_i64_like(2);
        let mut h = start.from_f64_like(1e-6);
        let mut good = start.clone();
        let bad = loop {
            let t = start.clone() + start.from_i64_like(dir) * h.clone();
            let at_edge = if dir > 0 {
                t.cmp_value(&self.ceil)? != Ordering::Less
            } else {
                t.cmp_value(&self.floor)? != Ordering::Greater
            };
            if at_edge {
                if dir > 0 && self.same(&self.ceil)? {
                    return Ok((self.ceil.clone(), None));
                }
                break if dir > 0 { self.ceil.clone() } else { self.floor.clone() };
            }
            if !self.same(&t)? {
                break t;
            }
            good = t;
            h = h * two.clone();
        };
        let mut bad = bad;
        let edge_bad = dir < 0 && bad == self.floor;
        loop {
            let gap = (bad.clone() - good.clone()).abs_value()?;
            let tol = if S::EXACT {
                let scale = (good.clone() - start.clone()).abs_value()?.as_f64().max(gap.as_f64());
                (scale * 2f64.powi(-40)).max(2f64.powi(-200))
            } else {
                1e-14
            };
            if gap.as_f64() < tol {
                break;
            }
            let mid = (good.clone() + bad.clone()) / two.clone();
            if self.same(&mid)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
        if edge_bad && bad == self.floor {
            // the itinerary survives down to the excluded domain edge
            return Ok((self.floor.clone(), None));
        }
        let r = last_difference(&tent_word(self.curve, &bad)?, &self.reference);
        Ok((good, r))
    }
}

fn tent_window<S: Scalar>(t: &SkewTent<S>, n: usize) -> Result<ParamWindow<S>, OrbitError> {
    let base = MapParams::SkewTent(t.clone());
    let curve = XiCurve::new(base.clone(), n);
    let b0 = t.beta().clone();
    let alpha = t.alpha().clone();
    let one = alpha.one_like();
    let co = one.clone() - alpha.clone();
    let floor = if alpha.cmp_value(&co)? == Ordering::Greater {
        alpha.clone()
    } else {
        co
    };
    let guard_hits = base.orbit(&alpha, n)?.iter().filter(|p| p.guard_hit).count();
    let word0 = tent_word(&curve, &b0)?;
    let bound = word0.contains(&Branch::C);

    let (reference, lo, r_lo, hi, r_hi) = if bound {
        // the left window ends at the current parameter
        let r_hi = word0.iter().rposition(|b| *b == Branch::C).map(|i| i + 1);
        let two = b0.from_i64_like(2);
        let mut h = b0.from_f64_like(1e-6);
        let room = b0.clone() - floor.clone();
        while h.cmp_value(&room)? != Ordering::Less {
            h = h / two.clone();
        }
        let reference = loop {
            let w1 = tent_word(&curve, &(b0.clone() - h.clone()))?;
            let w2 = tent_word(&curve, &(b0.clone() - h.clone() / two.clone()))?;
            if w1 == w2 && !w1.contains(&Branch::C) {
                break w1;
            }
            h = h / two.clone();
            if h.as_f64() < 1e-300 {
                return Err(OrbitError::WindowUnderflow { width: 0.0, guard_hits });
            }
        };
        let s = Search {
            curve: &curve,
            reference: reference.clone(),
            floor: floor.clone(),
            ceil: one.clone(),
        };
        let (lo, r_lo) = s.run(&(b0.clone() - h / two), -1)?;
        (reference, lo, r_lo, b0.clone(), r_hi)
    } else {
        let s = Search {
            curve: &curve,
            reference: word0.clone(),
            floor: floor.clone(),
            ceil: one.clone(),
        };
        let (hi, r_hi) = s.run(&b0, 1)?;
        let (lo, r_lo) = s.run(&b0, -1)?;
        (word0, lo, r_lo, hi, r_hi)
    };
    let width = (hi.clone() - lo.clone()).as_f64();
    if !S::EXACT && width < 4e-14 {
        return Err(OrbitError::WindowUnderflow { width, guard_hits });
    }
    Ok(ParamWindow {
        n,
        lo,
        hi,
        r_lo,
        r_hi,
        itinerary: reference,
        bound_parameter: bound,
        guard_hits,
        base,
        affine: Vec::new(),
    })
}
