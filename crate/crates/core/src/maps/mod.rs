//! The two map families: skew tent maps and generalised β-transformations.

mod gen_beta;
mod skew_tent;
mod spec;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gen_beta::{GenBeta, StripInequalities};
pub use skew_tent::SkewTent;
pub use spec::{parse_rational, ExactMap, MapSpec, Param, SlopeSpec};

use crate::algebra::AlgebraError;
use crate::scalar::Scalar;

/// Default width of the float guard band around breakpoints.
pub const DEFAULT_GUARD_BAND: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("point {0} lies outside [0, 1]")]
    OutOfDomain(f64),
    #[error("breakpoint ambiguity: x = {x} is within the guard band of breakpoint {breakpoint}")]
    BreakpointAmbiguity { x: f64, breakpoint: f64 },
    #[error("no fixed point: {0}")]
    NoFixedPoint(String),
    #[error("fixed point check failed: residual {0}")]
    FixedPointCheck(f64),
    #[error("the involution is undefined at the turning point")]
    AtTurningPoint,
    #[error("ordering assertion violated: {0}")]
    OrderingViolated(String),
    #[error("cannot parse map specification: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapKind {
    SkewTent,
    GenBeta,
}

/// Which one-sided limit to take at a discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Side {
    /// Right-continuous: values in `[0, 1)`.
    #[default]
    Right,
    /// Left-continuous: values in `(0, 1]`.
    Left,
}

/// Branch taken by one application of a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    L,
    R,
    /// Exactly at the turning point of a tent map.
    C,
    /// Lap index `k` in `βx + α − k`.
    Lap(i64),
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::L => f.write_str("L"),
            Branch::R => f.write_str("R"),
            Branch::C => f.write_str("C"),
            Branch::Lap(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step<S> {
    pub point: S,
    pub branch: Branch,
    /// Float input closer than the guard band to a breakpoint.
    pub guard_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitPoint<S> {
    pub point: S,
    pub branch: Option<Branch>,
    pub guard_hit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapGeometry<S> {
    pub breakpoints: Vec<S>,
    pub fixed_point: Option<S>,
    /// Named auxiliary points: `p_hat`, `c1`, `c2`.
    pub secondary: Vec<(&'static str, S)>,
}

/// A member of one of the two families.
#[derive(Debug, Clone, PartialEq)]
pub enum MapParams<S> {
    SkewTent(SkewTent<S>),
    GenBeta(GenBeta<S>),
}

impl<S: Scalar> MapParams<S> {
    pub fn kind(&self) -> MapKind {
        match self {
            MapParams::SkewTent(_) => MapKind::SkewTent,
            MapParams::GenBeta(_) => MapKind::GenBeta,
        }
    }

    pub fn alpha(&self) -> &S {
        match self {
            MapParams::SkewTent(m) => m.alpha(),
            MapParams::GenBeta(m) => m.alpha(),
        }
    }

    pub fn beta(&self) -> &S {
        match self {
            MapParams::SkewTent(m) => m.beta(),
            MapParams::GenBeta(m) => m.beta(),
        }
    }

    pub fn guard(&self) -> f64 {
        match self {
            MapParams::SkewTent(m) => m.guard(),
            MapParams::GenBeta(m) => m.guard(),
        }
    }

    pub fn with_guard(self, g: f64) -> Self {
        match self {
            MapParams::SkewTent(m) => MapParams::SkewTent(m.with_guard(g)),
            MapParams::GenBeta(m) => MapParams::GenBeta(m.with_guard(g)),
        }
    }

    /// One step without domain or guard checks. Tent maps ignore `side`.
    pub fn step(&self, x: &S, side: Side) -> Result<Step<S>, MapError> {
        match self {
            MapParams::SkewTent(m) => m.step(x),
            MapParams::GenBeta(m) => m.step(x, side),
        }
    }

    /// Checked evaluation: rejects points outside `[0, 1]` and float points
    /// inside the guard band.
    pub fn eval(&self, x: &S) -> Result<(S, Branch), MapError> {
        match self {
            MapParams::SkewTent(m) => m.eval(x),
            MapParams::GenBeta(m) => m.eval(x),
        }
    }

    /// `x_0, …, x_n` with the branch used to reach each point. Guard-band
    /// proximity is recorded rather than raised.
    pub fn orbit(&self, x0: &S, n: usize) -> Result<Vec<OrbitPoint<S>>, MapError> {
        self.orbit_sided(x0, n, Side::Right)
    }

    pub fn orbit_sided(&self, x0: &S, n: usize, side: Side) -> Result<Vec<OrbitPoint<S>>, MapError> {
        check_unit(x0)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(OrbitPoint {
            point: x0.clone(),
            branch: None,
            guard_hit: false,
        });
        let mut x = x0.clone();
        for _ in 0..n {
            let s = self.step(&x, side)?;
            x = s.point.clone();
            out.push(OrbitPoint {
                point: s.point,
                branch: Some(s.branch),
                guard_hit: s.guard_hit,
            });
        }
        Ok(out)
    }

    pub fn fixed_point(&self) -> Result<S, MapError> {
        match self {
            MapParams::SkewTent(m) => m.fixed_point(),
            MapParams::GenBeta(m) => m.fixed_point(),
        }
    }

    pub fn geometry(&self) -> Result<MapGeometry<S>, MapError> {
        match self {
            MapParams::SkewTent(m) => m.geometry(),
            MapParams::GenBeta(m) => m.geometry(),
        }
    }

    /// Smallest slope modulus.
    pub fn expansion(&self) -> S {
        match self {
            MapParams::SkewTent(m) => {
                let (l, r) = (m.slope_left(), m.slope_right());
                if l.as_f64() <= r.as_f64() {
                    l
                } else {
                    r
                }
            }
            MapParams::GenBeta(m) => m.beta().clone(),
        }
    }
}

pub(crate) fn check_unit<S: Scalar>(x: &S) -> Result<(), MapError> {
    let below = x.certified_sign()? == std::cmp::Ordering::Less;
    let above = x.cmp_value(&x.one_like())? == std::cmp::Ordering::Greater;
    if below || above {
        Err(MapError::OutOfDomain(x.as_f64()))
    } else {
        Ok(())
    }
}

pub(crate) fn lt<S: Scalar>(a: &S, b: &S) -> Result<bool, MapError> {
    Ok(a.cmp_value(b)? == std::cmp::Ordering::Less)
}
