//! Critical orbits as functions of a parameter.

mod attractor;
mod density;
mod kneading;
mod qseq;
mod window;
mod xi;

use thiserror::Error;

pub use attractor::{attractor, attractor_with_seed, IntervalCycle, DEFAULT_SEED_WIDTH};
pub use density::{density_profile, DensityProfile};
pub use kneading::{closest_approach_times, cutting_times, CuttingTimes};
pub use qseq::{distortion, fitted_rate, q_sequence, QSequenceReport};
pub use window::{param_window, EndpointResiduals, ParamWindow, WindowSummary};
pub use xi::{genbeta_xi_slope, XiCurve};

use crate::algebra::AlgebraError;
use crate::maps::MapError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("bound orbit: the critical orbit returns to the turning point at step {step} (one-sided derivatives {left_derivative}, {right_derivative})")]
    BoundOrbit {
        step: usize,
        left_derivative: f64,
        right_derivative: f64,
    },
    #[error("window underflow: width {width} is below the resolution ({guard_hits} guard-band hits)")]
    WindowUnderflow { width: f64, guard_hits: usize },
    #[error("fragmentation: more than {cap} components")]
    Fragmentation { cap: usize },
    #[error("no stabilization after {0} iterations")]
    NotConverged(usize),
    #[error("endpoint {endpoint} is {distance} away from the critical orbits")]
    EndpointMismatch { endpoint: f64, distance: f64 },
}

impl From<AlgebraError> for OrbitError {
    fn from(e: AlgebraError) -> Self {
        OrbitError::Map(MapError::Algebra(e))
    }
}
