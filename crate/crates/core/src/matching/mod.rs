//! Matching of the orbits of `0` and `1` under `x ↦ βx + α mod 1` for
//! multinacci slopes, tracked through the digit automaton.

mod engine;
mod evector;
mod flowchart;
mod regime;

use thiserror::Error;

pub use engine::{
    matching_index, two_branch_matching, AlphaValue, MatchingConfig, MatchingResult, Mode, Outcome, Start, TraceStep,
    TwoBranch, AUTOMATON_TOLERANCE, DEFAULT_CAP,
};
pub use evector::{inverse_powers_f64, parse_digits, EVectorState, Update};
pub use flowchart::{flowchart_check, FlowchartReport, OffGraph};
pub use regime::{regime_classify, regime_thresholds, Regime};

use crate::algebra::AlgebraError;
use crate::maps::MapError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchingError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("the digit automaton needs a multinacci field")]
    NotMultinacci,
    #[error("cannot step a matched state")]
    SteppingMatched,
    #[error("automaton inconsistency at step {step}: σ(k0 − k1) = {j}, e_1 = {e1}")]
    Inconsistent { step: usize, j: i64, e1: i64 },
    #[error("orbit difference disagrees with the digit vector at step {step}")]
    AutomatonMismatch { step: usize },
    #[error("outside the regime: {0}")]
    OutsideRegion(String),
    #[error("invalid start: {0}")]
    InvalidStart(String),
    #[error("state {code} at step {n} is not in the flowchart alphabet")]
    OutsideAlphabet { n: usize, code: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<AlgebraError> for MatchingError {
    fn from(e: AlgebraError) -> Self {
        MatchingError::Map(MapError::Algebra(e))
    }
}
