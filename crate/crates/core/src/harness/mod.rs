//! Parameter sweeps and their output.

mod config;
mod output;
mod sweep;

use thiserror::Error;

pub use config::{parse_start, parse_starts, OutputFormat, Sampling, SweepConfig, SweepKind, SweepMode};
pub use output::{records_to_string, two_column_csv, write_records};
pub use sweep::{
    grid_points, point_config, sweep_density, sweep_field, sweep_matching, DensityRecord, GridPoint, SweepRecord,
};

use crate::algebra::AlgebraError;
use crate::maps::MapError;
use crate::matching::MatchingError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<AlgebraError> for HarnessError {
    fn from(e: AlgebraError) -> Self {
        HarnessError::Map(MapError::Algebra(e))
    }
}
