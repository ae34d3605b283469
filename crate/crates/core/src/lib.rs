//! Piecewise-linear interval and circle maps, exact arithmetic in Pisot
//! number fields, and matching of critical orbits.

pub mod algebra;
pub mod harness;
pub mod maps;
pub mod matching;
pub mod orbits;
pub mod scalar;

pub use algebra::{AlgebraError, BetaField, FieldElement};
pub use maps::{GenBeta, MapError, MapParams, SkewTent};
pub use scalar::Scalar;

pub type FloatMap = MapParams<f64>;
pub type RationalMap = MapParams<num_rational::BigRational>;
pub type FieldMap = MapParams<FieldElement>;
pub type SkewTentF64 = SkewTent<f64>;
pub type GenBetaF64 = GenBeta<f64>;
pub type GenBetaExact = GenBeta<FieldElement>;
