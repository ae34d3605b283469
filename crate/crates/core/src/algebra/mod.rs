//! Exact arithmetic in ℚ(β) for a dominant real root β of an integer polynomial.

mod element;
mod field;
mod json;
mod pisot;
pub(crate) mod poly;

pub use element::FieldElement;
pub use field::{BetaField, DEFAULT_PRECISION_CAP_BITS};
pub use json::{ElementJson, FieldJson};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomial degree must be at least 2, got {0}")]
    InvalidDegree(usize),
    #[error("polynomial has no real root greater than 1")]
    NoDominantRoot,
    #[error("dominant root is not simple")]
    RepeatedRoot,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible (defining polynomial is reducible)")]
    NotInvertible,
    #[error("precision exhausted: enclosure reached the {0}-bit cap")]
    PrecisionExhausted(u32),
    #[error("value is not finite")]
    NotFinite,
    #[error("integer overflow")]
    Overflow,
    #[error("coefficient vector of length {got} does not fit degree {degree}")]
    BadLength { got: usize, degree: usize },
    #[error("malformed field description: {0}")]
    Malformed(String),
}
