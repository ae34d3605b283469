//! JSON form: `{"poly": [a_0, …], "coeffs": [["num", "den"], …]}` with decimal strings.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{AlgebraError, BetaField, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub poly: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub poly: Vec<String>,
    pub coeffs: Vec<[String; 2]>,
}

fn parse_int(s: &str) -> Result<BigInt, AlgebraError> {
    s.parse()
        .map_err(|_| AlgebraError::Malformed(format!("not an integer: {s:?}")))
}

impl BetaField {
    pub fn to_json(&self) -> FieldJson {
        FieldJson {
            poly: self.coeffs().iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn from_json(j: &FieldJson) -> Result<Arc<Self>, AlgebraError> {
        let coeffs = j.poly.iter().map(|s| parse_int(s)).collect::<Result<_, _>>()?;
        BetaField::from_big(coeffs)
    }
}

impl FieldElement {
    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            poly: self.field().to_json().poly,
            coeffs: self
                .coeffs()
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        }
    }

    /// Rebuilds the element, reusing `field` when its polynomial matches.
    pub fn from_json(j: &ElementJson, field: Option<&Arc<BetaField>>) -> Result<Self, AlgebraError> {
        let fj = FieldJson { poly: j.poly.clone() };
        let field = match field {
            Some(f) if f.to_json() == fj => f.clone(),
            Some(_) => return Err(AlgebraError::FieldMismatch),
            None => BetaField::from_json(&fj)?,
        };
        let coeffs = j
            .coeffs
            .iter()
            .map(|[n, d]| {
                let d = parse_int(d)?;
                if d == BigInt::from(0) {
                    return Err(AlgebraError::Malformed("zero denominator".into()));
                }
                Ok(BigRational::new(parse_int(n)?, d))
            })
            .collect::<Result<Vec<_>, _>>()?;
        field.element(&coeffs)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ElementJson::deserialize(d)?;
        FieldElement::from_json(&j, None).map_err(serde::de::Error::custom)
    }
}
