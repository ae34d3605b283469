//! Textual map specifications such as `genbeta:alpha=1/2,beta=multinacci(3)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{GenBeta, MapError, MapKind, MapParams, SkewTent};
use crate::algebra::{BetaField, FieldElement};
use crate::scalar::rational_to_f64;

/// A parameter `Σ q_j β^{k_j}` with rational `q_j` and integer `k_j`.
///
/// Written as `1/2`, `0.4`, `beta^-3`, `1/2 - 3*beta^-1`, or as a
/// coefficient list `[c_0; c_1; …]` meaning `Σ c_i β^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub terms: Vec<(BigRational, i64)>,
}

impl Param {
    pub fn rational(q: BigRational) -> Self {
        Param { terms: vec![(q, 0)] }
    }

    pub fn beta_pow(k: i64) -> Self {
        Param {
            terms: vec![(BigRational::one(), k)],
        }
    }

    /// The value when no power of β is involved.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.terms
            .iter()
            .try_fold(BigRational::zero(), |acc, (q, k)| (*k == 0).then(|| acc + q))
    }

    pub fn to_field(&self, field: &Arc<BetaField>) -> FieldElement {
        self.terms.iter().fold(field.zero(), |acc, (q, k)| {
            let term = if *k == 0 {
                field.from_rational(q)
            } else {
                &field.from_rational(q) * &field.beta_pow(*k)
            };
            &acc + &term
        })
    }

    pub fn to_rational(&self, beta: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (q, k)| {
            let p = if *k >= 0 {
                num_traits::pow(beta.clone(), *k as usize)
            } else {
                num_traits::pow(beta.recip(), k.unsigned_abs() as usize)
            };
            acc + q * p
        })
    }

    pub fn to_f64(&self, beta: f64) -> f64 {
        self.terms
            .iter()
            .map(|(q, k)| rational_to_f64(q) * beta.powi(*k as i32))
            .sum()
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (q, k)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let mag = q.abs();
            if i > 0 {
                f.write_str(if neg { "-" } else { "+" })?;
            } else if neg {
                f.write_str("-")?;
            }
            match (*k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "beta^{k}")?,
                (_, false) => write!(f, "{mag}*beta^{k}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Param {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, MapError> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let terms = inner
                .split(';')
                .enumerate()
                .map(|(i, c)| Ok((parse_rational(c)?, i as i64)))
                .collect::<Result<Vec<_>, MapError>>()?;
            return Ok(Param { terms });
        }
        let mut terms = Vec::new();
        for (neg, body) in split_signed(s)? {
            let (q, k) = parse_term(body)?;
            terms.push((if neg { -q } else { q }, k));
        }
        Ok(Param { terms })
    }
}

fn split_signed(s: &str) -> Result<Vec<(bool, &str)>, MapError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let mut i = 0;
    if let Some(&c) = bytes.first() {
        if c == b'-' || c == b'+' {
            neg = c == b'-';
            start = 1;
            i = 1;
        }
    }
    while i < bytes.len() {
        let c = bytes[i];
        let prev = if i > 0 { bytes[i - 1] } else { b' ' };
        let exponent_sign = prev == b'^' || ((prev == b'e' || prev == b'E') && i >= 2 && bytes[i - 2].is_ascii_digit());
        if (c == b'+' || c == b'-') && i > start && !exponent_sign {
            out.push((neg, s[start..i].trim()));
            neg = c == b'-';
            start = i + 1;
        }
        i += 1;
    }
    let last = s[start..].trim();
    if last.is_empty() {
        return Err(MapError::Parse(format!("empty term in {s:?}")));
    }
    out.push((neg, last));
    Ok(out)
}

fn parse_term(t: &str) -> Result<(BigRational, i64), MapError> {
    let t = t.trim();
    let (coef, power) = match t.find("beta").or_else(|| t.find('β')) {
        None => return Ok((parse_rational(t)?, 0)),
        Some(pos) => (t[..pos].trim().trim_end_matches('*').trim(), t[pos..].trim()),
    };
    let rest = power.trim_start_matches("beta").trim_start_matches('β');
    let k = if rest.is_empty() {
        1
    } else {
        let e = rest
            .strip_prefix('^')
            .ok_or_else(|| MapError::Parse(format!("bad power {power:?}")))?;
        e.trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .parse::<i64>()
            .map_err(|_| MapError::Parse(format!("bad exponent {e:?}")))?
    };
    let q = if coef.is_empty() {
        BigRational::one()
    } else {
        parse_rational(coef)?
    };
    Ok((q, k))
}

/// Parses `p/q`, integers and decimal literals (with optional exponent)
/// into exact rationals.
pub fn parse_rational(s: &str) -> Result<BigRational, MapError> {
    let s = s.trim();
    let err = || MapError::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all = format!("{int_part}{frac_part}");
    let n: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| err())?
    };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Slope of a map: a multinacci number, the dominant root of a Pisot-type
/// polynomial `β^N − Σ a_i β^i`, or a rational value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlopeSpec {
    Multinacci(usize),
    Pisot(Vec<i64>),
    Value(BigRational),
}

impl SlopeSpec {
    pub fn field(&self) -> Result<Option<Arc<BetaField>>, MapError> {
        Ok(match self {
            SlopeSpec::Multinacci(n) => Some(BetaField::multinacci(*n)?),
            SlopeSpec::Pisot(c) => Some(BetaField::pisot(c)?),
            SlopeSpec::Value(_) => None,
        })
    }
}

impl fmt::Display for SlopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeSpec::Multinacci(n) => write!(f, "multinacci({n})"),
            SlopeSpec::Pisot(c) => {
                let parts: Vec<String> = c.iter().map(i64::to_string).collect();
                write!(f, "pisot({})", parts.join(";"))
            }
            SlopeSpec::Value(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for SlopeSpec {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, MapError> {
        let s = s.trim();
        let call = |name: &str| {
            s.strip_prefix(name)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if let Some(n) = call("multinacci") {
            return n
                .trim()
                .parse()
                .map(SlopeSpec::Multinacci)
                .map_err(|_| MapError::Parse(format!("bad multinacci order {n:?}")));
        }
        if let Some(list) = call("pisot") {
            return list
                .split(';')
                .map(|c| c.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map(SlopeSpec::Pisot)
                .map_err(|_| MapError::Parse(format!("bad polynomial {list:?}")));
        }
        parse_rational(s).map(SlopeSpec::Value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpec {
    pub kind: MapKind,
    pub alpha: Param,
    pub beta: SlopeSpec,
}

/// An exactly represented map: rational parameters or parameters in ℚ(β).
#[derive(Debug, Clone, PartialEq)]
pub enum ExactMap {
    Rational(MapParams<BigRational>),
    Field(MapParams<FieldElement>),
}

impl MapSpec {
    fn build<S: crate::scalar::Scalar>(&self, alpha: S, beta: S) -> Result<MapParams<S>, MapError> {
        Ok(match self.kind {
            MapKind::SkewTent => MapParams::SkewTent(SkewTent::new(alpha, beta)?),
            MapKind::GenBeta => MapParams::GenBeta(GenBeta::new(alpha, beta)?),
        })
    }

    pub fn to_float(&self) -> Result<MapParams<f64>, MapError> {
        let beta = match &self.beta {
            SlopeSpec::Value(q) => rational_to_f64(q),
            other => other.field()?.expect("algebraic slope").beta_f64(),
        };
        self.build(self.alpha.to_f64(beta), beta)
    }

    pub fn to_exact(&self) -> Result<ExactMap, MapError> {
        match &self.beta {
            SlopeSpec::Value(q) => Ok(ExactMap::Rational(self.build(self.alpha.to_rational(q), q.clone())?)),
            other => {
                let field = other.field()?.expect("algebraic slope");
                Ok(ExactMap::Field(
                    self.build(self.alpha.to_field(&field), field.generator())?,
                ))
            }
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            MapKind::SkewTent => "skewtent",
            MapKind::GenBeta => "genbeta",
        };
        write!(f, "{kind}:alpha={},beta={}", self.alpha, self.beta)
    }
}

impl FromStr for MapSpec {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, MapError> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| MapError::Parse(format!("missing family prefix in {s:?}")))?;
        let kind = match kind.trim().to_ascii_lowercase().as_str() {
            "skewtent" | "tent" => MapKind::SkewTent,
            "genbeta" | "beta" => MapKind::GenBeta,
            other => return Err(MapError::Parse(format!("unknown family {other:?}"))),
        };
        let mut alpha = None;
        let mut beta = None;
        for kv in rest.split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| MapError::Parse(format!("expected key=value, got {kv:?}")))?;
            match k.trim() {
                "alpha" | "α" => alpha = Some(v.parse()?),
                "beta" | "β" => beta = Some(v.parse()?),
                other => return Err(MapError::Parse(format!("unknown key {other:?}"))),
            }
        }
        Ok(MapSpec {
            kind,
            alpha: alpha.ok_or_else(|| MapError::Parse("missing alpha".into()))?,
            beta: beta.ok_or_else(|| MapError::Parse("missing beta".into()))?,
        })
    }
}
