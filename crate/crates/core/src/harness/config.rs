//! Flat `key = value` sweep configuration.
//!
//! ```text
//! # tetrabonacci matching sweep
//! kind = matching
//! field = multinacci(4)
//! alpha_lo = beta^-3
//! alpha_hi = beta^-1
//! grid = 100
//! sampling = grid
//! starts = zero-one; near-fixed(1/100, 0110)
//! cap = 100000
//! mode = exact
//! guard_band = 1e-12
//! seed = 0
//! format = csv
//! ```
//!
//! Density sweeps use `kind = density` together with `steps` and `eps`.
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use num_rational::BigRational;

use super::HarnessError;
use crate::maps::{parse_rational, Param, SlopeSpec, DEFAULT_GUARD_BAND};
use crate::matching::{parse_digits, Start, DEFAULT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exact,
    Float,
    Both,
}

impl FromStr for SweepMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.trim() {
            "exact" => Ok(SweepMode::Exact),
            "float" => Ok(SweepMode::Float),
            "both" => Ok(SweepMode::Both),
            other => Err(HarnessError::Config(format!("unknown mode {other:?}"))),
        }
    }
}

impl SweepMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepMode::Exact => "exact",
            SweepMode::Float => "float",
            SweepMode::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// `lo + j (hi − lo)/(g − 1)`.
    Grid,
    /// Seeded uniform samples with 32-bit dyadic offsets, sorted.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    /// One JSON object per line.
    Json,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" | "jsonl" => Ok(OutputFormat::Json),
            other => Err(HarnessError::Config(format!("unknown format {other:?}"))),
        }
    }
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepKind {
    Matching,
    /// Orbit of 0 for `steps` iterates, cells of width `eps`.
    Density {
        steps: usize,
        eps: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub field: SlopeSpec,
    pub alpha_lo: Param,
    pub alpha_hi: Param,
    pub grid: usize,
    pub sampling: Sampling,
    pub starts: Vec<Start>,
    pub cap: usize,
    pub mode: SweepMode,
    pub guard_band: f64,
    pub precision_cap_bits: Option<u32>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepConfig {
    /// A matching sweep over `[lo, hi]` with defaults elsewhere.
    pub fn matching(field: SlopeSpec, alpha_lo: Param, alpha_hi: Param, grid: usize) -> Self {
        SweepConfig {
            kind: SweepKind::Matching,
            field,
            alpha_lo,
            alpha_hi,
            grid,
            sampling: Sampling::Grid,
            starts: vec![Start::ZeroOne],
            cap: DEFAULT_CAP,
            mode: SweepMode::Exact,
            guard_band: DEFAULT_GUARD_BAND,
            precision_cap_bits: None,
            seed: 0,
            output: None,
            format: OutputFormat::Csv,
        }
    }

    /// The tetrabonacci campaign: 100 grid points on `[β^-3, β^-1]`, the
    /// true initial pair and three near-fixed-point starts with `ε = 0.01`.
    pub fn tetrabonacci_campaign() -> Self {
        let eps = BigRational::new(1.into(), 100.into());
        let near = |d: &str| Start::NearFixedPoint {
            eps: eps.clone(),
            digits: parse_digits(d, 4).expect("valid digits"),
        };
        SweepConfig {
            starts: vec![Start::ZeroOne, near("0110"), near("0101"), near("0111")],
            ..SweepConfig::matching(SlopeSpec::Multinacci(4), Param::beta_pow(-3), Param::beta_pow(-1), 100)
        }
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut kind = None;
        let mut field = None;
        let mut lo = None;
        let mut hi = None;
        let mut grid = None;
        let mut steps = None;
        let mut eps = None;
        let mut cfg = SweepConfig::matching(SlopeSpec::Multinacci(2), Param::beta_pow(0), Param::beta_pow(0), 1);
        let mut starts = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |e: HarnessError| HarnessError::Config(format!("line {}: {e}", i + 1));
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| at(HarnessError::Config(format!("expected key = value, got {line:?}"))))?;
            let v = v.trim();
            let int = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| at(HarnessError::Config(format!("bad integer {v:?}"))))
            };
            match k.trim() {
                "kind" => kind = Some(v.to_string()),
                "field" => field = Some(v.parse::<SlopeSpec>().map_err(|e| at(e.into()))?),
                "alpha_lo" => lo = Some(v.parse::<Param>().map_err(|e| at(e.into()))?),
                "alpha_hi" => hi = Some(v.parse::<Param>().map_err(|e| at(e.into()))?),
                "grid" => grid = Some(int(v)? as usize),
                "sampling" => {
                    cfg.sampling = match v {
                        "grid" => Sampling::Grid,
                        "random" => Sampling::Random,
                        other => return Err(at(HarnessError::Config(format!("unknown sampling {other:?}")))),
                    }
                }
                "starts" => starts = Some(parse_starts(v).map_err(at)?),
                "cap" => cfg.cap = int(v)? as usize,
                "mode" => cfg.mode = v.parse().map_err(at)?,
                "guard_band" => {
                    cfg.guard_band = v
                        .parse()
                        .map_err(|_| at(HarnessError::Config(format!("bad guard band {v:?}"))))?
                }
                "precision_cap_bits" => cfg.precision_cap_bits = Some(int(v)? as u32),
                "seed" => cfg.seed = int(v)?,
                "output" => cfg.output = Some(PathBuf::from(v)),
                "format" => cfg.format = v.parse().map_err(at)?,
                "steps" => steps = Some(int(v)? as usize),
                "eps" => {
                    eps = Some(
                        v.parse::<f64>()
                            .map_err(|_| at(HarnessError::Config(format!("bad eps {v:?}"))))?,
                    )
                }
                other => return Err(at(HarnessError::Config(format!("unknown key {other:?}")))),
            }
        }
        let missing = |k: &str| HarnessError::Config(format!("missing key {k:?}"));
        cfg.kind = match kind.as_deref().unwrap_or("matching") {
            "matching" => SweepKind::Matching,
            "density" => SweepKind::Density {
                steps: steps.ok_or_else(|| missing("steps"))?,
                eps: eps.ok_or_else(|| missing("eps"))?,
            },
            other => return Err(HarnessError::Config(format!("unknown kind {other:?}"))),
        };
        cfg.field = field.ok_or_else(|| missing("field"))?;
        cfg.alpha_lo = lo.ok_or_else(|| missing("alpha_lo"))?;
        cfg.alpha_hi = hi.ok_or_else(|| missing("alpha_hi"))?;
        cfg.grid = grid.ok_or_else(|| missing("grid"))?;
        if let Some(s) = starts {
            cfg.starts = s;
        }
        Ok(cfg)
    }

    /// Canonical text form; `parse` inverts it.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        match &self.kind {
            SweepKind::Matching => kv("kind", &"matching"),
            SweepKind::Density { steps, eps } => {
                kv("kind", &"density");
                kv("steps", steps);
                kv("eps", eps);
            }
        }
        kv("field", &self.field);
        kv("alpha_lo", &self.alpha_lo);
        kv("alpha_hi", &self.alpha_hi);
        kv("grid", &self.grid);
        kv(
            "sampling",
            &match self.sampling {
                Sampling::Grid => "grid",
                Sampling::Random => "random",
            },
        );
        let starts: Vec<String> = self.starts.iter().map(Start::tag).collect();
        kv("starts", &starts.join("; "));
        kv("cap", &self.cap);
        kv("mode", &self.mode.as_str());
        kv("guard_band", &self.guard_band);
        if let Some(b) = self.precision_cap_bits {
            kv("precision_cap_bits", &b);
        }
        kv("seed", &self.seed);
        if let Some(p) = &self.output {
            kv("output", &p.display());
        }
        kv("format", &self.format.as_str());
        out
    }
}

/// `zero-one` or `near-fixed(ε, digits)`, separated by `;`.
pub fn parse_starts(s: &str) -> Result<Vec<Start>, HarnessError> {
    s.split(';').map(parse_start).collect()
}

pub fn parse_start(s: &str) -> Result<Start, HarnessError> {
    let s = s.trim();
    if s == "zero-one" {
        return Ok(Start::ZeroOne);
    }
    let inner = s
        .strip_prefix("near-fixed(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| HarnessError::Config(format!("unknown start {s:?}")))?;
    let (eps, digits) = inner
        .split_once(',')
        .ok_or_else(|| HarnessError::Config(format!("near-fixed needs (eps, digits), got {s:?}")))?;
    let digits = digits.trim();
    let d = parse_digits(digits, digits.len())?;
    Ok(Start::NearFixedPoint {
        eps: parse_rational(eps)?,
        digits: d,
    })
}
