//! `betamatch` command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use betamatch::algebra::BetaField;
use betamatch::harness::{
    parse_start, parse_starts, records_to_string, sweep_density, sweep_matching, two_column_csv, OutputFormat,
    Sampling, SweepConfig, SweepKind, SweepMode,
};
use betamatch::maps::{ExactMap, MapParams, MapSpec, Param, Side, SlopeSpec};
use betamatch::matching::{matching_index, AlphaValue, MatchingConfig, MatchingResult, Mode, DEFAULT_CAP};
use betamatch::orbits::{attractor, param_window, q_sequence};
use betamatch::Scalar;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "betamatch",
    version,
    about = "Skew tent maps, β-transformations and matching"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Float breakpoint guard band.
    #[arg(long, global = true, default_value_t = 1e-12)]
    guard_band: f64,
    /// Bit cap for refining the slope enclosure.
    #[arg(long, global = true)]
    precision_cap_bits: Option<u32>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Orbit of a point as CSV.
    Orbit {
        /// e.g. `skewtent:alpha=0.4,beta=0.9`
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Matching index of `x ↦ βx + α mod 1`.
    Matching {
        #[command(flatten)]
        slope: SlopeArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// `zero-one` or `near-fixed(eps, digits)`.
        #[arg(long, default_value = "zero-one")]
        start: String,
        /// Also write the step trace as CSV here.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Parameter sweep from a config file or flags.
    Sweep(SweepArgs),
    /// Parameter window around the current parameter.
    Windows {
        spec: String,
        #[arg(short)]
        n: usize,
    },
    /// Attractor cycle of a β-transformation.
    Attractor {
        spec: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Distortion quotients `Q_1..Q_n`.
    Qseq {
        spec: String,
        #[arg(short)]
        n: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SlopeArgs {
    #[arg(long)]
    multinacci: Option<usize>,
    /// `multinacci(N)` or `pisot(a_0;…;a_{N−1})`.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    field: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_hi: Option<String>,
    #[arg(long)]
    grid: Option<usize>,
    /// `;`-separated start modes.
    #[arg(long)]
    starts: Option<String>,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    random: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Density sweep with this many iterates.
    #[arg(long)]
    density_steps: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
}

/// Error with the process exit code it maps to.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn usage(err: anyhow::Error) -> Failure {
    Failure { code: 2, err }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report(&Failure {
                code: 2,
                err: anyhow!(e.render().to_string().trim().to_string()),
            });
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            report(&f);
            ExitCode::from(f.code)
        }
    }
}

fn report(f: &Failure) {
    let kind = if f.code == 2 { "usage" } else { "failure" };
    let msg = format!("{:#}", f.err);
    eprintln!("{}", json!({ "error": kind, "message": msg, "exit_code": f.code }));
}

fn emit(g: &Global, text: &str) -> Result<(), Failure> {
    match &g.out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(usage),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| usage(e.into()))
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    if !(g.guard_band >= 0.0) {
        return Err(usage(anyhow!("--guard-band must be non-negative")));
    }
    match &cli.cmd {
        Cmd::Orbit { spec, x0, n, side } => cmd_orbit(g, spec, x0, *n, *side),
        Cmd::Matching {
            slope,
            alpha,
            cap,
            start,
            trace_out,
        } => cmd_matching(g, slope, alpha, *cap, start, trace_out.as_ref()),
        Cmd::Sweep(a) => cmd_sweep(g, a),
        Cmd::Windows { spec, n } => cmd_windows(g, spec, *n),
        Cmd::Attractor { spec, tol } => cmd_attractor(g, spec, *tol),
        Cmd::Qseq { spec, n } => cmd_qseq(g, spec, *n),
    }
}

fn parse_spec(s: &str) -> Result<MapSpec, Failure> {
    s.parse::<MapSpec>()
        .with_context(|| format!("map spec {s:?}"))
        .map_err(usage)
}

fn float_map(g: &Global, spec: &MapSpec) -> Result<MapParams<f64>, Failure> {
    Ok(spec.to_float().map_err(|e| usage(e.into()))?.with_guard(g.guard_band))
}

fn exact_map(g: &Global, spec: &MapSpec) -> Result<ExactMap, Failure> {
    let m = spec.to_exact().map_err(|e| usage(e.into()))?;
    if let (ExactMap::Field(f), Some(bits)) = (&m, g.precision_cap_bits) {
        f.beta().field().set_precision_cap_bits(bits);
    }
    Ok(m)
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::Right => Side::Right,
        SideArg::Left => Side::Left,
    }
}

fn slope_f64(spec: &MapSpec) -> Result<f64, Failure> {
    Ok(*spec.to_float().map_err(|e| usage(e.into()))?.beta())
}

type Row = (String, String, String, bool);

fn orbit_rows<S: Scalar>(
    m: &MapParams<S>,
    x0: &S,
    n: usize,
    side: Side,
    show: impl Fn(&S) -> String,
) -> Result<Vec<Row>> {
    Ok(m.orbit_sided(x0, n, side)?
        .iter()
        .map(|p| {
            (
                format!("{}", p.point.as_f64()),
                show(&p.point),
                p.branch.map(|b| b.to_string()).unwrap_or_default(),
                p.guard_hit,
            )
        })
        .collect())
}

fn exact_orbit(g: &Global, spec: &MapSpec, x0: &Param, n: usize, s: Side) -> Result<Vec<Row>, Failure> {
    let rows = match exact_map(g, spec)? {
        ExactMap::Rational(m) => {
            let x = match &spec.beta {
                SlopeSpec::Value(b) => x0.to_rational(b),
                _ => unreachable!("rational maps have rational slopes"),
            };
            orbit_rows(&m, &x, n, s, |q| q.to_string())
        }
        ExactMap::Field(m) => {
            let x = x0.to_field(m.beta().field());
            orbit_rows(&m, &x, n, s, |e| {
                let c: Vec<String> = e.coeffs().iter().map(ToString::to_string).collect();
                format!("[{}]", c.join(";"))
            })
        }
    };
    rows.map_err(|e| Failure { code: 1, err: e })
}

fn cmd_orbit(g: &Global, spec: &str, x0: &str, n: usize, s: SideArg) -> Result<u8, Failure> {
    let spec = parse_spec(spec)?;
    let x0: Param = x0.parse().context("--x0").map_err(usage)?;
    let mode = g.mode.unwrap_or(ModeArg::Float);
    let s = side(s);
    let float_rows = || -> Result<Vec<Row>, Failure> {
        let m = float_map(g, &spec)?;
        let x = x0.to_f64(slope_f64(&spec)?);
        orbit_rows(&m, &x, n, s, |_| String::new()).map_err(|e| Failure { code: 1, err: e })
    };
    let (header, rows): (Vec<&str>, Vec<Vec<String>>) = match mode {
        ModeArg::Float => (
            vec!["n", "x", "branch", "guard_hit"],
            float_rows()?
                .into_iter()
                .enumerate()
                .map(|(i, r)| vec![i.to_string(), r.0, r.2, r.3.to_string()])
                .collect(),
        ),
        ModeArg::Exact => (
            vec!["n", "x", "x_exact", "branch"],
            exact_orbit(g, &spec, &x0, n, s)?
                .into_iter()
                .enumerate()
                .map(|(i, r)| vec![i.to_string(), r.0, r.1, r.2])
                .collect(),
        ),
        ModeArg::Both => {
            let f = float_rows()?;
            let e = exact_orbit(g, &spec, &x0, n, s)?;
            (
                vec![
                    "n",
                    "x_float",
                    "branch_float",
                    "guard_hit",
                    "x_exact",
                    "x_exact_decimal",
                    "branch_exact",
                ],
                f.into_iter()
                    .zip(e)
                    .enumerate()
                    .map(|(i, (f, e))| vec![i.to_string(), f.0, f.2, f.3.to_string(), e.1, e.0, e.2])
                    .collect(),
            )
        }
    };
    let text = match g.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Csv => {
            let mut s = header.join(",") + "\n";
            for r in &rows {
                s.push_str(&r.join(","));
                s.push('\n');
            }
            s
        }
        FormatArg::Json => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| {
                    Value::Object(
                        header
                            .iter()
                            .map(|h| h.to_string())
                            .zip(r.iter().map(|v| json!(v)))
                            .collect(),
                    )
                })
                .collect();
            json_text(&Value::Array(objs))
        }
    };
    emit(g, &text)?;
    Ok(0)
}

fn slope_field(slope: &SlopeArgs) -> Result<Arc<BetaField>, Failure> {
    let spec = match (&slope.multinacci, &slope.field) {
        (Some(n), _) => SlopeSpec::Multinacci(*n),
        (None, Some(f)) => f.parse().context("--field").map_err(usage)?,
        (None, None) => return Err(usage(anyhow!("give --multinacci or --field"))),
    };
    spec.field()
        .map_err(|e| usage(e.into()))?
        .ok_or_else(|| usage(anyhow!("matching needs an algebraic slope")))
}

fn result_json(field: &Arc<BetaField>, alpha: &AlphaValue, r: &MatchingResult, start: &str) -> Value {
    let exact = match alpha {
        AlphaValue::Exact(a) => serde_json::to_value(a).unwrap_or(Value::Null),
        AlphaValue::Float(_) => Value::Null,
    };
    json!({
        "field": field.to_json(),
        "beta": field.beta_f64(),
        "alpha": alpha.to_f64(),
        "alpha_exact": exact,
        "start": start,
        "kappa": r.kappa(),
        "result": r,
    })
}

fn cmd_matching(
    g: &Global,
    slope: &SlopeArgs,
    alpha: &str,
    cap: usize,
    start: &str,
    trace_out: Option<&PathBuf>,
) -> Result<u8, Failure> {
    let field = slope_field(slope)?;
    if let Some(bits) = g.precision_cap_bits {
        field.set_precision_cap_bits(bits);
    }
    let param: Param = alpha.parse().context("--alpha").map_err(usage)?;
    let alpha = AlphaValue::Exact(param.to_field(&field));
    let start_v = parse_start(start).map_err(|e| usage(e.into()))?;
    let modes: &[Mode] = match g.mode.unwrap_or(ModeArg::Exact) {
        ModeArg::Exact => &[Mode::Exact],
        ModeArg::Float => &[Mode::Float],
        ModeArg::Both => &[Mode::Exact, Mode::Float],
    };
    let mut results = Vec::new();
    for &mode in modes {
        let cfg = MatchingConfig {
            cap,
            mode,
            guard: g.guard_band,
            start: start_v.clone(),
            keep_trace: true,
        };
        let r = matching_index(&field, &alpha, &cfg).map_err(|e| match e {
            betamatch::matching::MatchingError::InvalidStart(_)
            | betamatch::matching::MatchingError::InvalidArgument(_)
            | betamatch::matching::MatchingError::NotMultinacci => usage(e.into()),
            other => Failure {
                code: 1,
                err: other.into(),
            },
        })?;
        results.push(r);
    }
    if let Some(p) = trace_out {
        fs::write(p, results[0].trace_csv(&field))
            .with_context(|| format!("writing {}", p.display()))
            .map_err(usage)?;
    }
    let text = match g.format.unwrap_or(FormatArg::Json) {
        FormatArg::Csv => {
            let mut s = String::new();
            for r in &results {
                s.push_str(&r.trace_csv(&field));
            }
            s
        }
        FormatArg::Json => {
            let tag = start_v.tag();
            if results.len() == 1 {
                json_text(&result_json(&field, &alpha, &results[0], &tag))
            } else {
                json_text(&json!({
                    "exact": result_json(&field, &alpha, &results[0], &tag),
                    "float": result_json(&field, &alpha, &results[1], &tag),
                    "agree": results[0].outcome == results[1].outcome,
                }))
            }
        }
    };
    emit(g, &text)?;
    Ok(0)
}

fn sweep_config(g: &Global, a: &SweepArgs) -> Result<SweepConfig> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            SweepConfig::parse(&text)?
        }
        None => {
            let need =
                |o: &Option<String>, k: &str| o.clone().ok_or_else(|| anyhow!("--{k} is required without --config"));
            SweepConfig::matching(
                need(&a.field, "field")?.parse()?,
                need(&a.alpha_lo, "alpha-lo")?.parse()?,
                need(&a.alpha_hi, "alpha-hi")?.parse()?,
                a.grid.ok_or_else(|| anyhow!("--grid is required without --config"))?,
            )
        }
    };
    if a.config.is_some() {
        if let Some(f) = &a.field {
            cfg.field = f.parse()?;
        }
        if let Some(v) = &a.alpha_lo {
            cfg.alpha_lo = v.parse()?;
        }
        if let Some(v) = &a.alpha_hi {
            cfg.alpha_hi = v.parse()?;
        }
        if let Some(v) = a.grid {
            cfg.grid = v;
        }
    }
    if let Some(s) = &a.starts {
        cfg.starts = parse_starts(s)?;
    }
    if let Some(c) = a.cap {
        cfg.cap = c;
    }
    if a.random {
        cfg.sampling = Sampling::Random;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(steps) = a.density_steps {
        cfg.kind = SweepKind::Density { steps, eps: a.eps };
    }
    if let Some(m) = g.mode {
        cfg.mode = match m {
            ModeArg::Exact => SweepMode::Exact,
            ModeArg::Float => SweepMode::Float,
            ModeArg::Both => SweepMode::Both,
        };
    }
    if g.guard_band != 1e-12 {
        cfg.guard_band = g.guard_band;
    }
    if g.precision_cap_bits.is_some() {
        cfg.precision_cap_bits = g.precision_cap_bits;
    }
    if let Some(f) = g.format {
        cfg.format = match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    if g.out.is_some() {
        cfg.output = g.out.clone();
    }
    Ok(cfg)
}

fn cmd_sweep(g: &Global, a: &SweepArgs) -> Result<u8, Failure> {
    let cfg = sweep_config(g, a).map_err(usage)?;
    let (text, failures) = match cfg.kind {
        SweepKind::Matching => {
            let recs = sweep_matching(&cfg).map_err(|e| usage(e.into()))?;
            let n = recs.iter().filter(|r| r.is_failure()).count();
            (records_to_string(&recs, cfg.format), n)
        }
        SweepKind::Density { .. } => {
            let recs = sweep_density(&cfg).map_err(|e| usage(e.into()))?;
            let n = recs.iter().filter(|r| r.is_failure()).count();
            (records_to_string(&recs, cfg.format), n)
        }
    };
    let text = text.map_err(|e| usage(e.into()))?;
    let out = Global {
        out: cfg.output.clone(),
        mode: None,
        guard_band: 0.0,
        precision_cap_bits: None,
        format: None,
    };
    emit(&out, &text)?;
    Ok(if failures > 0 { 1 } else { 0 })
}

fn window_json<S: Scalar>(m: &MapParams<S>, n: usize) -> Result<Value> {
    let w = param_window(m, n)?;
    let res = w.endpoint_residuals()?;
    let slope = w.lift_slope()?;
    let mut v = serde_json::to_value(w.summary())?;
    v["residual_lo"] = json!(res.lower.as_ref().map(|r| r.as_f64()));
    v["residual_hi"] = json!(res.upper.as_ref().map(|r| r.as_f64()));
    v["residual_lo_zero"] = json!(res.lower.as_ref().map(|r| r.is_zero_value().ok()));
    v["residual_hi_zero"] = json!(res.upper.as_ref().map(|r| r.is_zero_value().ok()));
    v["lift_slope"] = json!(slope.map(|s| s.as_f64()));
    Ok(v)
}

fn window_csv(v: &Value) -> String {
    let keys = [
        "n",
        "lo",
        "hi",
        "width",
        "r_lo",
        "r_hi",
        "itinerary",
        "bound_parameter",
        "residual_lo",
        "residual_hi",
    ];
    let mut s = keys.join(",") + "\n";
    let cells: Vec<String> = keys
        .iter()
        .map(|k| match &v[*k] {
            Value::Null => String::new(),
            Value::String(t) => t.clone(),
            other => other.to_string(),
        })
        .collect();
    let _ = writeln!(s, "{}", cells.join(","));
    s
}

fn exact_or_float<T>(
    g: &Global,
    spec: &MapSpec,
    default: ModeArg,
    f: impl Fn(&MapParams<f64>) -> Result<T>,
    r: impl Fn(&MapParams<BigRational>) -> Result<T>,
    e: impl Fn(&MapParams<betamatch::FieldElement>) -> Result<T>,
) -> Result<Vec<(&'static str, T)>, Failure> {
    let fail = |e: anyhow::Error| Failure { code: 1, err: e };
    let mode = g.mode.unwrap_or(default);
    let mut out = Vec::new();
    if mode != ModeArg::Float {
        let v = match exact_map(g, spec)? {
            ExactMap::Rational(m) => r(&m),
            ExactMap::Field(m) => e(&m),
        };
        out.push(("exact", v.map_err(fail)?));
    }
    if mode != ModeArg::Exact {
        out.push(("float", f(&float_map(g, spec)?).map_err(fail)?));
    }
    Ok(out)
}

fn cmd_windows(g: &Global, spec: &str, n: usize) -> Result<u8, Failure> {
    let spec = parse_spec(spec)?;
    if n < 4 {
        return Err(usage(anyhow!("-n must be at least 4")));
    }
    let out = exact_or_float(
        g,
        &spec,
        ModeArg::Exact,
        |m| window_json(m, n),
        |m| window_json(m, n),
        |m| window_json(m, n),
    )?;
    let text = match g.format.unwrap_or(FormatArg::Json) {
        FormatArg::Json if out.len() == 1 => json_text(&out[0].1),
        FormatArg::Json => json_text(&Value::Object(
            out.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        )),
        FormatArg::Csv => out.iter().map(|(_, v)| window_csv(v)).collect(),
    };
    emit(g, &text)?;
    Ok(0)
}

fn cmd_attractor(g: &Global, spec: &str, tol: f64) -> Result<u8, Failure> {
    let spec = parse_spec(spec)?;
    if g.mode == Some(ModeArg::Exact) {
        return Err(usage(anyhow!("the attractor estimator is float-only")));
    }
    let MapParams::GenBeta(m) = float_map(g, &spec)? else {
        return Err(usage(anyhow!("attractor needs a genbeta map")));
    };
    let cyc = attractor(&m, tol).map_err(|e| Failure { code: 1, err: e.into() })?;
    let text = match g.format.unwrap_or(FormatArg::Json) {
        FormatArg::Csv => two_column_csv(("lo", "hi"), cyc.components.iter().copied()),
        FormatArg::Json => {
            let mut v = serde_json::to_value(&cyc).map_err(|e| usage(e.into()))?;
            v["total_length"] = json!(cyc.total_length());
            v["invariance_defect"] = json!(cyc.invariance_defect());
            json_text(&v)
        }
    };
    emit(g, &text)?;
    Ok(0)
}

fn qseq_json<S: Scalar>(m: &MapParams<S>, n: usize) -> Result<Value> {
    Ok(serde_json::to_value(q_sequence(m, n)?)?)
}

fn cmd_qseq(g: &Global, spec: &str, n: usize) -> Result<u8, Failure> {
    let spec = parse_spec(spec)?;
    if n < 2 {
        return Err(usage(anyhow!("-n must be at least 2")));
    }
    let out = exact_or_float(
        g,
        &spec,
        ModeArg::Float,
        |m| qseq_json(m, n),
        |m| qseq_json(m, n),
        |m| qseq_json(m, n),
    )?;
    let text = match g.format.unwrap_or(FormatArg::Json) {
        FormatArg::Json if out.len() == 1 => json_text(&out[0].1),
        FormatArg::Json => json_text(&Value::Object(
            out.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        )),
        FormatArg::Csv => out
            .iter()
            .map(|(_, v)| {
                let vals = v["values"].as_array().cloned().unwrap_or_default();
                two_column_csv(("k", "q"), vals.iter().enumerate().map(|(i, q)| (i + 1, q.to_string())))
            })
            .collect(),
    };
    emit(g, &text)?;
    Ok(0)
}
