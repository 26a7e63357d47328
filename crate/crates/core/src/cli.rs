//! Command-line driver.
//!
//! Every run prints a record or a table, as JSON or CSV, that embeds the
//! tool version and the fully resolved run configuration. Flags are long
//! form only; `--config FILE` supplies `key=value` defaults for any of them.
//! `ASYMP_THREADS` caps the worker threads used by parameter sweeps.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 when the numerics do
//! not converge, 1 for I/O failures.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{angular_bessel_closed, angular_bessel_integral, b_asymp, ratio_table, saddle_diagnostics_with};
use crate::gtf::{
    derivative_bound_sup, diff_expansion_check, gtf_scan, necessary_check, oscillation_amplitude, AnalyticFunction,
    ExpansionSpec, RadiusRule, ScanGrid, Sector,
};
use crate::heatkernel::{evaluate, p_contour, KernelParams, QuadratureConfig, Regime, Route};
use crate::specfun::OmegaConfig;
use crate::{Complex64, Error, ScaledValue};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_ENV: &str = "ASYMP_THREADS";

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "asymkernel",
    version,
    about = "Heat kernel asymptotics on H-type groups and term-by-term differentiation checks",
    disable_help_flag = true,
    disable_version_flag = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; tables default to csv, records to json.
    #[arg(long, global = true)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// File of `key=value` lines used as defaults for the long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Recorded with the run for reproducibility.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, action = ArgAction::Help)]
    #[serde(skip)]
    help: Option<bool>,

    #[arg(long, action = ArgAction::Version)]
    #[serde(skip)]
    version: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Evaluate the reduced heat kernel p(n, m; u, v).
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Compare the kernel with its large-v asymptotic form.
    #[command(subcommand)]
    Asymp(AsympCmd),
    /// Good-test-function checks.
    #[command(subcommand)]
    Gtf(GtfCmd),
    /// Saddle-point identities.
    #[command(subcommand)]
    Saddle(SaddleCmd),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelCmd {
    /// One value of p(n, m; u, v).
    Eval(KernelEvalArgs),
    /// p(n, m; u, v) over a grid of v.
    Table(KernelTableArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AsympCmd {
    /// Ratio of p to its asymptotic approximation over a grid of v.
    Compare(CompareArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GtfCmd {
    /// Scan the contour constant of a catalog function over a sector.
    Check(GtfCheckArgs),
    /// Differentiate a Taylor expansion term by term, and show a function
    /// whose derivative escapes its asymptotics.
    DerivativeDemo(DemoArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SaddleCmd {
    /// Residuals of the saddle-point identities at (u, v).
    Verify(SaddleArgs),
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
pub struct QuadArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1 << 16)]
    pub max_panels: usize,
}

impl QuadArgs {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol,
            max_panels: self.max_panels,
            ..QuadratureConfig::default()
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct KernelEvalArgs {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub u: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub v: f64,
    #[arg(long, value_enum, default_value_t = Route::Auto)]
    pub route: Route,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct KernelTableArgs {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub u: f64,
    /// Comma-separated, strictly ascending.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub v_grid: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Route::Auto)]
    pub route: Route,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct CompareArgs {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub u: f64,
    /// Comma-separated, strictly ascending, every v > 8.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub v_grid: Vec<f64>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum FnName {
    PowerLog,
    PowerExp,
    PlainLog,
    LogPlusSin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum RuleName {
    /// `half_sine`, or `power` with exponent `1 - gamma` for `power_exp`.
    Auto,
    HalfSine,
    Power,
    Fixed,
}

#[derive(Args, Debug, Serialize)]
pub struct GtfCheckArgs {
    #[arg(long = "fn", value_enum)]
    #[serde(rename = "fn")]
    pub function: FnName,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub r_min: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
    pub theta0: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    pub theta1: f64,
    #[arg(long, value_enum, default_value_t = RuleName::Auto)]
    pub radius_rule: RuleName,
    /// Exponent for `power`, radius for `fixed`.
    #[arg(long, allow_negative_numbers = true)]
    pub radius_param: Option<f64>,
    #[arg(long, default_value_t = 1e2)]
    pub r_start: f64,
    #[arg(long, default_value_t = 4.0)]
    pub decades: f64,
    #[arg(long, default_value_t = 8)]
    pub rings_per_decade: usize,
    #[arg(long, default_value_t = 5)]
    pub arg_samples: usize,
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
    #[arg(long, default_value_t = 0.1)]
    pub slope_threshold: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct DemoArgs {
    /// Highest truncation order checked.
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    /// Comma-separated points on the positive axis.
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub ray: Vec<f64>,
    #[arg(long, default_value_t = 1e2)]
    pub lo: f64,
    #[arg(long, default_value_t = 1e6)]
    pub hi: f64,
    #[arg(long, default_value_t = 64)]
    pub per_decade: usize,
    /// Amplitude of `z f'(z)` above which derivative asymptotics fail.
    #[arg(long, default_value_t = 0.5)]
    pub oscillation_threshold: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct SaddleArgs {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub u: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub v: f64,
    /// Midpoint samples for the remainder bound.
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
}

/// Failure of a run, with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Config(String),
    Run(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) => e.exit_code(),
            CliError::Config(_) => 2,
            CliError::Run(e) if e.is_numerical() => 3,
            CliError::Run(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "{e}"),
            CliError::Config(m) => write!(f, "error: {m}"),
            CliError::Run(e) => write!(f, "error: {e}"),
            CliError::Io(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Reads `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let (k, v) = l
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value, got {l:?}", i + 1)))?;
            let k = k.trim().trim_start_matches("--");
            if k.is_empty() || k == "config" {
                return Err(CliError::Config(format!("config line {}: invalid key {k:?}", i + 1)));
            }
            Ok((k.to_string(), v.trim().to_string()))
        })
        .collect()
}

fn flag_given(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    args.iter()
        .filter_map(|a| a.to_str())
        .any(|a| a == flag || a.starts_with(&prefix))
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let a = a.to_str()?;
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Appends config-file entries as flags unless the command line already
/// sets them.
pub fn merge_config(mut args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    for (k, v) in parse_config(&text)? {
        if !flag_given(&args, &k) {
            args.push(format!("--{k}={v}").into());
        }
    }
    Ok(args)
}

fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

/// A result as a JSON record plus its CSV rendering.
struct Rendered {
    result: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    /// Non-tabular fields, written as a comment line above a CSV table.
    summary: Option<Value>,
    default_format: Format,
}

fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn value_cells(s: &ScaledValue) -> [String; 2] {
    [num(s.mantissa().re), num(s.log_scale())]
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn check_v(v: f64) -> crate::Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("v must be ≥ 0, got {v}")));
    }
    Ok(())
}

fn route_regime(p: &KernelParams, route: Route) -> Regime {
    match route {
        Route::Auto => p.regime(),
        Route::Direct => Regime::Direct,
        Route::Contour => Regime::Contour,
    }
}

fn kernel_eval(a: &KernelEvalArgs) -> CliResult<Rendered> {
    check_v(a.v)?;
    let params = KernelParams::new(a.n, a.m, a.u, a.v)?;
    let value = evaluate(&params, a.route, &a.quad.config())?;
    let regime = route_regime(&params, a.route);
    let [mant, log] = value_cells(&value);
    Ok(Rendered {
        result: json!({
            "n": a.n, "m": a.m, "u": a.u, "v": a.v,
            "regime": regime,
            "value": value,
            "decimal": value.decimal(),
        }),
        header: vec!["n", "m", "u", "v", "regime", "mantissa", "log_scale"],
        rows: vec![vec![
            a.n.to_string(),
            a.m.to_string(),
            num(a.u),
            num(a.v),
            to_value(&regime).as_str().unwrap_or_default().to_string(),
            mant,
            log,
        ]],
        summary: None,
        default_format: Format::Json,
    })
}

fn check_grid(grid: &[f64]) -> crate::Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("v grid must not be empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("v grid must be strictly ascending".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct KernelRow {
    v: f64,
    regime: Regime,
    value: ScaledValue,
}

fn kernel_table(a: &KernelTableArgs) -> CliResult<Rendered> {
    check_grid(&a.v_grid)?;
    for &v in &a.v_grid {
        check_v(v)?;
    }
    let cfg = a.quad.config();
    let rows = a
        .v_grid
        .par_iter()
        .map(|&v| -> crate::Result<KernelRow> {
            let params = KernelParams::new(a.n, a.m, a.u, v)?;
            Ok(KernelRow {
                v,
                regime: route_regime(&params, a.route),
                value: evaluate(&params, a.route, &cfg)?,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let csv = rows
        .iter()
        .map(|r| {
            let [mant, log] = value_cells(&r.value);
            let regime = to_value(&r.regime).as_str().unwrap_or_default().to_string();
            vec![num(r.v), regime, mant, log]
        })
        .collect();
    Ok(Rendered {
        result: json!({ "n": a.n, "m": a.m, "u": a.u, "rows": rows }),
        header: vec!["v", "regime", "mantissa", "log_scale"],
        rows: csv,
        summary: None,
        default_format: Format::Csv,
    })
}

fn asymp_compare(a: &CompareArgs) -> CliResult<Rendered> {
    let rows = ratio_table(a.n, a.m, a.u, &a.v_grid, &a.quad.config())?;
    let decreasing = crate::asymptotics::strictly_decreasing(&rows);
    let csv = rows
        .iter()
        .map(|r| vec![num(r.v), num(r.p_log), num(r.q_log), num(r.ratio), num(r.abs_dev)])
        .collect();
    let approximation = if a.u == 0.0 { "b_asymp" } else { "q_theorem" };
    Ok(Rendered {
        result: json!({
            "n": a.n, "m": a.m, "u": a.u,
            "approximation": approximation,
            "abs_dev_strictly_decreasing": decreasing,
            "rows": rows,
        }),
        header: vec!["v", "p_log", "q_log", "ratio", "abs_dev"],
        rows: csv,
        summary: Some(json!({ "approximation": approximation, "abs_dev_strictly_decreasing": decreasing })),
        default_format: Format::Csv,
    })
}

impl GtfCheckArgs {
    /// Fills in the per-function parameter defaults and the radius rule.
    fn resolve(&mut self) -> CliResult<()> {
        let (alpha, beta, gamma) = match self.function {
            FnName::PowerLog => (Some(1.0), Some(0.0), None),
            FnName::PowerExp => (Some(0.0), Some(1.0), Some(0.5)),
            FnName::PlainLog | FnName::LogPlusSin => (None, None, None),
        };
        let unused = |x: Option<f64>, d: Option<f64>| x.is_some() && d.is_none();
        if unused(self.alpha, alpha) || unused(self.beta, beta) || unused(self.gamma, gamma) {
            return Err(CliError::Config(format!(
                "{} takes no parameter among those given",
                to_value(&self.function).as_str().unwrap_or_default()
            )));
        }
        self.alpha = self.alpha.or(alpha);
        self.beta = self.beta.or(beta);
        self.gamma = self.gamma.or(gamma);
        if self.radius_rule == RuleName::Auto {
            if self.function == FnName::PowerExp {
                self.radius_rule = RuleName::Power;
                self.radius_param = Some(1.0 - self.gamma.unwrap_or(0.5));
            } else {
                self.radius_rule = RuleName::HalfSine;
            }
        }
        match (self.radius_rule, self.radius_param) {
            (RuleName::Power | RuleName::Fixed, None) => Err(CliError::Config(format!(
                "radius rule {} needs --radius-param",
                to_value(&self.radius_rule).as_str().unwrap_or_default()
            ))),
            _ => Ok(()),
        }
    }

    fn function(&self) -> AnalyticFunction {
        let x = |o: Option<f64>| o.unwrap_or(0.0);
        match self.function {
            FnName::PowerLog => AnalyticFunction::power_log(x(self.alpha), x(self.beta)),
            FnName::PowerExp => AnalyticFunction::power_exp(x(self.alpha), x(self.beta), x(self.gamma)),
            FnName::PlainLog => AnalyticFunction::PlainLog,
            FnName::LogPlusSin => AnalyticFunction::LogPlusSin,
        }
    }

    fn rule(&self) -> RadiusRule {
        match self.radius_rule {
            RuleName::Power => RadiusRule::Power(self.radius_param.unwrap_or(1.0)),
            RuleName::Fixed => RadiusRule::Fixed(self.radius_param.unwrap_or(1.0)),
            _ => RadiusRule::HalfSine,
        }
    }
}

fn gtf_check(a: &GtfCheckArgs) -> CliResult<Rendered> {
    let sector = Sector::new(a.r_min, a.theta0, a.theta1)?;
    let g = a.function();
    g.validate()?;
    let grid = ScanGrid {
        r_start: a.r_start,
        decades: a.decades,
        rings_per_decade: a.rings_per_decade,
        arg_samples: a.arg_samples,
        nodes: a.nodes,
        slope_threshold: a.slope_threshold,
    };
    let report = gtf_scan(&g, &sector, &a.rule(), &grid)?;
    let decades = a.decades.round() as i32;
    let necessary = (0..=decades)
        .map(|k| {
            let r = a.r_start * 10f64.powi(k);
            necessary_check(&g, Complex64::new(r, 0.0)).map(|rho| json!({ "r": r, "rho": rho }))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let rows = report
        .samples
        .iter()
        .map(|s| vec![num(s.z.re), num(s.z.im), num(s.z.norm()), num(s.radius), num(s.c_hat), num(s.margin)])
        .collect();
    let summary = json!({
        "function": report.function,
        "radius_rule": report.radius_rule_tag,
        "sup_c_hat": report.sup_c_hat,
        "slope": report.slope,
        "verdict": report.verdict,
        "necessary": necessary,
    });
    Ok(Rendered {
        result: json!({ "report": report, "necessary": necessary }),
        header: vec!["z_re", "z_im", "abs_z", "radius", "c_hat", "margin"],
        rows,
        summary: Some(summary),
        default_format: Format::Json,
    })
}

fn derivative_demo(a: &DemoArgs) -> CliResult<Rendered> {
    if a.order == 0 {
        return Err(Error::Domain("order must be >= 1".into()).into());
    }
    let spec = ExpansionSpec::exp_inverse(a.order + 2);
    let sector = Sector::default();
    let tables = (1..=a.order)
        .map(|order| diff_expansion_check(&spec, &sector, &a.ray, order))
        .collect::<crate::Result<Vec<_>>>()?;
    let amplitude = oscillation_amplitude(&AnalyticFunction::LogPlusSin, a.lo, a.hi, a.per_decade)?;
    let bound = derivative_bound_sup(&AnalyticFunction::LogPlusSin, &AnalyticFunction::PlainLog, a.lo, a.hi, a.per_decade)?;
    let counterexample = json!({
        "function": AnalyticFunction::LogPlusSin.name(),
        "oscillation_amplitude": amplitude,
        "derivative_asymptotics_fail": amplitude >= a.oscillation_threshold,
        "derivative_bound_sup": bound,
    });
    let rows = tables
        .iter()
        .flat_map(|t| {
            t.rows
                .iter()
                .map(move |r| vec![t.order.to_string(), num(r.r), num(r.remainder), num(r.derivative_remainder)])
        })
        .collect();
    Ok(Rendered {
        result: json!({ "expansion": spec.f.name(), "tables": tables, "counterexample": counterexample }),
        header: vec!["order", "r", "remainder", "derivative_remainder"],
        rows,
        summary: Some(json!({ "counterexample": counterexample })),
        default_format: Format::Json,
    })
}

fn saddle_verify(a: &SaddleArgs) -> CliResult<Rendered> {
    check_v(a.v)?;
    if !(a.u >= 0.0) || !a.u.is_finite() {
        return Err(Error::Domain(format!("u must be ≥ 0, got {}", a.u)).into());
    }
    if a.n < 1 {
        return Err(Error::Domain("n must be >= 1".into()).into());
    }
    let kv = |pairs: &[(&str, f64)]| -> Vec<Vec<String>> {
        pairs.iter().map(|(k, v)| vec![k.to_string(), num(*v)]).collect()
    };
    if a.u == 0.0 {
        // no saddle: the poles at i pi and 2 pi i carry the kernel
        let c = p_contour(a.n, 0.0, Complex64::new(a.v, 0.0), &QuadratureConfig::default())?;
        let b = b_asymp(a.n, 1, a.v)?;
        let ratio = c.value.ratio(&b).re;
        let correction = c.relative_correction.map(|d| d.to_f64());
        let rows = kv(&[
            ("p_log", c.value.ln_abs()),
            ("b_log", b.ln_abs()),
            ("ratio", ratio),
            ("relative_correction", correction.unwrap_or(f64::NAN)),
        ]);
        return Ok(Rendered {
            result: json!({
                "route": "u0_residue",
                "n": a.n, "v": a.v,
                "contour": c,
                "b_asymp": b,
                "ratio": ratio,
                "relative_correction": correction,
            }),
            header: vec!["quantity", "value"],
            rows,
            summary: Some(json!({ "route": "u0_residue" })),
            default_format: Format::Json,
        });
    }
    let d = saddle_diagnostics_with(a.u, a.v, &OmegaConfig::default(), a.nodes)?;
    let angular = (0..a.n)
        .map(|j| -> crate::Result<Value> {
            let q = angular_bessel_integral(a.n, j, a.u, d.eps)?;
            let c = angular_bessel_closed(a.n, j, a.u, d.eps)?;
            Ok(json!({ "j": j, "quadrature": q, "closed_form": c, "rel_err": (q - c).abs() / c.abs() }))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let phi_residual = d.phi_residual();
    let phi_prime_over_v = d.phi_prime_norm / a.v;
    let rows = kv(&[
        ("theta", d.theta),
        ("eps", d.eps),
        ("d_sq_over_4", d.d_sq_over_4),
        ("phi_residual", phi_residual),
        ("phi_prime_over_v", phi_prime_over_v),
        ("decomposition_residual", d.decomposition_residual),
        ("saddle_relation_residual", d.saddle_relation_residual),
        ("remainder_sup", d.remainder_sup),
        ("bound_constant", d.bound_constant),
    ]);
    Ok(Rendered {
        result: json!({
            "route": "saddle",
            "n": a.n,
            "diagnostics": d,
            "phi_residual": phi_residual,
            "phi_prime_over_v": phi_prime_over_v,
            "angular": angular,
        }),
        header: vec!["quantity", "value"],
        rows,
        summary: Some(json!({ "route": "saddle", "angular": angular })),
        default_format: Format::Json,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Kernel(KernelCmd::Eval(_)) => "kernel eval",
        Command::Kernel(KernelCmd::Table(_)) => "kernel table",
        Command::Asymp(AsympCmd::Compare(_)) => "asymp compare",
        Command::Gtf(GtfCmd::Check(_)) => "gtf check",
        Command::Gtf(GtfCmd::DerivativeDemo(_)) => "gtf derivative-demo",
        Command::Saddle(SaddleCmd::Verify(_)) => "saddle verify",
    }
}

fn parameters(c: &Command) -> Value {
    match c {
        Command::Kernel(KernelCmd::Eval(a)) => to_value(a),
        Command::Kernel(KernelCmd::Table(a)) => to_value(a),
        Command::Asymp(AsympCmd::Compare(a)) => to_value(a),
        Command::Gtf(GtfCmd::Check(a)) => to_value(a),
        Command::Gtf(GtfCmd::DerivativeDemo(a)) => to_value(a),
        Command::Saddle(SaddleCmd::Verify(a)) => to_value(a),
    }
}

fn dispatch(c: &Command) -> CliResult<Rendered> {
    match c {
        Command::Kernel(KernelCmd::Eval(a)) => kernel_eval(a),
        Command::Kernel(KernelCmd::Table(a)) => kernel_table(a),
        Command::Asymp(AsympCmd::Compare(a)) => asymp_compare(a),
        Command::Gtf(GtfCmd::Check(a)) => gtf_check(a),
        Command::Gtf(GtfCmd::DerivativeDemo(a)) => derivative_demo(a),
        Command::Saddle(SaddleCmd::Verify(a)) => saddle_verify(a),
    }
}

fn write_csv(out: &mut dyn Write, meta: &Value, r: &Rendered) -> CliResult<()> {
    writeln!(out, "# asymkernel {VERSION}")?;
    writeln!(out, "# config: {meta}")?;
    if let Some(s) = &r.summary {
        writeln!(out, "# summary: {s}")?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(&r.header).map_err(|e| CliError::Io(e.into()))?;
    for row in &r.rows {
        w.write_record(row).map_err(|e| CliError::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

/// Parses, runs and writes one command.
pub fn execute(args: Vec<OsString>) -> CliResult<()> {
    let args = merge_config(args)?;
    let mut cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    if let Command::Gtf(GtfCmd::Check(a)) = &mut cli.command {
        a.resolve()?;
    }
    let threads = threads_from_env()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker threads: {e}")))?;
    let rendered = pool.install(|| dispatch(&cli.command))?;
    let format = cli.format.unwrap_or(rendered.default_format);
    let meta = json!({
        "tool": "asymkernel",
        "version": VERSION,
        "command": command_name(&cli.command),
        "parameters": parameters(&cli.command),
        "format": format,
        "output": cli.output,
        "config_file": cli.config,
        "seed": cli.seed,
        "threads": threads,
    });
    let mut sink: Box<dyn Write> = match &cli.output {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    match format {
        Format::Json => {
            let doc = json!({ "meta": meta, "result": rendered.result });
            serde_json::to_writer_pretty(&mut sink, &doc).map_err(|e| CliError::Io(e.into()))?;
            writeln!(sink)?;
        }
        Format::Csv => write_csv(&mut sink, &meta, &rendered)?,
    }
    sink.flush()?;
    Ok(())
}

/// Runs the tool and returns its exit code; diagnostics go to stderr.
pub fn run(args: Vec<OsString>) -> i32 {
    match execute(args) {
        Ok(()) => 0,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            e.exit_code()
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let kv = parse_config("# comment\n\nn = 2\n--v=5\n").unwrap();
        assert_eq!(kv, vec![("n".into(), "2".into()), ("v".into(), "5".into())]);
        assert!(parse_config("novalue\n").is_err());
        assert!(parse_config("config=x\n").is_err());
    }

    #[test]
    fn flags_override_config() {
        let args: Vec<OsString> = ["x", "--v", "3"].iter().map(OsString::from).collect();
        assert!(flag_given(&args, "v"));
        assert!(!flag_given(&args, "n"));
    }

    #[test]
    fn numbers_render_plainly() {
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(-1e-300), "-1e-300");
        assert_eq!(num(0.0), "0");
    }
}
