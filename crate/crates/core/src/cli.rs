//! Command-line front end behind the `fracsum` binary.
//!
//! Subcommands: `compute` (one value), `verify` (convergence table), `fit`
//! (error exponent), `bench` (naive against block evaluator) and `constants`.
//! Data goes to stdout or `--output`, diagnostics to stderr. Exit codes: 0
//! success, 2 usage or configuration, 3 domain, 4 insufficient data.
//!
//! A `--config FILE` of `flag = value` lines supplies defaults; flags on the
//! command line win. `FRACSUM_MAX_PRECISION` caps `--precision`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::asym::{self, ConvergenceRow, EXACT_RATIONAL_LIMIT};
use crate::error::Error;
use crate::real::Real;
use crate::zeta::{self, DEFAULT_PRECISION, MAX_PRECISION};
use crate::{exact, fastsum, ExactRational, SumKind};

/// Environment variable capping `--precision`.
pub const PRECISION_CAP_VAR: &str = "FRACSUM_MAX_PRECISION";

/// Largest `n` for which `bench` runs the naive evaluator by default.
pub const DEFAULT_NAIVE_CAP: u64 = 100_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_INSUFFICIENT: i32 = 4;

const JSON_SAFE_INT: u64 = 1 << 53;

#[derive(Parser, Debug)]
#[command(
    name = "fracsum",
    version,
    about = "Fractional-part power sums and their limit laws"
)]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one sum.
    Compute(ComputeArgs),
    /// Emit a convergence table of the normalized sum against its limit.
    Verify(VerifyArgs),
    /// Fit |residual| ≍ c·n^θ over a grid or a fixture file.
    Fit(FitArgs),
    /// Time the naive and block evaluators of T_s.
    Bench(BenchArgs),
    /// Print γ, ζ values and the limit constants.
    Constants(ConstantsArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    F,
    Phi,
    T,
    Poussin,
    Pill,
}

impl From<KindArg> for SumKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::F => SumKind::FracPower,
            KindArg::Phi => SumKind::Transform,
            KindArg::T => SumKind::DivisorWeighted,
            KindArg::Poussin => SumKind::Poussin,
            KindArg::Pill => SumKind::Pillichshammer,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Exact,
    Fast,
    Real,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Args, Debug)]
struct Common {
    /// File of `flag = value` defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Working precision in decimal digits.
    #[arg(long)]
    precision: Option<u32>,
    /// Write data here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SumArgs {
    #[arg(long, value_enum, default_value = "f")]
    kind: KindArg,
    /// Power s (kinds f, phi, t).
    #[arg(long)]
    s: Option<u32>,
    /// Progression step w (kind poussin).
    #[arg(long)]
    w: Option<u64>,
    /// Exponent β (kind pill).
    #[arg(long)]
    beta: Option<u32>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// A single point.
    #[arg(long, conflicts_with_all = ["grid", "n_min", "n_max"])]
    n: Option<u64>,
    /// Explicit points, e.g. `10,100,1000` or `1..1000`.
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    grid: Option<String>,
    #[arg(long, requires = "n_max")]
    n_min: Option<u64>,
    #[arg(long, requires = "n_min")]
    n_max: Option<u64>,
    /// Ratio of the geometric grid between `--n-min` and `--n-max`.
    #[arg(long, default_value_t = 2)]
    grid_ratio: u64,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    sum: SumArgs,
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    sum: SumArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    sum: SumArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// CSV with columns `n,residual` to fit instead of computing residuals.
    #[arg(long, conflicts_with_all = ["n", "grid", "n_min", "n_max"])]
    fixture: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "t")]
    kind: KindArg,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 0)]
    s: u32,
    /// Skip the naive evaluator above this n.
    #[arg(long, default_value_t = DEFAULT_NAIVE_CAP)]
    naive_cap: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ConstantsArgs {
    /// Print only the limit constant of this kind.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    w: Option<u64>,
    #[arg(long)]
    beta: Option<u32>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Configuration(_) => EXIT_USAGE,
            Error::InsufficientData { .. } => EXIT_INSUFFICIENT,
            Error::Domain(_) | Error::Pole | Error::Unsupported(_) => EXIT_DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let result = merge_config(args).and_then(|args| match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli, out),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            }
            Err(Failure {
                code,
                message: if code == EXIT_OK {
                    String::new()
                } else {
                    rendered
                },
            })
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(err, "fracsum: {}", f.message.trim_end());
            }
            f.code
        }
    }
}

const SUBCOMMANDS: [&str; 5] = ["compute", "verify", "fit", "bench", "constants"];

/// Splices `--flag value` pairs from the `--config` file right after the
/// subcommand, so that later command-line flags override them.
fn merge_config(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let mut path = None;
    let mut iter = args.iter().enumerate();
    while let Some((_, a)) = iter.next() {
        let a = a.to_string_lossy();
        if a == "--config" {
            path = iter.next().map(|(_, p)| PathBuf::from(p));
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut extra = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::usage(format!(
                "{}:{}: expected `flag = value`",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key == "config" {
            continue;
        }
        extra.push(OsString::from(format!("--{key}")));
        extra.push(OsString::from(value.trim()));
    }
    let Some(pos) = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(args);
    };
    let mut merged = args[..=pos].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&args[pos + 1..]);
    Ok(merged)
}

fn dispatch(cli: Cli, out: &mut impl Write) -> CliResult<()> {
    let (text, output) = match cli.command {
        Command::Compute(a) => (run_compute(&a)?, a.common.output),
        Command::Verify(a) => (run_verify(&a)?, a.common.output),
        Command::Fit(a) => (run_fit(&a)?, a.common.output),
        Command::Bench(a) => (run_bench(&a)?, a.common.output),
        Command::Constants(a) => (run_constants(&a)?, a.common.output),
    };
    match output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write output: {e}"))),
    }
}

fn precision_cap() -> CliResult<u32> {
    match std::env::var(PRECISION_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .map(|c| c.min(MAX_PRECISION))
            .map_err(|_| {
                Failure::usage(format!(
                    "{PRECISION_CAP_VAR} must be a positive integer, got {v:?}"
                ))
            }),
        Err(_) => Ok(MAX_PRECISION),
    }
}

fn resolve_precision(common: &Common, default: u32) -> CliResult<u32> {
    let cap = precision_cap()?;
    let p = common.precision.unwrap_or(default.min(cap));
    if p < 10 {
        return Err(Failure::usage(format!(
            "--precision must be at least 10, got {p}"
        )));
    }
    if p > cap {
        return Err(Failure::usage(format!(
            "--precision {p} exceeds the cap of {cap} digits"
        )));
    }
    Ok(p)
}

/// Resolves the law parameter for a kind, rejecting flags that do not apply.
fn parameter(sum: &SumArgs) -> CliResult<(SumKind, u32)> {
    parameter_of(sum.kind, sum.s, sum.w, sum.beta)
}

fn parameter_of(
    kind: KindArg,
    s: Option<u32>,
    w: Option<u64>,
    beta: Option<u32>,
) -> CliResult<(SumKind, u32)> {
    let reject = |flag: &str, given: bool| {
        if given {
            Err(Failure::usage(format!(
                "--{flag} does not apply to --kind {}",
                SumKind::from(kind)
            )))
        } else {
            Ok(())
        }
    };
    let p = match kind {
        KindArg::F | KindArg::Phi | KindArg::T => {
            reject("w", w.is_some())?;
            reject("beta", beta.is_some())?;
            s.unwrap_or(if kind == KindArg::Phi { 1 } else { 0 })
        }
        KindArg::Poussin => {
            reject("s", s.is_some())?;
            reject("beta", beta.is_some())?;
            let w = w.unwrap_or(1);
            u32::try_from(w).map_err(|_| Failure::usage(format!("--w {w} is too large")))?
        }
        KindArg::Pill => {
            reject("s", s.is_some())?;
            reject("w", w.is_some())?;
            beta.unwrap_or(2)
        }
    };
    Ok((kind.into(), p))
}

fn param_name(kind: SumKind) -> &'static str {
    match kind {
        SumKind::Poussin => "w",
        SumKind::Pillichshammer => "beta",
        _ => "s",
    }
}

fn json_u64(v: u64) -> Value {
    if v > JSON_SAFE_INT {
        Value::String(v.to_string())
    } else {
        json!(v)
    }
}

fn json_rational(q: &ExactRational) -> Value {
    if q.is_integer() {
        if let Some(v) = q.numer().to_u64() {
            return json_u64(v);
        }
    }
    Value::String(q.to_string())
}

fn to_json(v: &impl Serialize) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Failure::usage(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::usage(e.to_string()))
}

fn plain_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut s = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(s, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
    s
}

enum Computed {
    Exact(ExactRational),
    Real(Real),
}

impl Computed {
    fn text(&self) -> String {
        match self {
            Computed::Exact(q) => q.to_string(),
            Computed::Real(r) => r.to_decimal_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Computed::Exact(q) => json_rational(q),
            Computed::Real(r) => Value::String(r.to_decimal_string()),
        }
    }
}

fn integer(v: crate::Natural) -> ExactRational {
    BigRational::from_integer(BigInt::from(v))
}

fn integer_valued(kind: SumKind, p: u32) -> bool {
    matches!(kind, SumKind::DivisorWeighted) || (kind == SumKind::FracPower && p >= 1)
}

fn evaluate(kind: SumKind, n: u64, p: u32, mode: Mode, precision: u32) -> crate::Result<Computed> {
    use Computed::{Exact, Real as R};
    Ok(match mode {
        Mode::Exact => Exact(match kind {
            SumKind::FracPower => exact::f_s_naive(n, p)?,
            SumKind::Transform if p == 0 => exact::phi_s_naive(n, 0)?,
            SumKind::Transform => fastsum::phi_s_fast(n, p)?,
            SumKind::DivisorWeighted => integer(fastsum::t_s_fast(n, p)?),
            SumKind::Poussin => exact::poussin_sum(n, u64::from(p))?,
            SumKind::Pillichshammer => exact::pillichshammer_sum(n, p)?,
        }),
        Mode::Fast => Exact(match kind {
            SumKind::FracPower => integer(fastsum::f_s_fast(n, p)?),
            SumKind::Transform => fastsum::phi_s_fast(n, p)?,
            SumKind::DivisorWeighted => integer(fastsum::t_s_fast(n, p)?),
            SumKind::Poussin | SumKind::Pillichshammer => {
                return Err(Error::Unsupported(format!(
                    "{kind} has no block evaluator; use --mode exact or --mode real"
                )))
            }
        }),
        Mode::Real => R(match kind {
            SumKind::FracPower if p == 0 => fastsum::f0_fast_real(n, precision)?,
            SumKind::Transform if p >= 1 => fastsum::phi_s_real(n, p, precision)?,
            SumKind::Poussin => fastsum::poussin_sum_real(n, u64::from(p), precision)?,
            SumKind::Pillichshammer => fastsum::pillichshammer_sum_real(n, p, precision)?,
            _ => asym::sum_value(kind, n, p, precision)?.value,
        }),
    })
}

/// Mode used when `--mode` is absent: block evaluators for integer-valued
/// sums, exact rationals up to [`EXACT_RATIONAL_LIMIT`], certified reals above.
fn default_mode(kind: SumKind, n: u64, p: u32) -> Mode {
    if integer_valued(kind, p) {
        Mode::Fast
    } else if n <= EXACT_RATIONAL_LIMIT || (kind == SumKind::Transform && p == 0) {
        Mode::Exact
    } else {
        Mode::Real
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Exact => "exact",
        Mode::Fast => "fast",
        Mode::Real => "real",
    }
}

fn run_compute(a: &ComputeArgs) -> CliResult<String> {
    let (kind, p) = parameter(&a.sum)?;
    let precision = resolve_precision(&a.common, DEFAULT_PRECISION)?;
    let mode = a.mode.unwrap_or_else(|| default_mode(kind, a.n, p));
    let value = evaluate(kind, a.n, p, mode, precision)?;
    Ok(match a.format {
        Format::Plain => format!("{}\n", value.text()),
        Format::Csv => csv_text(
            &["kind", "n", param_name(kind), "mode", "value"],
            &[vec![
                kind.to_string(),
                a.n.to_string(),
                p.to_string(),
                mode_name(mode).into(),
                value.text(),
            ]],
        )?,
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                kind: String,
                n: Value,
                parameter: String,
                value_of_parameter: u32,
                mode: &'static str,
                value: Value,
            }
            to_json(&Out {
                kind: kind.to_string(),
                n: json_u64(a.n),
                parameter: param_name(kind).into(),
                value_of_parameter: p,
                mode: mode_name(mode),
                value: value.json(),
            })?
        }
    })
}

fn parse_grid_list(spec: &str) -> CliResult<Vec<u64>> {
    let mut grid = Vec::new();
    let bad = |item: &str| Failure::usage(format!("bad grid item {item:?}"));
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| bad(item))?;
            let hi: u64 = hi.trim().parse().map_err(|_| bad(item))?;
            if lo > hi || hi - lo > 10_000_000 {
                return Err(bad(item));
            }
            grid.extend(lo..=hi);
        } else {
            grid.push(item.parse().map_err(|_| bad(item))?);
        }
    }
    Ok(grid)
}

fn resolve_grid(g: &GridArgs) -> CliResult<Vec<u64>> {
    let grid = if let Some(n) = g.n {
        vec![n]
    } else if let Some(spec) = &g.grid {
        parse_grid_list(spec)?
    } else if let (Some(lo), Some(hi)) = (g.n_min, g.n_max) {
        asym::geometric_grid(lo, hi, g.grid_ratio).map_err(|e| Failure::usage(e.to_string()))?
    } else {
        return Err(Failure::usage("give --n, --grid or --n-min/--n-max"));
    };
    if grid.first() == Some(&0) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::usage(
            "grid points must be positive and strictly increasing",
        ));
    }
    Ok(grid)
}

fn default_table_precision(kind: SumKind, p: u32, grid: &[u64]) -> u32 {
    let top = grid.last().copied().unwrap_or(1);
    DEFAULT_PRECISION.max(zeta::required_precision(asym::law_power(kind, p), top) + 5)
}

/// Column names of `verify` tables.
pub const TABLE_COLUMNS: [&str; 6] = [
    "n",
    "value",
    "normalized",
    "constant",
    "error",
    "error_times_sqrt_n",
];

fn row_cells(r: &ConvergenceRow, rational_values: bool) -> Vec<String> {
    vec![
        r.n.to_string(),
        match &r.exact {
            Some(q) if rational_values => q.to_string(),
            _ => r.value.to_decimal_string(),
        },
        r.normalized.to_decimal_string(),
        r.constant.to_decimal_string(),
        r.error.to_decimal_string(),
        r.scaled_error.to_decimal_string(),
    ]
}

fn run_verify(a: &VerifyArgs) -> CliResult<String> {
    let (kind, p) = parameter(&a.sum)?;
    let grid = resolve_grid(&a.grid)?;
    let precision = resolve_precision(&a.common, default_table_precision(kind, p, &grid))?;
    let rows = asym::convergence_table(kind, p, &grid, precision)?;
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| row_cells(r, a.format != Format::Plain))
        .collect();
    Ok(match a.format {
        Format::Csv => csv_text(&TABLE_COLUMNS, &cells)?,
        Format::Plain => plain_text(&TABLE_COLUMNS, &cells),
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                n: Value,
                value: Value,
                normalized: String,
                constant: String,
                error: String,
                error_times_sqrt_n: String,
                predicted: String,
            }
            #[derive(Serialize)]
            struct Out {
                kind: String,
                parameter: String,
                value_of_parameter: u32,
                law: &'static str,
                normalization_exponent: f64,
                precision: u32,
                rows: Vec<Row>,
            }
            let json_rows = rows
                .iter()
                .zip(&cells)
                .map(|(r, c)| Row {
                    n: json_u64(r.n),
                    value: match &r.exact {
                        Some(q) => json_rational(q),
                        None => Value::String(c[1].clone()),
                    },
                    normalized: c[2].clone(),
                    constant: c[3].clone(),
                    error: c[4].clone(),
                    error_times_sqrt_n: c[5].clone(),
                    predicted: (&r.constant * asym::law_scale(kind, r.n, p, precision))
                        .to_decimal_string(),
                })
                .collect();
            to_json(&Out {
                kind: kind.to_string(),
                parameter: param_name(kind).into(),
                value_of_parameter: p,
                law: asym::law_label(kind, p),
                normalization_exponent: asym::law_power(kind, p),
                precision,
                rows: json_rows,
            })?
        }
    })
}

/// Reads `n,residual` pairs from a CSV fixture with a header row.
fn read_fixture(path: &PathBuf) -> CliResult<Vec<(u64, Real)>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Failure::usage(format!("cannot read fixture {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Failure::usage(format!("fixture row {}: {e}", i + 1)))?;
        let field = |k: usize| rec.get(k).map(str::trim).unwrap_or("");
        let n: u64 = field(0)
            .parse()
            .map_err(|_| Failure::usage(format!("fixture row {}: bad n {:?}", i + 1, field(0))))?;
        let r =
            Real::parse(field(1), DEFAULT_PRECISION).map_err(|e| Failure::usage(e.to_string()))?;
        points.push((n, r));
    }
    Ok(points)
}

fn run_fit(a: &FitArgs) -> CliResult<String> {
    let (points, grid) = if let Some(path) = &a.fixture {
        let points = read_fixture(path)?;
        let grid: Vec<u64> = points.iter().map(|(n, _)| *n).collect();
        (points, grid)
    } else {
        let (kind, p) = parameter(&a.sum)?;
        let grid = resolve_grid(&a.grid)?;
        if grid.len() < 3 {
            return Err(Error::InsufficientData {
                usable: grid.len(),
                required: 3,
            }
            .into());
        }
        let precision = resolve_precision(&a.common, default_table_precision(kind, p, &grid))?;
        let samples = asym::residuals(kind, p, &grid, precision)?;
        let points = samples.into_iter().map(|r| (r.n, r.residual)).collect();
        (points, grid)
    };
    let fit = asym::fit_residuals(&points)?;
    #[derive(Serialize)]
    struct Out {
        theta_hat: f64,
        log_c: f64,
        r_squared: f64,
        dropped_points: u64,
        grid: Vec<Value>,
    }
    to_json(&Out {
        theta_hat: fit.theta_hat,
        log_c: fit.log_c,
        r_squared: fit.r_squared,
        dropped_points: fit.dropped_points,
        grid: grid.into_iter().map(json_u64).collect(),
    })
}

fn run_bench(a: &BenchArgs) -> CliResult<String> {
    if a.kind != KindArg::T {
        return Err(
            Error::Unsupported("bench times the T_s evaluators only (--kind t)".into()).into(),
        );
    }
    resolve_precision(&a.common, DEFAULT_PRECISION)?;
    let start = Instant::now();
    let (fast_value, fast_ops) = fastsum::t_s_fast_counted(a.n, a.s)?;
    let fast_seconds = start.elapsed().as_secs_f64();

    #[derive(Serialize)]
    struct Timing {
        wall_seconds: f64,
        ops: Value,
    }
    #[derive(Serialize)]
    struct Out {
        kind: String,
        n: Value,
        s: u32,
        fast: Timing,
        naive: Option<Timing>,
        naive_note: Option<String>,
        speedup: Option<f64>,
        results_equal: Option<bool>,
        value: Value,
    }
    let value = json_rational(&integer(fast_value.clone()));
    let mut out = Out {
        kind: SumKind::DivisorWeighted.to_string(),
        n: json_u64(a.n),
        s: a.s,
        fast: Timing {
            wall_seconds: fast_seconds,
            ops: json_u64(fast_ops),
        },
        naive: None,
        naive_note: None,
        speedup: None,
        results_equal: None,
        value,
    };
    if a.n > a.naive_cap {
        out.naive_note = Some(format!(
            "naive evaluator skipped: n exceeds the cap {}",
            a.naive_cap
        ));
    } else {
        let start = Instant::now();
        let naive_value = exact::t_s_naive(a.n, a.s)?;
        let naive_seconds = start.elapsed().as_secs_f64();
        let equal = naive_value == fast_value;
        if !equal {
            return Err(Failure {
                code: EXIT_DOMAIN,
                message: format!("naive and block evaluators disagree at n = {}", a.n),
            });
        }
        out.naive = Some(Timing {
            wall_seconds: naive_seconds,
            ops: json_u64(fastsum::t_s_naive_ops(a.n, a.s)),
        });
        out.speedup = Some(naive_seconds / fast_seconds.max(1e-9));
        out.results_equal = Some(equal);
    }
    to_json(&out)
}

fn run_constants(a: &ConstantsArgs) -> CliResult<String> {
    let precision = resolve_precision(&a.common, DEFAULT_PRECISION)?;
    let mut rows: Vec<(String, String)> = Vec::new();
    if let Some(k) = a.kind {
        let (kind, p) = parameter_of(k, a.s, a.w, a.beta)?;
        let c = zeta::theorem_constant(kind, p, precision)?;
        rows.push((
            format!("{kind}[{}={p}]", param_name(kind)),
            c.to_decimal_string(),
        ));
    } else {
        if a.s.is_some() || a.w.is_some() || a.beta.is_some() {
            return Err(Failure::usage("--s, --w and --beta need --kind"));
        }
        rows.push((
            "gamma".into(),
            zeta::euler_gamma(precision)?.to_decimal_string(),
        ));
        for s in 2..=6 {
            rows.push((
                format!("zeta({s})"),
                zeta::zeta_int(s, precision)?.to_decimal_string(),
            ));
        }
        for beta in [2i64, 3] {
            let a = BigRational::new(1.into(), beta.into());
            rows.push((
                format!("gamma_1/{beta}"),
                zeta::gen_gamma(&a, precision)?.to_decimal_string(),
            ));
        }
        let table: [(SumKind, &[u32]); 5] = [
            (SumKind::FracPower, &[0, 1, 2, 3]),
            (SumKind::Transform, &[1, 2, 3]),
            (SumKind::DivisorWeighted, &[1, 2]),
            (SumKind::Poussin, &[1]),
            (SumKind::Pillichshammer, &[2, 3]),
        ];
        for (kind, params) in table {
            for &p in params {
                let c = zeta::theorem_constant(kind, p, precision)?;
                rows.push((
                    format!("{kind}[{}={p}]", param_name(kind)),
                    c.to_decimal_string(),
                ));
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|(k, v)| vec![k.clone(), v.clone()])
        .collect();
    Ok(match a.format {
        Format::Plain => plain_text(&["name", "value"], &cells),
        Format::Csv => csv_text(&["name", "value"], &cells)?,
        Format::Json => {
            #[derive(Serialize)]
            struct Entry {
                name: String,
                value: String,
            }
            let entries: Vec<Entry> = rows
                .into_iter()
                .map(|(name, value)| Entry { name, value })
                .collect();
            to_json(&json!({ "precision": precision, "constants": entries }))?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["fracsum"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn compute_examples() {
        assert_eq!(
            call(&["compute", "--kind", "f", "--n", "10", "--s", "0", "--mode", "exact"]).1,
            "577/252\n"
        );
        assert_eq!(
            call(&["compute", "--kind", "phi", "--n", "1", "--s", "3"]).1,
            "0\n"
        );
        assert_eq!(
            call(&["compute", "--kind", "t", "--n", "10", "--s", "0"]).1,
            "27\n"
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["compute", "--kind", "f", "--n", "0"]).0, EXIT_DOMAIN);
        assert_eq!(
            call(&["compute", "--kind", "f", "--n", "10", "--w", "2"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            call(&["verify", "--n", "10", "--n-min", "1", "--n-max", "9"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["fit", "--grid", "1024,2048"]).0, EXIT_INSUFFICIENT);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
        let (code, _, err) = call(&[
            "compute", "--kind", "f", "--n", "10", "--s", "0", "--mode", "fast",
        ]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("unsupported"), "{err}");
    }

    #[test]
    fn json_large_integers_are_strings() {
        assert_eq!(json_u64(1 << 53), json!(9007199254740992u64));
        assert_eq!(json_u64((1 << 53) + 1), json!("9007199254740993"));
        let q = BigRational::new(3.into(), 4.into());
        assert_eq!(json_rational(&q), json!("3/4"));
    }

    #[test]
    fn grid_lists() {
        assert_eq!(
            parse_grid_list("10, 100,1000").unwrap(),
            vec![10, 100, 1000]
        );
        assert_eq!(parse_grid_list("1..3,7").unwrap(), vec![1, 2, 3, 7]);
        assert!(parse_grid_list("5..1").is_err());
        assert!(parse_grid_list("x").is_err());
    }

    #[test]
    fn default_modes() {
        assert_eq!(
            default_mode(SumKind::DivisorWeighted, 1 << 40, 0),
            Mode::Fast
        );
        assert_eq!(default_mode(SumKind::FracPower, 10, 0), Mode::Exact);
        assert_eq!(default_mode(SumKind::FracPower, 10_000_000, 0), Mode::Real);
        assert_eq!(default_mode(SumKind::FracPower, 10_000_000, 2), Mode::Fast);
    }
}
