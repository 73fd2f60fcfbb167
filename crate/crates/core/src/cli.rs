//! Configuration and command runners behind the `euclid-pt` binary.
//!
//! Every option can come from a `--config` JSON file or a flag; flags win. Floats are printed
//! as `%.12e`. Exit codes: 0 success, 1 configuration error, 2 undefined Dyson map or
//! degenerate couplings, 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::PtSymmetryE2;
use crate::dyson::{self, ep_predictions_pt5, hermitize, reduce_pt5_three_param, FreeParams, Pt5Axis};
use crate::e3::{self, oracle, DysonParamsE3, Generator3, PtSymmetryE3};
use crate::error::Error;
use crate::mathieu::{self, MathieuClass, Parity};
use crate::spectral::{
    eigen_spectrum_with, find_exceptional_points, sweep, Axis, Family, Statistics, SweepOptions, SweepTemplate,
    DEFAULT_RTOL, DEFAULT_TRUNCATION,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Lib(e) => match e {
                Error::InvalidInput(_) => 1,
                Error::MapUndefined { .. } | Error::DegenerateCouplings(_) => 2,
                Error::ConvergenceFailure(_) | Error::TrackingAmbiguity { .. } | Error::DegreeOverflow { .. } => 3,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Parser, Debug)]
#[command(name = "euclid-pt", version, about = "PT-symmetric Euclidean-algebra Hamiltonians: Dyson maps, spectra, exceptional points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the hermiticity constraints and report the Dyson map and Hermitian partner (JSON).
    Transform(RunConfig),
    /// Eigenvalues at one point or along a sweep (CSV).
    Spectrum(RunConfig),
    /// Exceptional points along a sweep (JSON).
    Ep(RunConfig),
    /// Even/odd eigenfunction intensities of the three-parameter PT5 family (CSV).
    Intensity(RunConfig),
    /// Mathieu characteristic values, functions and imaginary-q collisions.
    Mathieu {
        #[command(subcommand)]
        action: MathieuAction,
    },
    /// E3 adjoint coefficient table, optionally checked against the 4×4 oracle (JSON).
    #[command(name = "e3-adjoint")]
    E3Adjoint(RunConfig),
}

#[derive(Subcommand, Debug)]
pub enum MathieuAction {
    /// Characteristic values (CSV: order, re, im).
    Char(RunConfig),
    /// Collisions along q = i t for t ∈ (0, max-q] (JSON).
    Eps(RunConfig),
    /// Samples of a periodic Mathieu function (CSV: z, re, im).
    Function(RunConfig),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Transform(_) => "transform",
            Command::Spectrum(_) => "spectrum",
            Command::Ep(_) => "ep",
            Command::Intensity(_) => "intensity",
            Command::Mathieu { action: MathieuAction::Char(_) } => "mathieu char",
            Command::Mathieu { action: MathieuAction::Eps(_) } => "mathieu eps",
            Command::Mathieu { action: MathieuAction::Function(_) } => "mathieu function",
            Command::E3Adjoint(_) => "e3-adjoint",
        }
    }

    fn config(&self) -> &RunConfig {
        match self {
            Command::Transform(c)
            | Command::Spectrum(c)
            | Command::Ep(c)
            | Command::Intensity(c)
            | Command::E3Adjoint(c)
            | Command::Mathieu { action: MathieuAction::Char(c) | MathieuAction::Eps(c) | MathieuAction::Function(c) } => c,
        }
    }
}

/// All options; unset fields fall back to the config file, then to per-command defaults.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// JSON file with any of these options (keys use underscores).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Command name, only meaningful inside a config file; must match the invoked command.
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,

    /// PT1..PT5 (E2) or PT1..PT4 (e3-adjoint).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<String>,
    /// general | pt5-three | pt5-complex
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,

    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu4: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu5: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu6: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu7: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu8: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu9: Option<f64>,
    /// Free Dyson parameter λ (PT1, PT2).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,

    /// Sector s: wavenumbers n + s/2 (0 bosonic, 1 fermionic).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<f64>,
    /// Fourier cutoff N (modes −N..N).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// axis:lo:hi:steps, axis one of mu1..mu9 or s.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<String>,
    /// Number of lowest levels reported and tracked.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    /// Bisection width on the sweep axis for exceptional points.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ep_tol: Option<f64>,
    /// Relative tolerance on |Im E| for reality flags.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    /// even | odd: use the Mathieu route restricted to one parity.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<String>,

    /// Mathieu order n (intensity: pairs a_n with b_n) or index within a class.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Grid points on [0, 2π).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Mathieu parameter as re,im.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    /// even-pi | odd-pi | even-2pi | odd-2pi | even-half | odd-half
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// Upper end of the imaginary-q scan.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_q: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_z: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_plus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_minus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_z: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_plus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_minus: Option<f64>,
    /// Compare the table with exp(X)·G·exp(−X) in the 4×4 representation.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<bool>,
    /// Also transform the PT1-type E3 Hamiltonian built from mu1..mu9.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_tilde: Option<bool>,

    /// csv | json (tabular commands).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Also write a Python/matplotlib script plotting the output file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<PathBuf>,
}

macro_rules! overlay {
    ($flags:expr, $file:expr; $($f:ident),* $(,)?) => {
        RunConfig { $($f: $flags.$f.clone().or($file.$f.clone()),)* }
    };
}

impl RunConfig {
    /// Flags over file values.
    pub fn overlay(&self, file: &RunConfig) -> RunConfig {
        overlay!(self, file;
            config, subcommand, symmetry, family, mu1, mu2, mu3, mu4, mu5, mu6, mu7, mu8, mu9, lambda,
            sector, truncation, sweep, levels, ep_tol, rtol, parity, order, points, q, class, count, max_q,
            lambda_z, lambda_plus, lambda_minus, kappa_z, kappa_plus, kappa_minus, check, h_tilde,
            format, output, plot_script)
    }

    pub fn resolve(&self, command: &str) -> CliResult<RunConfig> {
        let Some(path) = &self.config else { return Ok(self.clone()) };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
        let file: RunConfig = serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        if let Some(sub) = &file.subcommand {
            if sub != command {
                return Err(config_err(format!("config file is for `{sub}`, invoked `{command}`")));
            }
        }
        Ok(self.overlay(&file))
    }

    fn mu(&self) -> [Option<f64>; 9] {
        [self.mu1, self.mu2, self.mu3, self.mu4, self.mu5, self.mu6, self.mu7, self.mu8, self.mu9]
    }

    fn sector(&self) -> f64 {
        self.sector.unwrap_or(0.0)
    }

    fn statistics(&self) -> CliResult<Statistics> {
        match self.sector() {
            s if s == 0.0 => Ok(Statistics::Bosonic),
            s if s == 1.0 => Ok(Statistics::Fermionic),
            s => Err(config_err(format!("the Mathieu route needs sector 0 or 1, got {s}"))),
        }
    }

    fn truncation(&self) -> CliResult<usize> {
        match self.truncation.unwrap_or(DEFAULT_TRUNCATION) {
            0 => Err(config_err("truncation must be positive")),
            n => Ok(n),
        }
    }

    fn levels(&self) -> CliResult<usize> {
        match self.levels.unwrap_or(7) {
            0 => Err(config_err("levels must be positive")),
            n => Ok(n),
        }
    }

    fn parity(&self) -> CliResult<Option<Parity>> {
        self.parity
            .as_deref()
            .map(|p| match p.to_ascii_lowercase().as_str() {
                "even" => Ok(Parity::Even),
                "odd" => Ok(Parity::Odd),
                _ => Err(config_err(format!("parity must be even or odd, got {p:?}"))),
            })
            .transpose()
    }

    fn format(&self) -> CliResult<OutputFormat> {
        match self.format.as_deref().unwrap_or("csv") {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            f => Err(config_err(format!("format must be csv or json, got {f:?}"))),
        }
    }

    fn family(&self) -> CliResult<Family> {
        self.family_or("general")
    }

    fn family_or(&self, default: &str) -> CliResult<Family> {
        let mu = self.mu();
        let name = self.family.as_deref().unwrap_or(default);
        let only = |allowed: &[usize]| -> CliResult<()> {
            for (i, m) in mu.iter().enumerate() {
                if m.is_some() && !allowed.contains(&(i + 1)) {
                    return Err(config_err(format!("mu{} is not a parameter of family {name}", i + 1)));
                }
            }
            Ok(())
        };
        match name {
            "general" => {
                let symmetry = parse_e2_symmetry(self.symmetry.as_deref())?;
                let mut full = [0.0; 9];
                full[0] = 1.0;
                for (i, m) in mu.iter().enumerate() {
                    if let Some(x) = m {
                        full[i] = *x;
                    }
                }
                Ok(Family::General { symmetry, mu: full })
            }
            "pt5-three" => {
                only(&[3, 4, 7])?;
                Ok(Family::Pt5ThreeParam { mu3: self.mu3.unwrap_or(0.0), mu4: self.mu4.unwrap_or(0.0), mu7: self.mu7.unwrap_or(0.0) })
            }
            "pt5-complex" => {
                only(&[4, 6])?;
                Ok(Family::Pt5ComplexMathieu { mu4: self.mu4.unwrap_or(0.0), mu6: self.mu6.unwrap_or(0.0) })
            }
            other => Err(config_err(format!("unknown family {other:?}; expected general, pt5-three or pt5-complex"))),
        }
    }

    fn sweep_spec(&self) -> CliResult<Option<SweepSpec>> {
        self.sweep.as_deref().map(SweepSpec::parse).transpose()
    }

    fn dyson_e3(&self) -> DysonParamsE3 {
        DysonParamsE3 {
            lambda_z: self.lambda_z.unwrap_or(0.0),
            lambda_plus: self.lambda_plus.unwrap_or(0.0),
            lambda_minus: self.lambda_minus.unwrap_or(0.0),
            kappa_z: self.kappa_z.unwrap_or(0.0),
            kappa_plus: self.kappa_plus.unwrap_or(0.0),
            kappa_minus: self.kappa_minus.unwrap_or(0.0),
        }
    }

    fn check_finite(&self) -> CliResult<()> {
        let named = [
            ("mu1", self.mu1),
            ("mu2", self.mu2),
            ("mu3", self.mu3),
            ("mu4", self.mu4),
            ("mu5", self.mu5),
            ("mu6", self.mu6),
            ("mu7", self.mu7),
            ("mu8", self.mu8),
            ("mu9", self.mu9),
            ("lambda", self.lambda),
            ("sector", self.sector),
            ("ep_tol", self.ep_tol),
            ("rtol", self.rtol),
            ("max_q", self.max_q),
            ("lambda_z", self.lambda_z),
            ("lambda_plus", self.lambda_plus),
            ("lambda_minus", self.lambda_minus),
            ("kappa_z", self.kappa_z),
            ("kappa_plus", self.kappa_plus),
            ("kappa_minus", self.kappa_minus),
        ];
        for (name, v) in named {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(config_err(format!("{name} must be finite")));
                }
            }
        }
        for (name, v) in [("ep_tol", self.ep_tol), ("rtol", self.rtol), ("max_q", self.max_q)] {
            if let Some(x) = v {
                if x <= 0.0 {
                    return Err(config_err(format!("{name} must be positive")));
                }
            }
        }
        Ok(())
    }
}

fn parse_e2_symmetry(s: Option<&str>) -> CliResult<PtSymmetryE2> {
    let s = s.ok_or_else(|| config_err("--symmetry is required"))?;
    s.parse().map_err(|e: Error| config_err(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn parse(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [axis, lo, hi, steps] = parts[..] else {
            return Err(config_err(format!("sweep {s:?} must be axis:lo:hi:steps")));
        };
        let axis: Axis = axis.parse().map_err(|e: Error| config_err(e.to_string()))?;
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| config_err(format!("bad number {x:?} in sweep")));
        let (lo, hi) = (num(lo)?, num(hi)?);
        let steps: usize = steps.trim().parse().map_err(|_| config_err(format!("bad step count {steps:?}")))?;
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(config_err("sweep needs finite lo < hi"));
        }
        if steps < 2 {
            return Err(config_err("sweep needs at least 2 steps"));
        }
        Ok(Self { axis, lo, hi, steps })
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps).map(|i| self.lo + (self.hi - self.lo) * i as f64 / n as f64).collect()
    }
}

/// C-style `%.12e`.
pub fn fmt_e(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // −0 prints as 0
    let s = format!("{:.12e}", x + 0.0);
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Pretty JSON whose floats are written with `fmt_e`.
struct CFloatFormatter<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl serde_json::ser::Formatter for CFloatFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_e(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let fmt = CFloatFormatter { inner: serde_json::ser::PrettyFormatter::new() };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
enum Cell {
    Int(i64),
    Float(f64),
}

/// Rows collected in axis order and written once.
#[derive(Clone, Debug, Default)]
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Float(x) => fmt_e(*x),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self, config: &RunConfig) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| {
                        let v = match c {
                            Cell::Int(i) => json!(i),
                            Cell::Float(x) => json!(x),
                        };
                        (h.clone(), v)
                    })
                    .collect::<serde_json::Map<_, _>>();
                serde_json::Value::Object(obj)
            })
            .collect();
        to_json_string(&json!({ "config": config, "columns": self.header, "rows": rows }))
    }
}

enum Output {
    Table(Table),
    Json(String),
}

fn write_to(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn plot_script(data: &Path, header: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Plots {} (first column on the x axis).", data.display());
    let _ = writeln!(s, "import csv\nimport matplotlib.pyplot as plt\n");
    let _ = writeln!(s, "with open({:?}) as f:\n    rows = list(csv.DictReader(f))", data.display().to_string());
    let _ = writeln!(s, "columns = {header:?}");
    s.push_str(
        r#"x = columns[0]
group = "level_index" if "level_index" in columns else None
ys = [c for c in columns[1:] if c not in ("level_index", "order", "broken", "real")]
fig, axes = plt.subplots(len(ys), 1, sharex=True, squeeze=False)
for ax, y in zip(axes[:, 0], ys):
    keys = sorted({r[group] for r in rows}, key=int) if group else [None]
    for k in keys:
        sel = [r for r in rows if group is None or r[group] == k]
        ax.plot([float(r[x]) for r in sel], [float(r[y]) for r in sel], lw=1)
    ax.set_ylabel(y)
axes[-1, 0].set_xlabel(x)
plt.tight_layout()
plt.show()
"#,
    );
    s
}

fn emit(cfg: &RunConfig, out: Output) -> CliResult<()> {
    let text = match &out {
        Output::Table(t) => match cfg.format()? {
            OutputFormat::Csv => t.to_csv(),
            OutputFormat::Json => t.to_json(cfg),
        },
        Output::Json(s) => s.clone(),
    };
    match &cfg.output {
        Some(p) => write_to(p, &text)?,
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io { path: "stdout".into(), source: e })?,
    }
    if let Some(script) = &cfg.plot_script {
        let (Some(data), Output::Table(t)) = (&cfg.output, &out) else {
            return Err(config_err("--plot-script needs --output and a tabular command"));
        };
        write_to(script, &plot_script(data, &t.header))?;
    }
    Ok(())
}

fn validate_plot_script(cfg: &RunConfig) -> CliResult<()> {
    if cfg.plot_script.is_some() && cfg.output.is_none() {
        return Err(config_err("--plot-script needs --output"));
    }
    if cfg.plot_script.is_some() && cfg.format()? == OutputFormat::Json {
        return Err(config_err("--plot-script needs CSV output"));
    }
    Ok(())
}

fn cmd_transform(cfg: &RunConfig) -> CliResult<Output> {
    let family = cfg.family.as_deref().unwrap_or("general");
    let mut report = serde_json::Map::new();
    report.insert("config".into(), json!(cfg));
    let result = match family {
        "pt5-three" => {
            if cfg.symmetry.as_deref().is_some_and(|s| !s.eq_ignore_ascii_case("PT5")) {
                return Err(config_err("family pt5-three is PT5-symmetric"));
            }
            let Family::Pt5ThreeParam { mu3, mu4, mu7 } = cfg.family_or("pt5-three")? else { unreachable!() };
            let r = hermitize(PtSymmetryE2::PT5, &dyson::pt5_three_param_free(mu3, mu4, mu7))?;
            let red = reduce_pt5_three_param(mu3, mu4, mu7)?;
            report.insert("reduction".into(), json!({ "alpha": red.alpha, "beta": red.beta, "gamma": red.gamma }));
            r
        }
        "general" => {
            let s = parse_e2_symmetry(cfg.symmetry.as_deref())?;
            let (required, optional) = dyson::free_parameter_names(s);
            let mut free = FreeParams::new();
            let mut defaulted = Vec::new();
            for (i, m) in cfg.mu().iter().enumerate() {
                let name = format!("mu{}", i + 1);
                if let Some(x) = m {
                    if !required.contains(&name.as_str()) && !optional.contains(&name.as_str()) {
                        return Err(config_err(format!("{name} is fixed by the {s} constraints; free parameters: {}", required.join(", "))));
                    }
                    free.insert(name, *x);
                }
            }
            if let Some(l) = cfg.lambda {
                if !required.contains(&"lambda") {
                    return Err(config_err(format!("lambda is fixed by the {s} constraints")));
                }
                free.insert("lambda".into(), l);
            }
            for name in required {
                if !free.contains_key(*name) {
                    let default = if *name == "mu1" { 1.0 } else { 0.0 };
                    free.insert(name.to_string(), default);
                    defaulted.push(name.to_string());
                }
            }
            report.insert("defaulted".into(), json!(defaulted));
            hermitize(s, &free)?
        }
        other => return Err(config_err(format!("transform supports families general and pt5-three, got {other:?}"))),
    };
    let original = result.original();
    let original_residual = original.hermiticity_residual();
    report.insert("symmetry".into(), json!(result.symmetry.name()));
    report.insert("dyson".into(), json!(result.params));
    report.insert("constrained_mu".into(), json!(result.constrained_mu));
    report.insert("coth_rhs".into(), json!(result.coth_rhs));
    report.insert("h".into(), json!(result.h));
    report.insert("h_display".into(), json!(result.h.to_string()));
    report.insert("hermiticity_residual".into(), json!(result.residual));
    report.insert("original_hermiticity_residual".into(), json!(original_residual));
    if original_residual < 1e-12 {
        report.insert("notice".into(), json!("the constrained H is already Hermitian; eta maps it to another Hermitian operator"));
    }
    Ok(Output::Json(to_json_string(&serde_json::Value::Object(report))))
}

fn mathieu_route_levels(family: &Family, statistics: Statistics, parity: Option<Parity>, count: usize) -> CliResult<Vec<C64>> {
    Ok(match family {
        Family::Pt5ThreeParam { mu3, mu4, mu7 } => mathieu::pt5_mathieu_levels(*mu3, *mu4, *mu7, statistics, parity, count)?,
        Family::Pt5ComplexMathieu { mu4, .. } => mathieu::pt5_complex_levels(*mu4, statistics, parity, count)?,
        _ => return Err(config_err("--parity selects the Mathieu route, available for families pt5-three and pt5-complex")),
    })
}

fn cmd_spectrum(cfg: &RunConfig) -> CliResult<Output> {
    let family = cfg.family()?;
    let levels = cfg.levels()?;
    let rtol = cfg.rtol.unwrap_or(DEFAULT_RTOL);
    let sweep_spec = cfg.sweep_spec()?;
    let template = SweepTemplate::new(family.clone()).with_sector(cfg.sector()).with_truncation(cfg.truncation()?);
    if let Some(parity) = cfg.parity()? {
        let statistics = cfg.statistics()?;
        let points: Vec<(f64, Family)> = match sweep_spec {
            None => vec![(f64::NAN, family)],
            Some(sp) => {
                let Axis::Mu(i) = sp.axis else { return Err(config_err("the Mathieu route sweeps couplings only")) };
                sp.grid().into_iter().map(|x| family.with_mu(i, x).map(|f| (x, f))).collect::<Result<_, _>>()?
            }
        };
        let values: Vec<Vec<C64>> = points
            .par_iter()
            .map(|(_, f)| mathieu_route_levels(f, statistics, Some(parity), levels))
            .collect::<CliResult<_>>()?;
        let mut table = match sweep_spec {
            Some(_) => Table::new(&["axis_value", "level_index", "re_E", "im_E"]),
            None => Table::new(&["level_index", "re_E", "im_E"]),
        };
        for ((x, _), es) in points.iter().zip(&values) {
            for (k, e) in es.iter().enumerate() {
                let mut row = Vec::new();
                if sweep_spec.is_some() {
                    row.push(Cell::Float(*x));
                }
                row.extend([Cell::Int(k as i64), Cell::Float(e.re), Cell::Float(e.im)]);
                table.rows.push(row);
            }
        }
        return Ok(Output::Table(table));
    }
    match sweep_spec {
        None => {
            let spectrum = eigen_spectrum_with(&template.problem(), rtol)?;
            let mut table = Table::new(&["level_index", "re_E", "im_E", "real"]);
            for (k, e) in spectrum.lowest(levels).iter().enumerate() {
                let real = spectrum.reality_flags[k];
                table.rows.push(vec![Cell::Int(k as i64), Cell::Float(e.re), Cell::Float(e.im), Cell::Int(real as i64)]);
            }
            Ok(Output::Table(table))
        }
        Some(sp) => {
            let options = SweepOptions { levels, rtol, ..SweepOptions::default() };
            let result = sweep(&template, sp.axis, sp.lo, sp.hi, sp.steps, options)?;
            let mut table = Table::new(&["axis_value", "level_index", "re_E", "im_E", "broken"]);
            for (p, x) in result.values.iter().enumerate() {
                for (k, curve) in result.curves.iter().enumerate() {
                    let e = curve[p];
                    table.rows.push(vec![
                        Cell::Float(*x),
                        Cell::Int(k as i64),
                        Cell::Float(e.re),
                        Cell::Float(e.im),
                        Cell::Int(result.broken[p] as i64),
                    ]);
                }
            }
            Ok(Output::Table(table))
        }
    }
}

fn cmd_ep(cfg: &RunConfig) -> CliResult<Output> {
    let family = cfg.family()?;
    let sp = cfg.sweep_spec()?.ok_or_else(|| config_err("ep needs --sweep axis:lo:hi:steps"))?;
    let options = SweepOptions { levels: cfg.levels()?, rtol: cfg.rtol.unwrap_or(DEFAULT_RTOL), ..SweepOptions::default() };
    let template = SweepTemplate::new(family.clone()).with_sector(cfg.sector()).with_truncation(cfg.truncation()?);
    let result = sweep(&template, sp.axis, sp.lo, sp.hi, sp.steps, options)?;
    let eps = find_exceptional_points(&result, cfg.ep_tol.unwrap_or(1e-9))?;
    let mut report = serde_json::Map::new();
    report.insert("config".into(), json!(cfg));
    report.insert("axis".into(), json!(sp.axis.to_string()));
    report.insert("exceptional_points".into(), json!(eps));
    report.insert("max_abs_im".into(), json!(result.max_abs_im()));
    if let (Family::Pt5ThreeParam { mu3, mu4, mu7 }, Axis::Mu(i)) = (&family, sp.axis) {
        let axis = match i {
            3 => Some(Pt5Axis::Mu3),
            4 => Some(Pt5Axis::Mu4),
            7 => Some(Pt5Axis::Mu7),
            _ => None,
        };
        if let Some(axis) = axis {
            let predicted: Vec<f64> =
                ep_predictions_pt5(*mu3, *mu4, *mu7, axis).into_iter().filter(|x| *x >= sp.lo && *x <= sp.hi).collect();
            report.insert("predicted".into(), json!(predicted));
        }
    }
    Ok(Output::Json(to_json_string(&serde_json::Value::Object(report))))
}

fn cmd_intensity(cfg: &RunConfig) -> CliResult<Output> {
    let Family::Pt5ThreeParam { mu3, mu4, mu7 } = cfg.family_or("pt5-three")? else {
        return Err(config_err("intensity needs --family pt5-three"));
    };
    let order = cfg.order.unwrap_or(1);
    let points = cfg.points.unwrap_or(360);
    if points < 4 {
        return Err(config_err("points must be at least 4"));
    }
    let sweep_spec = cfg.sweep_spec()?;
    let grid: Vec<(f64, f64, f64, f64)> = match sweep_spec {
        None => vec![(f64::NAN, mu3, mu4, mu7)],
        Some(sp) => {
            let set = |x: f64| match sp.axis {
                Axis::Mu(3) => Ok((x, x, mu4, mu7)),
                Axis::Mu(4) => Ok((x, mu3, x, mu7)),
                Axis::Mu(7) => Ok((x, mu3, mu4, x)),
                a => Err(config_err(format!("intensity sweeps mu3, mu4 or mu7, not {a}"))),
            };
            sp.grid().into_iter().map(set).collect::<CliResult<_>>()?
        }
    };
    let profiles: Vec<mathieu::IntensityProfile> = grid
        .par_iter()
        .map(|(_, a, b, c)| mathieu::pt5_intensity(*a, *b, *c, order, points))
        .collect::<Result<_, _>>()?;
    let mut header = vec!["theta", "even", "odd", "sum", "shifted_sum"];
    if sweep_spec.is_some() {
        header.insert(0, "axis_value");
    }
    let mut table = Table::new(&header);
    for ((x, ..), prof) in grid.iter().zip(&profiles) {
        let (sum, shifted) = (prof.sum(), prof.shifted_sum());
        for j in 0..prof.theta.len() {
            let mut row = Vec::new();
            if sweep_spec.is_some() {
                row.push(Cell::Float(*x));
            }
            row.extend([prof.theta[j], prof.even[j], prof.odd[j], sum[j], shifted[j]].map(Cell::Float));
            table.rows.push(row);
        }
        let (dev, theta0) = mathieu::point_symmetry_deviation(&sum);
        let at = if sweep_spec.is_some() { format!(" at {}", fmt_e(*x)) } else { String::new() };
        eprintln!("point-symmetry deviation{at}: {} (theta0 = {})", fmt_e(dev), fmt_e(theta0));
    }
    Ok(Output::Table(table))
}

fn parse_q(s: Option<&str>) -> CliResult<C64> {
    let s = s.ok_or_else(|| config_err("--q re,im is required"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| config_err(format!("bad number {x:?} in q")));
    let q = match s.split_once(',') {
        Some((re, im)) => C64::new(num(re)?, num(im)?),
        None => C64::new(num(s)?, 0.0),
    };
    if !(q.re.is_finite() && q.im.is_finite()) {
        return Err(config_err("q must be finite"));
    }
    Ok(q)
}

fn parse_class(s: Option<&str>) -> CliResult<MathieuClass> {
    s.unwrap_or("even-pi").parse().map_err(|e: Error| config_err(e.to_string()))
}

fn cmd_mathieu_char(cfg: &RunConfig) -> CliResult<Output> {
    let q = parse_q(cfg.q.as_deref())?;
    let cls = parse_class(cfg.class.as_deref())?;
    let count = cfg.count.unwrap_or(8);
    if count == 0 {
        return Err(config_err("count must be positive"));
    }
    let trunc = cfg.truncation.unwrap_or_else(|| mathieu::default_truncation(q, count) + count);
    let values = mathieu::characteristic_values(q, cls, count, trunc)?;
    let mut table = Table::new(&["order", "re", "im"]);
    for (i, a) in values.iter().enumerate() {
        table.rows.push(vec![Cell::Int(cls.order(i) as i64), Cell::Float(a.re), Cell::Float(a.im)]);
    }
    Ok(Output::Table(table))
}

fn cmd_mathieu_eps(cfg: &RunConfig) -> CliResult<Output> {
    let cls = parse_class(cfg.class.as_deref())?;
    let max_q = cfg.max_q.unwrap_or(20.0);
    let eps = mathieu::complex_mathieu_eps_with(max_q, cls, 1e-2, cfg.ep_tol.unwrap_or(1e-10))?;
    let rows: Vec<serde_json::Value> = eps
        .iter()
        .map(|e| {
            json!({
                "q_imag": e.q_imag,
                "a_merge": e.a_merge,
                "energy_quarter_a": e.a_merge / 4.0,
                "orders": [e.orders.0, e.orders.1],
                "bracket_width": e.bracket_width,
            })
        })
        .collect();
    Ok(Output::Json(to_json_string(&json!({ "config": cfg, "class": cls.label(), "exceptional_points": rows }))))
}

fn cmd_mathieu_function(cfg: &RunConfig) -> CliResult<Output> {
    let q = parse_q(cfg.q.as_deref())?;
    let cls = parse_class(cfg.class.as_deref())?;
    let index = cfg.order.unwrap_or(0);
    let points = cfg.points.unwrap_or(361);
    if points < 2 {
        return Err(config_err("points must be at least 2"));
    }
    let trunc = mathieu::default_truncation(q, index + 1) + index + 9;
    let a = mathieu::characteristic_values(q, cls, index + 1, trunc)?[index];
    let z: Vec<f64> = (0..points).map(|i| std::f64::consts::PI * i as f64 / (points - 1) as f64).collect();
    let f = mathieu::mathieu_function(q, a, cls, &z)?;
    let mut table = Table::new(&["z", "re", "im"]);
    for (x, y) in z.iter().zip(&f) {
        table.rows.push(vec![Cell::Float(*x), Cell::Float(y.re), Cell::Float(y.im)]);
    }
    Ok(Output::Table(table))
}

fn cmd_e3_adjoint(cfg: &RunConfig) -> CliResult<Output> {
    let p = cfg.dyson_e3();
    let table = e3::e3_adjoint(&p);
    let mut report = serde_json::Map::new();
    report.insert("config".into(), json!(cfg));
    report.insert("table".into(), json!(table));
    if cfg.check.unwrap_or(false) {
        let mut worst: f64 = 0.0;
        for g in Generator3::ALL {
            let (a, b) = (table.image(g), oracle::adjoint_oracle(&p, g));
            worst = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(worst, f64::max);
        }
        report.insert("oracle_max_deviation".into(), json!(worst));
    }
    if let Some(s) = &cfg.symmetry {
        let s: PtSymmetryE3 = s.parse()?;
        let violations: Vec<String> = s.algebra_violations().iter().map(|(a, b)| format!("[{}, {}]", a.label(), b.label())).collect();
        report.insert("symmetry".into(), json!({ "name": s.to_string(), "preserves_algebra": violations.is_empty(), "violations": violations }));
    }
    if cfg.h_tilde.unwrap_or(false) {
        let mu = cfg.mu().map(|m| m.unwrap_or(0.0));
        let h = e3::build_h_tilde_pt1(mu);
        let t = e3::transform_h_tilde(&p, &h)?;
        report.insert(
            "h_tilde".into(),
            json!({
                "original": h,
                "transformed": t,
                "transformed_display": t.to_string(),
                "pt1_invariant": e3::apply_pt_e3(PtSymmetryE3::PT1, &h).approx_eq(&h, 1e-12),
                "hermiticity_residual": t.hermiticity_residual(),
            }),
        );
    }
    Ok(Output::Json(to_json_string(&serde_json::Value::Object(report))))
}

/// Runs a parsed command; errors carry their exit codes.
pub fn run(cli: &Cli) -> CliResult<()> {
    let command = cli.command.name();
    let cfg = cli.command.config().resolve(command)?;
    cfg.check_finite()?;
    cfg.format()?;
    validate_plot_script(&cfg)?;
    let out = match &cli.command {
        Command::Transform(_) => cmd_transform(&cfg)?,
        Command::Spectrum(_) => cmd_spectrum(&cfg)?,
        Command::Ep(_) => cmd_ep(&cfg)?,
        Command::Intensity(_) => cmd_intensity(&cfg)?,
        Command::Mathieu { action } => match action {
            MathieuAction::Char(_) => cmd_mathieu_char(&cfg)?,
            MathieuAction::Eps(_) => cmd_mathieu_eps(&cfg)?,
            MathieuAction::Function(_) => cmd_mathieu_function(&cfg)?,
        },
        Command::E3Adjoint(_) => cmd_e3_adjoint(&cfg)?,
    };
    emit(&cfg, out)
}

/// Parses arguments, runs, prints errors to stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            if let CliError::Lib(Error::MapUndefined { rhs }) = &e {
                eprintln!("error: Dyson map undefined, coth right-hand side = {}", fmt_e(*rhs));
            } else {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_floats() {
        assert_eq!(fmt_e(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e(-2.5e-3), "-2.500000000000e-03");
        assert_eq!(fmt_e(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e(6.02e123), "6.020000000000e+123");
        assert_eq!(fmt_e(f64::NAN), "nan");
    }

    #[test]
    fn sweep_spec_parsing() {
        let s = SweepSpec::parse("mu3:-4:4:81").unwrap();
        assert_eq!(s.axis, Axis::Mu(3));
        assert_eq!((s.lo, s.hi, s.steps), (-4.0, 4.0, 81));
        assert_eq!(s.grid()[40], 0.0);
        assert!(SweepSpec::parse("mu3:1:0:5").is_err());
        assert!(SweepSpec::parse("mu3:0:1").is_err());
        assert!(SweepSpec::parse("x:0:1:5").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: RunConfig = serde_json::from_str(r#"{"mu3": 1.0, "mu4": 2.0, "family": "pt5-three"}"#).unwrap();
        let flags = RunConfig { mu4: Some(5.0), ..Default::default() };
        let merged = flags.overlay(&file);
        assert_eq!((merged.mu3, merged.mu4), (Some(1.0), Some(5.0)));
        assert_eq!(merged.family.as_deref(), Some("pt5-three"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"mu10": 1.0}"#).is_err());
    }

    #[test]
    fn json_floats_use_c_format() {
        let s = to_json_string(&json!({ "x": 0.5 }));
        assert!(s.contains("5.000000000000e-01"), "{s}");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["x"], 0.5);
    }
}
