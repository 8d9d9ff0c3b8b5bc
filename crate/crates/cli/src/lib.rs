//! Command-line front end: argument and config-file handling, and the
//! four commands `reproduce`, `coeffs`, `propagate` and `sweep`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{Map, Value};

use ppi_core::analysis::{defect_exact_with, sweep, AxisRange, Family, ProbabilityReport};
use ppi_core::localization::{gaussian_coefficients, gaussian_sigmas, LocalizationCoefficients};
use ppi_core::propagation::{density_profile, PropagatedState};
use ppi_core::superposition::build_plus_state;
use ppi_core::{PlusState, QuadratureSpec, Representation, Scenario, Wavefunction};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

const DEFAULT_GAUSSIAN: (f64, f64) = (0.022, 0.8);
const DEFAULT_RECTANGLE_U: f64 = 0.024;
const DEFAULT_PROFILE_POINTS: usize = 401;
const DEFAULT_X_MAX: f64 = 2.0;
const DEFAULT_U_RANGE: (f64, f64, usize) = (0.005, 0.05, 200);
const DEFAULT_CSQ_RANGE: (f64, f64, usize) = (0.3, 1.3, 200);

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ppi_core::Error),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "ppi",
    version,
    about = "Interval probabilities and defect bounds for position-momentum superpositions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandLine,
}

#[derive(Debug, Subcommand)]
pub enum CommandLine {
    /// Full probability report for one scenario.
    Reproduce(Flags),
    /// Localization coefficients, closed form against quadrature.
    Coeffs(Flags),
    /// Density profile at t = mL/B.
    Propagate(Flags),
    /// Defect bound over a (U, |C|^2) grid.
    Sweep(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Reproduce,
    Coeffs,
    Propagate,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Gaussian,
    Rectangle,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Gaussian => Family::Gaussian,
            FamilyArg::Rectangle => Family::Rectangle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every command; each command reads the ones it needs.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// JSON file with any of these settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Uncertainty suppression factor U.
    #[arg(long)]
    pub u: Option<f64>,
    /// Squared coherent spread |C|^2.
    #[arg(long)]
    pub csq: Option<f64>,
    /// Position width of the localized Gaussian, in units of L.
    #[arg(long)]
    pub sigma1: Option<f64>,
    /// Position width of the companion Gaussian, in units of L.
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Number of samples in the density profile.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Absolute and relative quadrature tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Half-width of the density profile, in units of L.
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Profile the initial state instead of the evolved one.
    #[arg(long)]
    pub t0: bool,
    #[arg(long)]
    pub u_min: Option<f64>,
    #[arg(long)]
    pub u_max: Option<f64>,
    #[arg(long)]
    pub u_steps: Option<usize>,
    #[arg(long)]
    pub csq_min: Option<f64>,
    #[arg(long)]
    pub csq_max: Option<f64>,
    #[arg(long)]
    pub csq_steps: Option<usize>,
    /// Sweep only: also write the JSON summary here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<Command>,
    pub family: Option<FamilyArg>,
    pub u: Option<f64>,
    pub csq: Option<f64>,
    pub sigma1: Option<f64>,
    pub sigma2: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub grid_points: Option<usize>,
    pub tolerance: Option<f64>,
    pub x_max: Option<f64>,
    pub t0: Option<bool>,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub u_steps: Option<usize>,
    pub csq_min: Option<f64>,
    pub csq_max: Option<f64>,
    pub csq_steps: Option<usize>,
    pub summary: Option<PathBuf>,
}

impl FromStr for FileConfig {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| usage(format!("config: {e}")))
    }
}

/// How the scenario was specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioSpec {
    Suppression { u: f64, csq: f64 },
    Sigmas { sigma1: f64, sigma2: f64 },
}

/// Settings after merging flags over the config file and applying defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub family: Family,
    pub scenario: ScenarioSpec,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub grid_points: usize,
    pub tolerance: Option<f64>,
    pub x_max: f64,
    pub t0: bool,
    pub u_range: AxisRange,
    pub csq_range: AxisRange,
    pub summary: Option<PathBuf>,
}

fn pair(a: Option<f64>, b: Option<f64>, names: &str) -> Result<Option<(f64, f64)>, CliError> {
    match (a, b) {
        (Some(a), Some(b)) => Ok(Some((a, b))),
        (None, None) => Ok(None),
        _ => Err(usage(format!("{names} must be given together"))),
    }
}

impl RunConfig {
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => fs::read_to_string(path)
                .map_err(|source| CliError::Io {
                    context: format!("reading {}", path.display()),
                    source,
                })?
                .parse::<FileConfig>()?,
            None => FileConfig::default(),
        };
        RunConfig::merge(command, flags, &file)
    }

    pub fn merge(command: Command, flags: &Flags, file: &FileConfig) -> Result<Self, CliError> {
        if let Some(c) = file.command {
            if c != command {
                return Err(usage(format!("config file is for {c:?}, not {command:?}")));
            }
        }
        let family: Family = flags
            .family
            .or(file.family)
            .unwrap_or(FamilyArg::Gaussian)
            .into();
        let u = flags.u.or(file.u);
        let csq = flags.csq.or(file.csq);
        let sigma1 = flags.sigma1.or(file.sigma1);
        let sigma2 = flags.sigma2.or(file.sigma2);

        let sigmas = pair(sigma1, sigma2, "--sigma1 and --sigma2")?;
        let scenario = match family {
            Family::Rectangle => {
                if csq.is_some() || sigmas.is_some() {
                    return Err(usage("the rectangle family takes only --u"));
                }
                ScenarioSpec::Suppression {
                    u: u.unwrap_or(DEFAULT_RECTANGLE_U),
                    csq: 1.0,
                }
            }
            Family::Gaussian => match (u, csq, sigmas) {
                (None, None, Some((sigma1, sigma2))) => ScenarioSpec::Sigmas { sigma1, sigma2 },
                (_, _, Some(_)) => {
                    return Err(usage(
                        "give either --u/--csq or --sigma1/--sigma2, not both",
                    ));
                }
                (u, csq, None) if command == Command::Coeffs => ScenarioSpec::Suppression {
                    u: u.unwrap_or(f64::NAN),
                    csq: csq.ok_or_else(|| usage("coeffs needs --csq or --sigma1/--sigma2"))?,
                },
                (u, csq, None) => ScenarioSpec::Suppression {
                    u: u.unwrap_or(DEFAULT_GAUSSIAN.0),
                    csq: csq.unwrap_or(DEFAULT_GAUSSIAN.1),
                },
            },
        };
        match scenario {
            ScenarioSpec::Suppression { u, csq } => {
                // NaN marks "not given", which only coeffs accepts
                if !(u.is_nan() || (u > 0.0 && u.is_finite())) {
                    return Err(usage("--u must be positive"));
                }
                if !(csq > 0.0 && csq.is_finite()) {
                    return Err(usage("--csq must be positive"));
                }
            }
            ScenarioSpec::Sigmas { sigma1, sigma2 } => {
                if !(sigma1 > 0.0 && sigma2 > 0.0 && sigma1.is_finite() && sigma2.is_finite()) {
                    return Err(usage("--sigma1 and --sigma2 must be positive"));
                }
            }
        }

        let tolerance = flags.tolerance.or(file.tolerance);
        if let Some(t) = tolerance {
            QuadratureSpec::with_tolerance(t).map_err(|e| usage(e.to_string()))?;
        }
        let grid_points = flags
            .grid_points
            .or(file.grid_points)
            .unwrap_or(DEFAULT_PROFILE_POINTS);
        if grid_points < 2 {
            return Err(usage("--grid-points must be at least 2"));
        }
        let x_max = flags.x_max.or(file.x_max).unwrap_or(DEFAULT_X_MAX);
        if !(x_max > 0.0 && x_max.is_finite()) {
            return Err(usage("--x-max must be positive"));
        }
        let range =
            |lo: Option<f64>, hi: Option<f64>, steps: Option<usize>, d: (f64, f64, usize)| {
                let steps = steps.unwrap_or(d.2);
                let lo = lo.unwrap_or(d.0);
                let hi = hi.unwrap_or(if steps == 1 { lo } else { d.1 });
                AxisRange::new(lo, hi, steps).map_err(|e| usage(e.to_string()))
            };
        let u_range = range(
            flags.u_min.or(file.u_min),
            flags.u_max.or(file.u_max),
            flags.u_steps.or(file.u_steps),
            DEFAULT_U_RANGE,
        )?;
        let csq_range = range(
            flags.csq_min.or(file.csq_min),
            flags.csq_max.or(file.csq_max),
            flags.csq_steps.or(file.csq_steps),
            DEFAULT_CSQ_RANGE,
        )?;
        Ok(RunConfig {
            command,
            family,
            scenario,
            output: flags.output.clone().or_else(|| file.output.clone()),
            format: flags.format.or(file.format).unwrap_or(match command {
                Command::Reproduce | Command::Coeffs => Format::Json,
                Command::Propagate | Command::Sweep => Format::Csv,
            }),
            grid_points,
            tolerance,
            x_max,
            t0: flags.t0 || file.t0.unwrap_or(false),
            u_range,
            csq_range,
            summary: flags.summary.clone().or_else(|| file.summary.clone()),
        })
    }

    fn spec(&self) -> Result<QuadratureSpec, CliError> {
        match self.tolerance {
            Some(t) => QuadratureSpec::with_tolerance(t).map_err(|e| usage(e.to_string())),
            None => Ok(QuadratureSpec::default()),
        }
    }

    /// The localized component and its scenario (`L = 1`).
    fn state(&self) -> Result<(Scenario, PlusState), CliError> {
        let (scenario, phi) = match self.scenario {
            ScenarioSpec::Suppression { u, csq } => {
                let sc = Scenario::new(u)?;
                (sc, self.family.component(csq, sc.length)?)
            }
            ScenarioSpec::Sigmas { sigma1, sigma2 } => (
                Scenario::from_sigmas(sigma1, sigma2, 1.0)?,
                Wavefunction::gaussian(Representation::Position, sigma1, 0.0)?,
            ),
        };
        let state = build_plus_state(&phi, &scenario)?;
        Ok((scenario, state))
    }
}

/// Fixed notation: scientific, nine significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.8e}")
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(serde_json::Number::from_str(&fmt(x)).expect("formatted float parses"))
    } else {
        Value::Null
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Rewrites every float in `v` into the fixed notation.
fn fixed_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(fixed_floats).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, fixed_floats(v))).collect())
        }
        other => other,
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Gaussian => "gaussian",
        Family::Rectangle => "rectangle",
    }
}

/// Ordered `(key, value)` rows of a report.
fn report_rows(
    family: Family,
    r: &ProbabilityReport,
    sigmas: Option<(f64, f64)>,
) -> Vec<(&'static str, Value)> {
    let c = &r.coefficients;
    vec![
        ("family", Value::String(family_name(family).into())),
        ("U", num(r.scenario.suppression)),
        ("sqrt_U", num(r.sqrt_u)),
        ("L", num(r.scenario.length)),
        ("B", num(r.scenario.bandwidth)),
        ("t", num(r.scenario.time)),
        ("Csq", num(c.csq())),
        ("eta", num(c.mismatch)),
        ("gamma", num(c.cross_section)),
        ("sigma1", opt(sigmas.map(|s| s.0))),
        ("sigma2", opt(sigmas.map(|s| s.1))),
        ("P_L", num(r.p_l)),
        ("P_B", num(r.p_b)),
        ("joint_lower", num(r.joint_lower)),
        ("P_M_envelope", num(r.p_m_envelope)),
        ("P_M_envelope_estimate", num(r.p_m_envelope_estimate)),
        ("P_M_exact", num(r.p_m_exact)),
        ("defect_envelope", num(r.defect_envelope)),
        ("defect_exact", num(r.defect_exact)),
        ("defect_bound", num(r.defect_bound)),
        ("ratio", num(r.ratio)),
        ("ratio_bound", opt(r.ratio_bound)),
    ]
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_rows(
    rows: &[(&str, Value)],
    format: Format,
    header: &str,
    out: &mut dyn Write,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let map: Map<String, Value> = rows
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&Value::Object(map))?
            )
        }
        Format::Csv => {
            writeln!(out, "{header}")?;
            for (k, v) in rows {
                writeln!(out, "{k},{}", cell(v))?;
            }
            Ok(())
        }
    }
}

fn sigmas_of(config: &RunConfig, csq: f64, u: f64) -> Option<(f64, f64)> {
    match (config.family, config.scenario) {
        (Family::Rectangle, _) => None,
        (_, ScenarioSpec::Sigmas { sigma1, sigma2 }) => Some((sigma1, sigma2)),
        (_, ScenarioSpec::Suppression { .. }) => gaussian_sigmas(csq, u, 1.0).ok(),
    }
}

pub fn cmd_reproduce(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (scenario, state) = config.state()?;
    let report = defect_exact_with(&state, &scenario, &config.spec()?)?;
    let sigmas = sigmas_of(config, report.coefficients.csq(), scenario.suppression);
    let rows = report_rows(config.family, &report, sigmas);
    write_rows(&rows, config.format, "quantity,value", out).map_err(io_err("writing report"))
}

pub fn cmd_coeffs(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (csq, u, phi) = match (config.family, config.scenario) {
        (Family::Rectangle, _) => (1.0, None, config.family.component(1.0, 1.0)?),
        (_, ScenarioSpec::Suppression { u, csq }) => (
            csq,
            Some(u).filter(|u| !u.is_nan()),
            config.family.component(csq, 1.0)?,
        ),
        (_, ScenarioSpec::Sigmas { sigma1, sigma2 }) => {
            let sc = Scenario::from_sigmas(sigma1, sigma2, 1.0)?;
            let phi = Wavefunction::gaussian(Representation::Position, sigma1, 0.0)?;
            (
                sigma1 * (8.0 * std::f64::consts::PI).sqrt(),
                Some(sc.suppression),
                phi,
            )
        }
    };
    let closed = match config.family {
        Family::Gaussian => gaussian_coefficients(csq)?,
        Family::Rectangle => LocalizationCoefficients::rectangle(),
    };
    let quad = LocalizationCoefficients::by_quadrature(&phi, 1.0, &config.spec()?)?;
    let sigmas = match (config.family, config.scenario) {
        (Family::Rectangle, _) => None,
        (_, ScenarioSpec::Sigmas { sigma1, sigma2 }) => Some((sigma1, Some(sigma2))),
        (_, _) => {
            let s1 = csq / (8.0 * std::f64::consts::PI).sqrt();
            Some((
                s1,
                u.and_then(|u| gaussian_sigmas(csq, u, 1.0).ok())
                    .map(|s| s.1),
            ))
        }
    };
    let triple = |c: &LocalizationCoefficients| [c.csq(), c.mismatch, c.cross_section];
    let (a, b) = (triple(&closed), triple(&quad));
    let names = ["Csq", "eta", "gamma"];
    match config.format {
        Format::Json => {
            let obj = |v: [f64; 3]| {
                Value::Object(
                    names
                        .iter()
                        .zip(v)
                        .map(|(k, x)| (k.to_string(), num(x)))
                        .collect(),
                )
            };
            let mut map = Map::new();
            map.insert(
                "family".into(),
                Value::String(family_name(config.family).into()),
            );
            map.insert("U".into(), opt(u));
            map.insert("sigma1".into(), opt(sigmas.map(|s| s.0)));
            map.insert("sigma2".into(), opt(sigmas.and_then(|s| s.1)));
            map.insert("closed_form".into(), obj(a));
            map.insert("quadrature".into(), obj(b));
            map.insert(
                "difference".into(),
                obj([b[0] - a[0], b[1] - a[1], b[2] - a[2]]),
            );
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&Value::Object(map)).expect("json")
            )
            .map_err(io_err("writing coefficients"))
        }
        Format::Csv => {
            let mut text = String::from("quantity,closed_form,quadrature,difference\n");
            for i in 0..3 {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    names[i],
                    fmt(a[i]),
                    fmt(b[i]),
                    fmt(b[i] - a[i])
                ));
            }
            if let Some((s1, s2)) = sigmas {
                text.push_str(&format!("sigma1,{},,\n", fmt(s1)));
                text.push_str(&format!("sigma2,{},,\n", s2.map(fmt).unwrap_or_default()));
            }
            out.write_all(text.as_bytes())
                .map_err(io_err("writing coefficients"))
        }
    }
}

pub fn cmd_propagate(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (scenario, state) = config.state()?;
    let spec = config.spec()?;
    let time = if config.t0 { 0.0 } else { scenario.time };
    let propagated = PropagatedState::at_time(&state, &scenario, time)?.with_spec(spec);
    let joint = ppi_core::superposition::plus_interval_probability_with(
        &state,
        &scenario,
        ppi_core::Target::Position,
        &spec,
    )? + ppi_core::superposition::plus_interval_probability_with(
        &state,
        &scenario,
        ppi_core::Target::Momentum,
        &spec,
    )? - 1.0;
    let reference = joint / (2.0 * scenario.length);
    let rows = density_profile(
        &propagated,
        config.x_max * scenario.length,
        config.grid_points,
    )?;
    let io = io_err("writing profile");
    match config.format {
        Format::Csv => {
            let mut text =
                String::from("x,density_exact,density_envelope,density_approx,reference\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt(r.x),
                    fmt(r.density_exact),
                    fmt(r.density_envelope),
                    fmt(r.density_approx),
                    fmt(reference)
                ));
            }
            out.write_all(text.as_bytes()).map_err(io)
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    m.insert("x".into(), num(r.x));
                    m.insert("density_exact".into(), num(r.density_exact));
                    m.insert("density_envelope".into(), num(r.density_envelope));
                    m.insert("density_approx".into(), num(r.density_approx));
                    m.insert("reference".into(), num(reference));
                    Value::Object(m)
                })
                .collect();
            let mut m = Map::new();
            m.insert("time".into(), num(time));
            m.insert("reference".into(), num(reference));
            m.insert("profile".into(), Value::Array(rows));
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&Value::Object(m)).expect("json")
            )
            .map_err(io)
        }
    }
}

pub fn cmd_sweep(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let grid = sweep(config.u_range, config.csq_range, config.family)?;
    let summary = fixed_floats(grid.summary_json());
    let summary_text = serde_json::to_string_pretty(&summary).expect("json") + "\n";
    if let Some(path) = &config.summary {
        fs::write(path, &summary_text).map_err(|source| CliError::Io {
            context: format!("writing {}", path.display()),
            source,
        })?;
    }
    match config.format {
        Format::Csv => grid.write_csv(out).map_err(CliError::from),
        Format::Json => out
            .write_all(summary_text.as_bytes())
            .map_err(io_err("writing summary")),
    }
}

fn io_err(context: &'static str) -> impl Fn(io::Error) -> CliError {
    move |source| CliError::Io {
        context: context.to_string(),
        source,
    }
}

/// Runs `config`, writing to `out`.
pub fn run_to(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    match config.command {
        Command::Reproduce => cmd_reproduce(config, out),
        Command::Coeffs => cmd_coeffs(config, out),
        Command::Propagate => cmd_propagate(config, out),
        Command::Sweep => cmd_sweep(config, out),
    }
}

/// Runs `config`, writing to its output file or standard output.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let mut buf = Vec::new();
    run_to(config, &mut buf)?;
    match &config.output {
        Some(path) => fs::write(path, &buf).map_err(|source| CliError::Io {
            context: format!("writing {}", path.display()),
            source,
        }),
        None => io::stdout()
            .write_all(&buf)
            .map_err(io_err("writing to stdout")),
    }
}

pub fn main_with(cli: Cli) -> Result<(), CliError> {
    let (command, flags) = match &cli.command {
        CommandLine::Reproduce(f) => (Command::Reproduce, f),
        CommandLine::Coeffs(f) => (Command::Coeffs, f),
        CommandLine::Propagate(f) => (Command::Propagate, f),
        CommandLine::Sweep(f) => (Command::Sweep, f),
    };
    run(&RunConfig::resolve(command, flags)?)
}

/// Parses a config file body and resolves it for `command` with no flags set.
pub fn parse_config(text: &str, command: Command) -> Result<RunConfig, CliError> {
    RunConfig::merge(command, &Flags::default(), &text.parse()?)
}
