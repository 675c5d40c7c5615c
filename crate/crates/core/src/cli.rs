//! Command-line front end. `main.rs` only parses and dispatches; everything
//! here writes to a caller-supplied sink so it can be driven from tests.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::frobenius::{truncation_spectrum, ProblemSpec};
use crate::models::{allowed_field_strengths, to_dimensionless, DisclinationSetup};
use crate::sweep::{run_sweep, SweepConfig};
use crate::variational::{hellmann_feynman_check, spectrum, DEFAULT_BASIS_SIZE, DEFAULT_FD_STEP};

/// Largest Hellmann-Feynman residual accepted with exit code 0.
pub const HF_ACCEPT: f64 = 1e-5;

pub const DISCLAIMER: &str =
    "note: these are only the fields with a terminating series; bound states exist for every other B as well";

#[derive(Debug, Parser)]
#[command(name = "condsolv", version, about = "Truncation points and variational spectra of the radial Coulomb-plus-oscillator equation")]
pub struct Cli {
    /// JSON file with default values for the subcommand's flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots of the truncation polynomial for degree n.
    Truncation(TruncationArgs),
    /// Lowest variational eigenvalues at one (gamma, a).
    Spectrum(SpectrumArgs),
    /// Eigenvalue curves over a range of a with truncation points.
    Sweep(SweepArgs),
    /// Finite-difference slope of W against -<1/xi>.
    HfCheck(HfArgs),
    /// Physical parameters to (gamma, a), or the fields with terminating series.
    Map(MapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Basis size [default: 30]
    #[arg(long)]
    pub n_basis: Option<usize>,
    /// Number of levels to print [default: 5]
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub n_basis: Option<usize>,
    /// Write `<prefix>_curves.csv` and `<prefix>_points.csv` (or `<prefix>.json`)
    /// instead of printing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HfArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub level: Option<usize>,
    #[arg(long)]
    pub n_basis: Option<usize>,
    /// Central-difference step [default: 1e-4]
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapArgs {
    #[arg(long)]
    pub m_star: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Field strength, for the forward mapping.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Also convert this dimensionless eigenvalue to an energy.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<f64>,
    /// List the fields at which the degree-n series terminates.
    #[arg(long)]
    #[serde(default)]
    pub allowed: bool,
    /// Series degree for --allowed.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug)]
pub enum CliError {
    Argument(String),
    Shortfall(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Argument(_) => 2,
            CliError::Shortfall(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Argument(m) | CliError::Shortfall(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_argument_error() {
            CliError::Argument(e.to_string())
        } else {
            CliError::Failure(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn arg_error(msg: impl Into<String>) -> CliError {
    CliError::Argument(msg.into())
}

fn required<T>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| arg_error(format!("missing required value --{name}")))
}

/// Overlays the flags that were given on top of the config file's values.
fn merge_config<T: Serialize + DeserializeOwned>(flags: T, config: Option<&Path>) -> CliResult<T> {
    let Some(path) = config else {
        return Ok(flags);
    };
    let text = std::fs::read_to_string(path).map_err(|e| arg_error(format!("cannot read {}: {e}", path.display())))?;
    let mut base: Value =
        serde_json::from_str(&text).map_err(|e| arg_error(format!("invalid config {}: {e}", path.display())))?;
    let Value::Object(base_map) = &mut base else {
        return Err(arg_error("config file must hold a JSON object"));
    };
    let Value::Object(given) = serde_json::to_value(&flags).expect("flags serialize") else {
        unreachable!("argument structs serialize to objects");
    };
    for (key, value) in given {
        // Unset options serialize as null and unset switches as false.
        if !value.is_null() && value != Value::Bool(false) {
            base_map.insert(key, value);
        }
    }
    serde_json::from_value(base).map_err(|e| arg_error(format!("invalid config {}: {e}", path.display())))
}

/// 17 significant digits, enough to round-trip any `f64`.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

/// A rendered report and, when the numbers fall short of what was asked for,
/// the reason. The report is printed either way.
pub struct Reported {
    pub text: String,
    pub shortfall: Option<String>,
}

impl Reported {
    fn ok(text: String) -> Self {
        Self { text, shortfall: None }
    }
}

/// Runs one parsed command line, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let config = cli.config.as_deref();
    let report = match cli.command {
        Command::Truncation(a) => cmd_truncation(merge_config(a, config)?)?,
        Command::Spectrum(a) => cmd_spectrum(merge_config(a, config)?)?,
        Command::Sweep(a) => cmd_sweep(merge_config(a, config)?)?,
        Command::HfCheck(a) => cmd_hf_check(merge_config(a, config)?)?,
        Command::Map(a) => cmd_map(merge_config(a, config)?)?,
    };
    out.write_all(report.text.as_bytes())?;
    match report.shortfall {
        Some(msg) => Err(CliError::Shortfall(msg)),
        None => Ok(()),
    }
}

pub fn cmd_truncation(args: TruncationArgs) -> CliResult<Reported> {
    let n = required(args.n, "n")?;
    let gamma = required(args.gamma, "gamma")?;
    let sol = truncation_spectrum(n, gamma)?;
    Ok(Reported::ok(match args.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&json!({
            "n": sol.n,
            "gamma": sol.gamma,
            "W": sol.w,
            "polynomial": sol.poly.to_string(),
            "coefficients": sol.poly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "roots": sol.roots.roots,
            "termination_residuals": sol.termination_residuals,
        })),
        Format::Csv => {
            let mut s = String::from("n,gamma,W,polynomial\n");
            let _ = writeln!(s, "{},{},{},{}", n, fmt_float(sol.gamma), fmt_float(sol.w), sol.poly);
            s.push_str("\nk,a_root,termination_residual\n");
            for (i, (a, r)) in sol.roots.roots.iter().zip(&sol.termination_residuals).enumerate() {
                let _ = writeln!(s, "{},{},{}", i + 1, fmt_float(*a), fmt_float(*r));
            }
            s
        }
    }))
}

pub fn cmd_spectrum(args: SpectrumArgs) -> CliResult<Reported> {
    let gamma = required(args.gamma, "gamma")?;
    let a = required(args.a, "a")?;
    let n_basis = args.n_basis.unwrap_or(DEFAULT_BASIS_SIZE);
    let levels = args.levels.unwrap_or(5);
    if levels == 0 || levels > n_basis {
        return Err(arg_error(format!("levels = {levels} must lie in 1..={n_basis}")));
    }
    let res = spectrum(&ProblemSpec::new(gamma, a)?, n_basis)?;
    let shown = levels.min(res.usable_n);
    let text = match args.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&json!({
            "gamma": gamma,
            "a": a,
            "n_basis": n_basis,
            "usable_n": res.usable_n,
            "levels": (0..shown).map(|nu| json!({
                "nu": nu,
                "W": res.eigenvalues[nu],
                "convergence_estimate": res.convergence_estimate[nu],
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("nu,W,convergence_estimate,usable_n\n");
            for nu in 0..shown {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    nu,
                    fmt_float(res.eigenvalues[nu]),
                    fmt_opt(res.convergence_estimate[nu]),
                    res.usable_n
                );
            }
            s
        }
    };
    let shortfall = (res.usable_n < levels)
        .then(|| format!("usable basis size {} is below the {levels} requested levels", res.usable_n));
    Ok(Reported { text, shortfall })
}

pub fn cmd_sweep(args: SweepArgs) -> CliResult<Reported> {
    let d = SweepConfig::default();
    let config = SweepConfig {
        gamma: args.gamma.unwrap_or(d.gamma),
        a_min: args.a_min.unwrap_or(d.a_min),
        a_max: args.a_max.unwrap_or(d.a_max),
        steps: args.steps.unwrap_or(d.steps),
        levels: args.levels.unwrap_or(d.levels),
        n_max: args.n_max.unwrap_or(d.n_max),
        n_basis: args.n_basis.unwrap_or(d.n_basis),
    };
    let table = run_sweep(&config)?;
    let format = args.format.unwrap_or(Format::Csv);
    let mut text = String::new();
    match (&args.out, format) {
        (Some(prefix), Format::Csv) => {
            let curves = with_suffix(prefix, "_curves.csv");
            let points = with_suffix(prefix, "_points.csv");
            std::fs::write(&curves, table.curves_csv())?;
            std::fs::write(&points, table.points_csv())?;
            let _ = writeln!(text, "wrote {}\nwrote {}", curves.display(), points.display());
        }
        (Some(prefix), Format::Json) => {
            let path = with_suffix(prefix, ".json");
            std::fs::write(&path, table.to_json())?;
            let _ = writeln!(text, "wrote {}", path.display());
        }
        (None, Format::Csv) => {
            text.push_str(&table.curves_csv());
            text.push('\n');
            text.push_str(&table.points_csv());
        }
        (None, Format::Json) => {
            text.push_str(&table.to_json());
            text.push('\n');
        }
    }
    if let Some(svg) = &args.svg {
        std::fs::write(svg, table.to_svg())?;
        if args.out.is_some() {
            let _ = writeln!(text, "wrote {}", svg.display());
        }
    }
    let flagged = table.rows.iter().filter(|r| r.status != crate::sweep::RowStatus::Ok).count();
    let shortfall = (flagged > 0).then(|| format!("{flagged} of {} rows are flagged in the status column", table.rows.len()));
    Ok(Reported { text, shortfall })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn cmd_hf_check(args: HfArgs) -> CliResult<Reported> {
    let spec = ProblemSpec::new(required(args.gamma, "gamma")?, required(args.a, "a")?)?;
    let rep = hellmann_feynman_check(
        &spec,
        args.level.unwrap_or(0),
        args.n_basis.unwrap_or(DEFAULT_BASIS_SIZE),
        args.h.unwrap_or(DEFAULT_FD_STEP),
    )?;
    let text = match args.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rep),
        Format::Csv => format!(
            "gamma,a,level,h,basis_size,fd_slope,expectation_inv_xi,residual,eigenvector_overlap,crossing_suspected\n{},{},{},{},{},{},{},{},{},{}\n",
            fmt_float(rep.gamma),
            fmt_float(rep.a),
            rep.level,
            fmt_float(rep.h),
            rep.basis_size,
            fmt_float(rep.fd_slope),
            fmt_float(rep.expectation_inv_xi),
            fmt_float(rep.residual),
            fmt_float(rep.eigenvector_overlap),
            rep.crossing_suspected
        ),
    };
    let shortfall = if rep.crossing_suspected {
        Some(format!(
            "level crossing suspected: eigenvector overlap {:.3} across [a - h, a + h]",
            rep.eigenvector_overlap
        ))
    } else if !(rep.residual <= HF_ACCEPT) {
        Some(format!("residual {:e} exceeds {HF_ACCEPT:e}", rep.residual))
    } else {
        None
    };
    Ok(Reported { text, shortfall })
}

pub fn cmd_map(args: MapArgs) -> CliResult<Reported> {
    let setup = DisclinationSetup {
        m_star: required(args.m_star, "m-star")?,
        q: required(args.q, "q")?,
        alpha: required(args.alpha, "alpha")?,
        kappa: required(args.kappa, "kappa")?,
        epsilon: required(args.epsilon, "epsilon")?,
        hbar: required(args.hbar, "hbar")?,
        c: required(args.c, "c")?,
        l: args.l.unwrap_or(0),
        k: args.k.unwrap_or(0.0),
    };
    let format = args.format.unwrap_or(Format::Csv);
    if args.allowed {
        let allowed = allowed_field_strengths(&setup, required(args.n, "n")?)?;
        return Ok(Reported::ok(match format {
            Format::Json => to_json(&json!({
                "n": allowed.n,
                "gamma": allowed.gamma,
                "W": allowed.w,
                "fields": allowed.fields,
                "discarded": allowed.discarded,
                "note": DISCLAIMER,
            })),
            Format::Csv => {
                let mut s = format!("# {DISCLAIMER}\nk,a_root,B\n");
                for f in &allowed.fields {
                    let _ = writeln!(s, "{},{},{}", f.k, fmt_float(f.a_root), fmt_float(f.b));
                }
                s
            }
        }));
    }
    let params = setup.with_field(required(args.b, "b")?)?;
    let img = to_dimensionless(&params)?;
    let energy = args.w.map(|w| img.energy_from_w(w));
    Ok(Reported::ok(match format {
        Format::Json => to_json(&json!({
            "length_unit": img.length_unit,
            "gamma": img.gamma,
            "a": img.a,
            "energy_scale": img.energy_scale,
            "energy_offset": img.energy_offset,
            "W": args.w,
            "E": energy,
        })),
        Format::Csv => {
            let mut s = String::from("length_unit,gamma,a,energy_scale,energy_offset");
            if args.w.is_some() {
                s.push_str(",W,E");
            }
            let _ = write!(
                s,
                "\n{},{},{},{},{}",
                fmt_float(img.length_unit),
                fmt_float(img.gamma),
                fmt_float(img.a),
                fmt_float(img.energy_scale),
                fmt_float(img.energy_offset)
            );
            if let (Some(w), Some(e)) = (args.w, energy) {
                let _ = write!(s, ",{},{}", fmt_float(w), fmt_float(e));
            }
            s.push('\n');
            s
        }
    }))
}
