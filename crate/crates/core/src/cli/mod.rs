//! Command-line front end: configuration, analysis, wavenumber sweeps and
//! table reproduction with text, JSON or CSV output.

mod analyze;
mod config;
mod output;
mod sweep;
mod tables;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::charfun::CharFunError;
use crate::linalg::LinalgError;
use crate::models::{Depth, FaradayParams, ModelError};
use crate::spectral::SpectralError;
use crate::stability::StabilityError;

pub use analyze::{analyze, compare, AnalysisOutput, CompareRow, DEFAULT_FARADAY_TRUNCATION};
pub use config::{
    load_kkt_system, load_matrix_system, matrix_system, AnalysisConfig, MethodChoice, ModelConfig,
    PsdConfig,
};
pub use output::{config_from_csv, num, sci, short, PsdReport, CONFIG_PREFIX};
pub use sweep::{alpha_grid, summarize, sweep, SweepRow, SweepSummary};
pub use tables::{
    calibrate_psd, depth_difference, table1, table2, truncation_errors, TableCell, CALIBRATION_A,
    CALIBRATION_OMEGA0, RELATIVE_TOLERANCE, TABLE1_FLOOR, TABLE1_L, TABLE1_N, TABLE1_REFERENCE,
    TABLE2_FLOOR, TABLE2_L, TABLE2_REFERENCE,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    CharFun(#[from] CharFunError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

pub const EXIT_OK: i32 = 0;
/// Unstable verdict, or a failed table comparison.
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser)]
#[command(
    name = "paramstab",
    version,
    about = "Second-moment stability under small random parametric forcing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Selects the least stable mode pair and reports λ₀, λ₂ and ε_crit.
    Analyze(AnalyzeArgs),
    /// Analyzes a Faraday model over a range of wavenumbers.
    Sweep(SweepArgs),
    /// Truncated eigen-sum against the residue sum for the surface mode.
    Table1(TableArgs),
    /// Finite-depth against infinite-depth residue sums.
    Table2(TableArgs),
    /// Poles, residues and sample values of the noise spectrum.
    Psd(PsdArgs),
    /// I_p from the eigen-sum and from the residue sum, mode by mode.
    Compare(AnalyzeArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Write CSV to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    /// Eigen-sum truncation.
    #[arg(long)]
    n: Option<usize>,
    /// Number of leading modes searched for the pair.
    #[arg(long)]
    top_k: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    alpha_min: f64,
    #[arg(long)]
    alpha_max: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TableArgs {
    /// Faraday model and spectrum; the reference parameters by default.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PsdArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    omega0: Option<f64>,
    /// Sample point `re,im` for G(z); repeatable.
    #[arg(long = "z", value_parser = parse_complex, allow_hyphen_values = true)]
    z: Vec<C64>,
    /// Sample frequency for S(ω); repeatable.
    #[arg(long, allow_hyphen_values = true)]
    omega: Vec<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re = re.trim().parse::<f64>().map_err(|e| format!("{s}: {e}"))?;
    let im = im.trim().parse::<f64>().map_err(|e| format!("{s}: {e}"))?;
    Ok(C64::new(re, im))
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PARAMSTAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "`PARAMSTAB_THREADS` must be a positive integer, got {v:?}"
        ))
    })?;
    // A pool that already exists keeps its size.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn write_csv(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn emit<T: serde::Serialize>(
    out: &OutputArgs,
    value: &T,
    text: String,
    csv: String,
) -> Result<(), CliError> {
    if let Some(path) = &out.out {
        write_csv(path, &csv)?;
    }
    if out.json {
        print_json(value)
    } else {
        print!("{text}");
        Ok(())
    }
}

fn load_with(args: &AnalyzeArgs) -> Result<AnalysisConfig, CliError> {
    let mut cfg = AnalysisConfig::load(&args.config)?;
    if args.epsilon.is_some() {
        cfg.epsilon = args.epsilon;
    }
    if let Some(m) = args.method {
        cfg.method = m;
    }
    if args.n.is_some() {
        cfg.truncation = args.n;
    }
    if args.top_k.is_some() {
        cfg.top_k = args.top_k;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn table_config(path: Option<&Path>) -> Result<(AnalysisConfig, FaradayParams), CliError> {
    let cfg = match path {
        Some(p) => AnalysisConfig::load(p)?,
        None => AnalysisConfig::new(ModelConfig::Faraday(FaradayParams::reference(
            Depth::Finite(1.0),
        ))),
    };
    match &cfg.model {
        ModelConfig::Faraday(p) => {
            let p = *p;
            Ok((cfg, p))
        }
        _ => Err(CliError::Config(
            "`model`: tables need a faraday model".into(),
        )),
    }
}

fn run_command(cmd: Command) -> Result<i32, CliError> {
    configure_threads()?;
    match cmd {
        Command::Analyze(args) => {
            let cfg = load_with(&args)?;
            let out = analyze(&cfg)?;
            emit(
                &args.output,
                &out,
                output::analysis_text(&out),
                output::analysis_csv(&out),
            )?;
            Ok(if out.is_stable() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Compare(args) => {
            let cfg = load_with(&args)?;
            let rows = compare(&cfg)?;
            emit(
                &args.output,
                &rows,
                output::compare_text(&rows),
                output::compare_csv(&cfg, &rows),
            )?;
            Ok(EXIT_OK)
        }
        Command::Sweep(args) => {
            let mut cfg = AnalysisConfig::load(&args.config)?;
            if let Some(m) = args.method {
                cfg.method = m;
            }
            if args.n.is_some() {
                cfg.truncation = args.n;
            }
            cfg.validate()?;
            let rows = sweep(&cfg, args.alpha_min, args.alpha_max, args.steps)?;
            #[derive(serde::Serialize)]
            struct Sweep<'a> {
                rows: &'a [SweepRow],
                minimum: Option<SweepSummary>,
            }
            let value = Sweep {
                rows: &rows,
                minimum: summarize(&rows),
            };
            emit(
                &args.output,
                &value,
                output::sweep_text(&rows),
                output::sweep_csv(&cfg, &rows),
            )?;
            Ok(EXIT_OK)
        }
        Command::Table1(args) => {
            let (cfg, params) = table_config(args.config.as_deref())?;
            let cells = table1(&params, &cfg.psd.model()?.poles_residues())?;
            emit(
                &args.output,
                &cells,
                output::table_text(&cells),
                output::table1_csv(&cfg, &cells),
            )?;
            Ok(if cells.iter().all(|c| c.pass) {
                EXIT_OK
            } else {
                EXIT_FAIL
            })
        }
        Command::Table2(args) => {
            let (cfg, params) = table_config(args.config.as_deref())?;
            let cells = table2(&params, &cfg.psd.model()?.poles_residues())?;
            emit(
                &args.output,
                &cells,
                output::table_text(&cells),
                output::table2_csv(&cfg, &cells),
            )?;
            Ok(if cells.iter().all(|c| c.pass) {
                EXIT_OK
            } else {
                EXIT_FAIL
            })
        }
        Command::Psd(args) => {
            let mut psd = match &args.config {
                Some(p) => AnalysisConfig::load(p)?.psd,
                None => PsdConfig::default(),
            };
            if let Some(a) = args.a {
                psd.a = a;
            }
            if let Some(w) = args.omega0 {
                psd.omega0 = w;
            }
            let model = psd.model()?;
            let omegas = if args.omega.is_empty() {
                vec![0.0, 0.5 * psd.omega0, psd.omega0, 2.0 * psd.omega0]
            } else {
                args.omega.clone()
            };
            let zs = if args.z.is_empty() {
                vec![
                    C64::new(1.0, 0.0),
                    C64::new(10.0, 50.0),
                    C64::new(50.0, -100.0),
                ]
            } else {
                args.z.clone()
            };
            let report = output::psd_report(&model, &omegas, &zs)?;
            emit(
                &args.output,
                &report,
                output::psd_text(&report),
                output::psd_csv(&psd, &report),
            )?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let code = match run_command(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    let _ = std::io::stdout().flush();
    code
}
