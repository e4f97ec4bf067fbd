//! Command-line front end: each subcommand evaluates one capability over a
//! parameter grid and writes a table.
//!
//! Exit codes: 0 success, 2 usage error, 3 invalid or missing parameter,
//! 4 I/O failure. Failures are reported as a single line on stderr.

mod commands;
mod config;
mod grid;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use grid::parse_grid;
pub use output::{format_number, Cell, Header, Table};

/// Directory for relative `--out` paths.
pub const OUT_DIR_ENV: &str = "COHDISC_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Parameter { name: String, message: String },
    Io { path: String, message: String },
}

impl CliError {
    pub fn parameter(name: &str, message: impl Into<String>) -> Self {
        CliError::Parameter {
            name: name.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: impl fmt::Display, err: impl fmt::Display) -> Self {
        CliError::Io {
            path: path.to_string(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) if !e.use_stderr() => 0,
            CliError::Usage(_) => 2,
            CliError::Parameter { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = |s: &str| s.replace('\n', " ");
        match self {
            CliError::Usage(e) => write!(f, "{}", e.render()),
            CliError::Parameter { name, message } => {
                write!(f, "error: parameter={name} message={}", one_line(message))
            }
            CliError::Io { path, message } => {
                write!(f, "error: io path={path} message={}", one_line(message))
            }
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        let name = match &e {
            crate::Error::Domain { name, .. } => name,
            crate::Error::FullyInconclusive => "config",
            crate::Error::Truncated { .. } => "samples",
            crate::Error::Parse { .. } => "response",
        };
        CliError::parameter(name, e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "cohdisc",
    version,
    about = "Binary coherent-state discrimination toolkit",
    args_override_self = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output file (stdout when absent); relative paths resolve against $COHDISC_OUT_DIR.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Flat `key = value` file; explicit options override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for simulations (results do not depend on it).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Report `η·|α|²` on the amplitude axis.
    #[arg(long, global = true)]
    eta_corrected: bool,
}

#[derive(Debug, Args)]
struct AlphaArg {
    /// Mean photon number grid: `start:stop:count`, comma list or value.
    #[arg(long = "alpha-sq", visible_alias = "alpha-sq-grid")]
    alpha_sq: Option<String>,
}

#[derive(Debug, Args)]
struct Imperfections {
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Mean dark/false counts per detection window.
    #[arg(long, default_value_t = 0.0)]
    dark: f64,
    #[arg(long, default_value_t = 1.0)]
    visibility: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Overlap, minimum-error and error-free limits.
    Bounds {
        #[command(flatten)]
        alpha: AlphaArg,
    },
    /// Postselected homodyne operating points over a threshold grid.
    HdCurve {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Threshold grid.
        #[arg(long = "b")]
        b: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Electronic noise variance (vacuum = 0.5).
        #[arg(long, default_value_t = 0.0)]
        electronic_noise: f64,
    },
    /// Displacement photon-counting operating points over a β grid.
    PnrCurve {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[command(flatten)]
        imperfections: Imperfections,
    },
    /// Error-minimizing displacement for each threshold.
    OptimizeBeta {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Comma list of thresholds.
        #[arg(long, default_value = "0")]
        m: String,
        #[command(flatten)]
        imperfections: Imperfections,
    },
    /// Photon counting vs homodyne at matched inconclusive rates.
    Compare {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
    },
    /// Gaussian-measurement grid scan with optimality checks.
    GaussianScan {
        #[arg(long = "alpha-sq")]
        alpha_sq: Option<f64>,
        #[arg(long = "lambda-b", default_value = "1,2,8")]
        lambda_b: String,
        /// Defaults to 0:3:13 plus 20.
        #[arg(long)]
        r: Option<String>,
        /// Defaults to 0:π:17.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Monte Carlo sweep of one receiver.
    Simulate {
        #[arg(long, value_enum)]
        receiver: Option<ReceiverKind>,
        #[command(flatten)]
        alpha: AlphaArg,
        /// Threshold B (homodyne) or displacement β (pnr) grid.
        #[arg(long)]
        param: Option<String>,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[command(flatten)]
        imperfections: Imperfections,
        #[arg(long, default_value_t = 0.0)]
        electronic_noise: f64,
        #[arg(long, default_value_t = 1_000_000)]
        n_trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Detector mode overlap with the ideal window.
    ModeOverlap {
        #[arg(long, default_value_t = 7)]
        order: usize,
        #[arg(long, default_value_t = 1e7)]
        cutoff_hz: f64,
        /// Ripple grid in dB.
        #[arg(long, default_value = "0.5")]
        ripple_db: String,
        /// Window duration in seconds.
        #[arg(long, default_value_t = 800e-9)]
        window: f64,
        #[arg(long, default_value_t = 20e6)]
        sample_rate: f64,
        #[arg(long, value_enum, default_value_t = AveragingKind::Continuous)]
        averaging: AveragingKind,
        #[arg(long, default_value_t = crate::mode_overlap::DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value_t = crate::mode_overlap::DEFAULT_SAMPLES)]
        samples: usize,
        /// Measured impulse response (time_s, amplitude) used instead of the filter model.
        #[arg(long)]
        response: Option<PathBuf>,
        /// Also write G_eff as two-column text.
        #[arg(long)]
        geff_out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReceiverKind {
    Hd,
    Pnr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AveragingKind {
    Continuous,
    Sampled,
}

fn resolve_path(path: &std::path::Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    let path = resolve_path(path);
    std::fs::write(&path, text).map_err(|e| CliError::io(path.display(), e))
}

/// Parses `args` (program name first), runs the command and writes the
/// rendered table to `--out` or `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = config::merge_config(args.into_iter().map(Into::into).collect())?;
    let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    let (header, table) = commands::execute(&cli.command, &cli.global)?;
    let text = match cli.global.format {
        Format::Csv => output::render_csv(&header, &table),
        Format::Json => output::render_json(&header, &table),
    };
    match &cli.global.out {
        Some(path) => write_file(path, &text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let stdout = std::io::stdout();
    match run(args, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
