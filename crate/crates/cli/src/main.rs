//! `rcskit` — drive the time-gating pipeline from the shell: synthesize
//! measurement campaigns, inspect gates, extract RCS-reduction spectra, and
//! assemble bi-static patterns.
//!
//! Every command is deterministic given its inputs and flags. CSV is the
//! authoritative output; SVG plots are a quick-look view of the same data.
//! Exit codes: 0 success, 1 runtime/data failure, 2 usage or configuration
//! error (clap reports flag mistakes with 2 as well).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rcskit_core::{units, PatternSource, DEFAULT_BETA};

mod commands;
mod svg;

#[derive(Parser)]
#[command(name = "rcskit", version, about = "Time-gated RCS-reduction measurement processing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic campaign: per-angle DUT/reference sweeps plus a manifest
    Simulate(SimulateArgs),
    /// Gate one angle's sweeps; emit time-domain series, gated spectra, and a gate report
    Gate(GateArgs),
    /// Extract the gated RCS-reduction spectrum at one angle
    Rcsr(RcsrArgs),
    /// Assemble mirrored, normalized bi-static patterns at chosen frequencies
    Pattern(PatternArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Scene script (TOML); omit it and pass --demo for the built-in campaign
    #[arg(required_unless_present = "demo")]
    script: Option<PathBuf>,

    /// Use the built-in demonstration campaign
    #[arg(long, conflicts_with = "script")]
    demo: bool,

    /// Sweep start frequency, overriding the script grid (unit suffixes allowed, e.g. "22 GHz")
    #[arg(long, value_parser = hertz, requires = "f_stop", requires = "n_points")]
    f_start: Option<f64>,

    /// Sweep stop frequency, overriding the script grid
    #[arg(long, value_parser = hertz, requires = "f_start", requires = "n_points")]
    f_stop: Option<f64>,

    /// Number of sweep points, overriding the script grid
    #[arg(long, requires = "f_start", requires = "f_stop")]
    n_points: Option<usize>,

    /// Campaign output directory
    #[arg(long, default_value = "campaign")]
    out: PathBuf,
}

/// Flags shared by the processing commands: where the campaign lives and
/// where results go.
#[derive(Args)]
struct IoArgs {
    /// Campaign manifest (TSV file, or a campaign directory containing manifest.tsv)
    manifest: PathBuf,

    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// What to emit
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args)]
struct TransformArgs {
    /// Zero-padding factor for the time transform
    #[arg(long, default_value_t = 4, value_parser = pad_factor)]
    pad: usize,

    /// Kaiser window shape parameter for the gate taper
    #[arg(long, default_value_t = DEFAULT_BETA, value_parser = beta_value)]
    beta: f64,
}

/// How the gate interval is chosen. A manual `--gate` skips detection;
/// otherwise the gate is found on the reference response, by half-width
/// around the peak or by a dB threshold below it.
#[derive(Args)]
struct GateSelection {
    /// Manual gate as start:stop with unit suffixes (e.g. 27ns:29ns); skips detection
    #[arg(long, value_parser = gate_bounds, conflicts_with_all = ["half_width", "threshold_db"])]
    gate: Option<(f64, f64)>,

    /// Half-width of the detected gate around the reference peak
    #[arg(long, value_parser = seconds, default_value = "1ns", conflicts_with = "threshold_db")]
    half_width: f64,

    /// Detect the gate as the contiguous run within this many dB of the peak (negative)
    #[arg(long, value_parser = negative_db)]
    threshold_db: Option<f64>,
}

#[derive(Args)]
struct GateArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Angle to process, in degrees
    #[arg(long)]
    angle: f64,

    #[command(flatten)]
    transform: TransformArgs,

    #[command(flatten)]
    gate: GateSelection,
}

#[derive(Args)]
struct RcsrArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Angle to process, in degrees
    #[arg(long)]
    angle: f64,

    #[command(flatten)]
    transform: TransformArgs,

    #[command(flatten)]
    gate: GateSelection,
}

#[derive(Args)]
struct PatternArgs {
    #[command(flatten)]
    io: IoArgs,

    /// Pattern frequencies, comma separated, unit suffixes allowed (e.g. 18GHz,32GHz)
    #[arg(long, value_parser = hertz, value_delimiter = ',', required = true)]
    f0: Vec<f64>,

    /// Which per-angle quantity the pattern plots
    #[arg(long, value_enum, default_value_t = SourceArg::Rcsr)]
    source: SourceArg,

    #[command(flatten)]
    transform: TransformArgs,

    #[command(flatten)]
    gate: GateSelection,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Svg,
    Both,
}

impl OutputFormat {
    fn wants_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    fn wants_svg(self) -> bool {
        matches!(self, OutputFormat::Svg | OutputFormat::Both)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Dut,
    Ref,
    Rcsr,
}

impl From<SourceArg> for PatternSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::Dut => PatternSource::Dut,
            SourceArg::Ref => PatternSource::Ref,
            SourceArg::Rcsr => PatternSource::Rcsr,
        }
    }
}

fn seconds(text: &str) -> Result<f64, String> {
    units::parse_seconds(text).map_err(|e| e.to_string())
}

fn hertz(text: &str) -> Result<f64, String> {
    units::parse_hertz(text).map_err(|e| e.to_string())
}

fn gate_bounds(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("expected start:stop (e.g. 27ns:29ns), got `{text}`"))?;
    let t1 = seconds(a)?;
    let t2 = seconds(b)?;
    if !(0.0 <= t1 && t1 < t2) {
        return Err(format!("gate start {a} must be non-negative and below stop {b}"));
    }
    Ok((t1, t2))
}

fn pad_factor(text: &str) -> Result<usize, String> {
    let v: usize = text.parse().map_err(|_| format!("`{text}` is not an integer"))?;
    if v == 0 {
        return Err("pad factor must be at least 1".into());
    }
    Ok(v)
}

fn beta_value(text: &str) -> Result<f64, String> {
    let v: f64 = text.parse().map_err(|_| format!("`{text}` is not a number"))?;
    if !v.is_finite() || v < 0.0 {
        return Err("beta must be finite and non-negative".into());
    }
    Ok(v)
}

fn negative_db(text: &str) -> Result<f64, String> {
    let v: f64 = text.parse().map_err(|_| format!("`{text}` is not a number"))?;
    if !v.is_finite() || v >= 0.0 {
        return Err("threshold must be a negative dB value".into());
    }
    Ok(v)
}

/// A failed command, tagged with its exit class: 2 for mistakes the caller
/// can fix (paths, flags, selections), 1 for runtime or data failures.
pub struct Failure {
    exit: u8,
    error: anyhow::Error,
}

pub type CmdResult<T = ()> = Result<T, Failure>;

pub fn usage_error(error: impl Into<anyhow::Error>) -> Failure {
    Failure { exit: 2, error: error.into() }
}

pub fn data_error(error: impl Into<anyhow::Error>) -> Failure {
    Failure { exit: 1, error: error.into() }
}

/// Tag a result's error with its exit class.
pub trait Classify<T> {
    fn or_usage(self) -> CmdResult<T>;
    fn or_data(self) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn or_usage(self) -> CmdResult<T> {
        self.map_err(usage_error)
    }

    fn or_data(self) -> CmdResult<T> {
        self.map_err(data_error)
    }
}

impl Failure {
    /// Prefix the error chain, e.g. with the angle being processed.
    fn with_context(self, msg: String) -> Self {
        Self { exit: self.exit, error: self.error.context(msg) }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Gate(args) => commands::gate(args),
        Command::Rcsr(args) => commands::rcsr(args),
        Command::Pattern(args) => commands::pattern(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.exit)
        }
    }
}
