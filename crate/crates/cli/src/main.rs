//! `cst`: complex structure tensor feature extraction from the command line.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cst_core::{Boundary, DType};

#[derive(Parser)]
#[command(
    name = "cst",
    version,
    about = "Dense complex structure tensor texture-orientation features"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute feature maps and write a (C, H, W) NPY tensor plus a .labels manifest.
    Extract(ExtractArgs),
    /// Render one order as an HSV-coded PNG.
    Viz(VizArgs),
    /// Write a synthetic test pattern as a PGM.
    Synth(SynthArgs),
    /// Run the built-in oracle and invariant checks.
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
pub struct PipelineArgs {
    /// Derivation scale in pixels.
    #[arg(long, default_value_t = cst_core::params::DEFAULT_SIGMA1)]
    pub sigma1: f64,
    /// Pooling scale in pixels.
    #[arg(long, default_value_t = cst_core::params::DEFAULT_SIGMA2)]
    pub sigma2: f64,
    /// Magnitude exponent.
    #[arg(long, default_value_t = cst_core::params::DEFAULT_GAMMA)]
    pub gamma: f64,
    /// Comma-separated symmetry orders, each in 1..=3.
    #[arg(long, default_value = "1")]
    pub orders: String,
    /// Border handling: reflect, replicate or zero
    #[arg(long, default_value = "reflect")]
    pub boundary: Boundary,
}

#[derive(Args)]
pub struct ExtractArgs {
    /// Input image (PNG or binary PGM), or a directory of them.
    #[arg(long)]
    pub input: std::path::PathBuf,
    /// Output .npy file, or a directory when --input is a directory.
    #[arg(long)]
    pub out: std::path::PathBuf,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Channel preset (row1..row9, bw, n1, n2, n3, n12, n123).
    #[arg(long, conflicts_with = "channels")]
    pub preset: Option<String>,
    /// Explicit comma-separated channel labels, e.g. BW,RE(1),IM(1),I11(1).
    #[arg(long)]
    pub channels: Option<String>,
    /// Map each channel's interior 1st..99th percentile onto [0, 1].
    #[arg(long)]
    pub normalize: bool,
    /// Tensor element type: f32 or f64
    #[arg(long, default_value = "f32")]
    pub dtype: DType,
}

#[derive(Args)]
pub struct VizArgs {
    #[arg(long)]
    pub input: std::path::PathBuf,
    /// Output PNG path.
    #[arg(long)]
    pub out: std::path::PathBuf,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Order to render; must be among --orders.
    #[arg(long, default_value_t = 1)]
    pub order: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SynthKind {
    Wave,
    Crossed,
    Noise,
}

#[derive(Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKind,
    /// Wave direction(s) in degrees; comma-separated for crossed patterns.
    #[arg(long, default_value = "0")]
    pub theta: String,
    /// Wavelength in pixels.
    #[arg(long, default_value_t = 8.0)]
    pub wavelength: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Phase in radians.
    #[arg(long, default_value_t = 0.0)]
    pub phase: f64,
    /// Canvas size as WxH.
    #[arg(long, default_value = "128x128")]
    pub size: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample depth of the written PGM (8 or 16).
    #[arg(long, default_value_t = 8)]
    pub depth: u8,
    #[arg(long)]
    pub out: std::path::PathBuf,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// Only run the noise bound check.
    #[arg(long)]
    pub quick: bool,
    /// Corrupt the derivative kernel sign to demonstrate a failing run.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = commands::configure_threads() {
        eprintln!("error[Config]: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Extract(a) => commands::extract(&a),
        Command::Viz(a) => commands::viz(&a),
        Command::Synth(a) => commands::synth(&a),
        Command::Validate(a) => commands::validate(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e:#}", commands::error_class(&e));
            ExitCode::FAILURE
        }
    }
}
