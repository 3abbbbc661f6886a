use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use siren_harmonics::model::ParameterGroup;

/// Harmonic expansion, bounds, initialization and training of sinusoidal networks.
#[derive(Debug, Parser)]
#[command(name = "siren-harmonics", version, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand a network into its truncated harmonic spectrum.
    Expand(ExpandArgs),
    /// Amplitude bound for a SIREN-initialized network of width n.
    Bound(BoundArgs),
    /// Minimum width able to produce K frequencies with box bound B.
    Width(WidthArgs),
    /// First-layer frequencies fitted to a target spectrum by least squares.
    InitFreq(InitFreqArgs),
    /// Fit a network to a sampled data set with Adam.
    Train(TrainArgs),
    /// Compare a network's analytic spectrum with its FFT over one period.
    Verify(VerifyArgs),
    /// Produce the data files for a named experiment.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// Network JSON file.
    #[arg(long)]
    pub network: PathBuf,
    /// Box bound B on ‖k‖∞ (ignored when --tolerance is given).
    #[arg(long, default_value_t = 10)]
    pub box_bound: u32,
    /// Pick the smallest B whose tail bound is below this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Drop lines with amplitude below this value (added to the tail bound).
    #[arg(long)]
    pub amplitude_floor: Option<f64>,
    /// Merge colliding frequencies and fold onto positive frequencies.
    #[arg(long)]
    pub canonical: bool,
    #[arg(long, value_enum, default_value_t = SpectrumFormat::Csv)]
    pub format: SpectrumFormat,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Network width.
    #[arg(long)]
    pub n: usize,
    /// Comma-separated index; missing trailing entries are zero.
    #[arg(long, allow_hyphen_values = true)]
    pub k: String,
}

#[derive(Debug, Args)]
pub struct WidthArgs {
    /// Number of target frequencies.
    #[arg(long = "K")]
    pub k: u64,
    /// Box bound.
    #[arg(long = "B")]
    pub b: u64,
}

#[derive(Debug, Args)]
pub struct InitFreqArgs {
    /// JSON array of {frequency, amplitude, phase?}.
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub width: usize,
    #[arg(long, default_value_t = 2)]
    pub box_bound: u32,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FreezeGroup {
    Omega,
    Phi,
    HiddenMatrix,
    HiddenBias,
    LinearWeights,
    LinearBias,
}

impl From<FreezeGroup> for ParameterGroup {
    fn from(group: FreezeGroup) -> Self {
        match group {
            FreezeGroup::Omega => ParameterGroup::Omega,
            FreezeGroup::Phi => ParameterGroup::Phi,
            FreezeGroup::HiddenMatrix => ParameterGroup::HiddenMatrix,
            FreezeGroup::HiddenBias => ParameterGroup::HiddenBias,
            FreezeGroup::LinearWeights => ParameterGroup::LinearWeights,
            FreezeGroup::LinearBias => ParameterGroup::LinearBias,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Data set CSV with header `x;y`.
    #[arg(long)]
    pub data: PathBuf,
    /// Starting network JSON; a seeded SIREN initialization is used when absent.
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Width for the seeded initialization.
    #[arg(long, default_value_t = 2)]
    pub width: usize,
    #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
    pub omega_min: f64,
    #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 0.9)]
    pub beta1: f64,
    #[arg(long, default_value_t = 0.999)]
    pub beta2: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub eps: f64,
    /// Parameter groups left untouched by the optimizer.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub freeze: Vec<FreezeGroup>,
    /// Trained network JSON.
    #[arg(long)]
    pub output: PathBuf,
    /// Loss history CSV `step;mse;l2`.
    #[arg(long)]
    pub loss_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// Period the network is expected to have.
    #[arg(long)]
    pub period: f64,
    #[arg(long, default_value_t = 10)]
    pub box_bound: u32,
    /// Samples per period (power of two, at least 64).
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Measured spectrum CSV `frequency;magnitude;phase`.
    #[arg(long)]
    pub spectrum_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    UpperBoundFigure,
    TwelveSines,
    SquareWave,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub name: ExperimentName,
    #[arg(long)]
    pub output_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Twelve-sines variant (1, 2 or 3).
    #[arg(long, default_value_t = 1)]
    pub variant: u8,
    /// Twelve-sines width; defaults to 2.
    #[arg(long)]
    pub width: Option<usize>,
    /// Adam steps for the training experiments.
    #[arg(long, default_value_t = 20_000)]
    pub steps: usize,
    /// Width for the bound figure.
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    /// Largest i in k = (i, 0, …, 0) for the bound figure.
    #[arg(long, default_value_t = 7)]
    pub max_order: i32,
    /// Exclusion radius around the square wave's jumps.
    #[arg(long, default_value_t = 0.02)]
    pub delta: f64,
}
