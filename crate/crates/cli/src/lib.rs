//! Command-line front end. [`run`] maps a command line to an exit code:
//! 0 on success, 1 for usage and validation errors, 2 for resource limits and
//! training divergence.

mod args;
mod experiment;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;
use serde_json::json;

use siren_harmonics::expansion::{
    box_bound_for_tolerance, canonical_spectrum, expand_network, siren_amplitude_bound,
    spectrum_csv_string, spectrum_json, MultiIndex, TruncationSpec, DEFAULT_FREQUENCY_TOLERANCE,
};
use siren_harmonics::initialization::{least_squares_frequencies, width_lower_bound, SirenInit};
use siren_harmonics::model::FreezeMask;
use siren_harmonics::training::{fit, TrainOptions};
use siren_harmonics::verification::{dft_spectrum, sample_period, verify_network};
use siren_harmonics::{Network, SampleSet, TargetSpectrum};

use args::{Cli, Command, SpectrumFormat};

pub const THREADS_ENV: &str = "SIREN_HARMONICS_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: io::Error },
    Library(siren_harmonics::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_resource() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(message) => f.write_str(message),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<siren_harmonics::Error> for CliError {
    fn from(e: siren_harmonics::Error) -> Self {
        CliError::Library(e)
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;

pub(crate) fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match output {
        Some(path) => write_bytes(path, text.as_bytes()),
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Runs one command line, writing results to standard output and diagnostics to
/// standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match configure_threads().and_then(|()| dispatch(cli.command, out, err)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Expand(a) => expand(a, out, err),
        Command::Bound(a) => bound(a, out),
        Command::Width(a) => {
            let n = width_lower_bound(a.k, a.b)?;
            emit(None, &format!("{n}\n"), out)
        }
        Command::InitFreq(a) => init_freq(a, out),
        Command::Train(a) => train(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Experiment(a) => experiment::run(a, out),
    }
}

pub(crate) fn load_network(path: &Path) -> CliResult<Network> {
    Ok(Network::from_json(&read_text(path)?)?)
}

/// CSV has no metadata slot, so the tail bound goes to the diagnostic stream.
fn expand(a: args::ExpandArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let net = load_network(&a.network)?;
    let box_bound = match a.tolerance {
        Some(tol) => {
            let rows: Vec<&[f64]> = net.hidden_rows().collect();
            box_bound_for_tolerance(&rows, net.linear_weights(), tol, 64).ok_or_else(|| {
                CliError::Library(siren_harmonics::Error::Resource(format!(
                    "no box bound up to 64 reaches tail bound {tol:e}"
                )))
            })?
        }
        None => a.box_bound,
    };
    let mut spec = TruncationSpec::new(box_bound);
    if let Some(floor) = a.amplitude_floor {
        spec = spec.with_amplitude_floor(floor)?;
    }
    let mut spectrum = expand_network(&net, &spec)?;
    if a.canonical {
        spectrum = canonical_spectrum(&spectrum, DEFAULT_FREQUENCY_TOLERANCE);
    }
    let text = match a.format {
        SpectrumFormat::Csv => {
            let _ = writeln!(err, "tail_bound {:e}", spectrum.tail_bound);
            spectrum_csv_string(&spectrum)?
        }
        SpectrumFormat::Json => spectrum_json(&spectrum)? + "\n",
    };
    emit(a.output.as_deref(), &text, out)
}

fn bound(a: args::BoundArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let given: MultiIndex = a.k.parse()?;
    if given.len() > a.n {
        return Err(CliError::Usage(format!(
            "index has {} entries but the width is {}",
            given.len(),
            a.n
        )));
    }
    let mut entries = given.entries().to_vec();
    entries.resize(a.n, 0);
    let value: f64 = siren_amplitude_bound(a.n, &MultiIndex::new(entries));
    emit(None, &format!("{value:e}\n"), out)
}

#[derive(Serialize)]
struct InitFreqReport {
    omega: Vec<f64>,
    residual_norm: f64,
    status: siren_harmonics::initialization::SolveStatus,
    rows: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase_residual_norm: Option<f64>,
}

fn init_freq(a: args::InitFreqArgs, out: &mut dyn Write) -> CliResult<()> {
    let target = TargetSpectrum::from_json(&read_text(&a.target)?)?;
    let fit = least_squares_frequencies(&target, a.width, a.box_bound)?;
    let report = InitFreqReport {
        omega: fit.omega,
        residual_norm: fit.residual_norm,
        status: fit.status,
        rows: fit.rows.iter().map(ToString::to_string).collect(),
        phi: fit.phases.as_ref().map(|p| p.0.clone()),
        phase_residual_norm: fit.phases.as_ref().map(|p| p.1),
    };
    emit(a.output.as_deref(), &to_json(&report), out)
}

fn train(a: args::TrainArgs, out: &mut dyn Write) -> CliResult<()> {
    let data = SampleSet::read_csv(read_text(&a.data)?.as_bytes())?;
    let net = match &a.network {
        Some(path) => load_network(path)?,
        None => SirenInit::with_omega_range(a.omega_min, a.omega_max)?.build(a.width, a.seed)?,
    };
    let freeze = (!a.freeze.is_empty()).then(|| {
        a.freeze
            .iter()
            .fold(FreezeMask::none(net.width()), |mask, &g| {
                mask.with_group(g.into())
            })
    });
    let opts = TrainOptions {
        steps: a.steps,
        learning_rate: a.learning_rate,
        adam_beta1: a.beta1,
        adam_beta2: a.beta2,
        adam_eps: a.eps,
        freeze,
        seed: a.seed,
    };
    let result = fit(&net, &data, &opts)?;
    write_bytes(&a.output, (result.network.to_json()? + "\n").as_bytes())?;
    if let Some(path) = &a.loss_csv {
        let mut buf = Vec::new();
        result.write_history_csv(&mut buf)?;
        write_bytes(path, &buf)?;
    }
    let last = result.final_loss();
    emit(
        None,
        &to_json(&json!({"steps": a.steps, "mse": last.mse, "l2": last.l2})),
        out,
    )
}

fn verify(a: args::VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let net = load_network(&a.network)?;
    let spec = TruncationSpec::new(a.box_bound);
    let report = verify_network(&net, a.period, &spec, a.samples, a.seed)?;
    if let Some(path) = &a.spectrum_csv {
        let samples = sample_period(|x| net.evaluate(x), 0.0, a.period, a.samples);
        let mut buf = Vec::new();
        dft_spectrum(&samples, a.period)?.write_csv(&mut buf)?;
        write_bytes(path, &buf)?;
    }
    emit(None, &to_json(&report), out)
}
