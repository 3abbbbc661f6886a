use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use siren_harmonics::expansion::{siren_amplitude_bound, MultiIndex};
use siren_harmonics::training::{
    square_wave, square_wave_run, twelve_sines_run, uniform_grid, ExperimentRun, OmegaInit,
    SquareWaveConfig, TwelveSinesConfig,
};
use siren_harmonics::verification::{
    gibbs_overshoot, square_wave_fourier_partial, DEFAULT_OVERSHOOT_WINDOW,
};

use crate::args::{ExperimentArgs, ExperimentName};
use crate::{to_json, write_bytes, CliError, CliResult};

/// Samples per plotted curve in the `.dat` files.
const PLOT_POINTS: usize = 2001;
/// Odd terms in the Fourier partial sum compared against the square-wave fit.
const PARTIAL_SUM_TERMS: usize = 46;

/// Collects output files so the manifest can checksum them in write order.
struct Outputs<'a> {
    dir: &'a Path,
    files: Vec<(String, String)>,
}

impl<'a> Outputs<'a> {
    fn new(dir: &'a Path) -> CliResult<Self> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_owned(),
            source,
        })?;
        Ok(Self {
            dir,
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        write_bytes(&self.dir.join(name), bytes)?;
        self.files
            .push((name.to_owned(), hex::encode(Sha256::digest(bytes))));
        Ok(())
    }

    fn finish(self, config: Value, out: &mut dyn Write) -> CliResult<()> {
        let outputs: serde_json::Map<String, Value> = self
            .files
            .iter()
            .map(|(name, digest)| (name.clone(), json!({ "sha256": digest })))
            .collect();
        let manifest = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "config": config,
            "outputs": outputs,
        });
        write_bytes(
            &self.dir.join("manifest.json"),
            to_json(&manifest).as_bytes(),
        )?;
        for (name, _) in &self.files {
            let _ = writeln!(out, "{}", self.dir.join(name).display());
        }
        let _ = writeln!(out, "{}", self.dir.join("manifest.json").display());
        Ok(())
    }
}

pub fn run(a: ExperimentArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut outputs = Outputs::new(&a.output_dir)?;
    let config = match a.name {
        ExperimentName::UpperBoundFigure => upper_bound_figure(&a, &mut outputs)?,
        ExperimentName::TwelveSines => twelve_sines(&a, &mut outputs)?,
        ExperimentName::SquareWave => square_wave_experiment(&a, &mut outputs)?,
    };
    outputs.finish(config, out)
}

fn upper_bound_figure(a: &ExperimentArgs, outputs: &mut Outputs) -> CliResult<Value> {
    if a.n == 0 || a.max_order < 0 {
        return Err(CliError::Usage(
            "--n must be positive and --max-order non-negative".into(),
        ));
    }
    let mut csv = String::from("i;bound\n");
    let mut dat = String::from("# i bound\n");
    for i in 0..=a.max_order {
        let k = MultiIndex::axis(a.n, 0, i);
        let value: f64 = siren_amplitude_bound(a.n, &k);
        writeln!(csv, "{i};{value:e}").unwrap();
        writeln!(dat, "{i} {value:e}").unwrap();
    }
    outputs.write("bounds.csv", csv.as_bytes())?;
    outputs.write("bounds.dat", dat.as_bytes())?;
    Ok(json!({
        "name": "upper-bound-figure",
        "n": a.n,
        "max_order": a.max_order,
    }))
}

fn write_training_outputs(run: &ExperimentRun<f64>, outputs: &mut Outputs) -> CliResult<()> {
    let mut data = Vec::new();
    run.samples.write_csv(&mut data)?;
    outputs.write("dataset.csv", &data)?;
    let mut loss = Vec::new();
    run.result.write_history_csv(&mut loss)?;
    outputs.write("loss.csv", &loss)?;
    outputs.write(
        "initial_network.json",
        (run.initial.to_json()? + "\n").as_bytes(),
    )?;
    outputs.write(
        "network.json",
        (run.result.network.to_json()? + "\n").as_bytes(),
    )?;
    Ok(())
}

fn loss_summary(run: &ExperimentRun<f64>) -> Value {
    let last = run.result.final_loss();
    json!({ "mse": last.mse, "l2": last.l2 })
}

fn twelve_sines(a: &ExperimentArgs, outputs: &mut Outputs) -> CliResult<Value> {
    let width = a.width.unwrap_or(2);
    let mut config = TwelveSinesConfig::<f64>::reference(a.variant, width, a.seed)?;
    config.options.steps = a.steps;
    let (target, run) = twelve_sines_run(&config)?;

    outputs.write("target.json", (target.to_json()? + "\n").as_bytes())?;
    write_training_outputs(&run, outputs)?;
    let (lo, hi) = run.samples.domain();
    let mut dat = String::from("# x target fit\n");
    for x in uniform_grid(lo, hi, PLOT_POINTS) {
        writeln!(
            dat,
            "{x:e} {:e} {:e}",
            target.evaluate(x),
            run.result.network.evaluate(x)
        )
        .unwrap();
    }
    outputs.write("fit.dat", dat.as_bytes())?;

    let omega = match &config.omega {
        OmegaInit::Uniform(lo, hi) => json!({ "uniform": [lo, hi] }),
        OmegaInit::Frozen(values) => json!({ "frozen": values }),
    };
    Ok(json!({
        "name": "twelve-sines",
        "variant": a.variant,
        "width": width,
        "seed": a.seed,
        "steps": a.steps,
        "learning_rate": config.options.learning_rate,
        "omega": omega,
        "final_loss": loss_summary(&run),
    }))
}

fn square_wave_experiment(a: &ExperimentArgs, outputs: &mut Outputs) -> CliResult<Value> {
    let mut config = SquareWaveConfig::<f64>::reference(a.seed);
    config.delta = a.delta;
    config.options.steps = a.steps;
    let run = square_wave_run(&config)?;
    write_training_outputs(&run, outputs)?;

    let net = &run.result.network;
    let (lo, hi) = run.samples.domain();
    let mut fit_dat = String::from("# x square_wave fit\n");
    let mut partial_dat = String::from("# x partial_sum\n");
    for x in uniform_grid(lo, hi, PLOT_POINTS) {
        writeln!(fit_dat, "{x:e} {:e} {:e}", square_wave(x), net.evaluate(x)).unwrap();
        writeln!(
            partial_dat,
            "{x:e} {:e}",
            square_wave_fourier_partial(PARTIAL_SUM_TERMS, x)
        )
        .unwrap();
    }
    outputs.write("fit.dat", fit_dat.as_bytes())?;
    outputs.write("partial_sum.dat", partial_dat.as_bytes())?;

    let network_overshoot =
        gibbs_overshoot(|x| net.evaluate(x), 0.0, 0.5, DEFAULT_OVERSHOOT_WINDOW)?;
    let partial_overshoot = gibbs_overshoot(
        |x| square_wave_fourier_partial(PARTIAL_SUM_TERMS, x),
        0.0,
        0.5,
        DEFAULT_OVERSHOOT_WINDOW,
    )?;
    let gibbs = json!({
        "jump": 0.0,
        "plateau": 0.5,
        "window": DEFAULT_OVERSHOOT_WINDOW,
        "network_overshoot": network_overshoot,
        "partial_sum_terms": PARTIAL_SUM_TERMS,
        "partial_sum_overshoot": partial_overshoot,
    });
    outputs.write("gibbs.json", to_json(&gibbs).as_bytes())?;

    Ok(json!({
        "name": "square-wave",
        "seed": a.seed,
        "steps": a.steps,
        "delta": a.delta,
        "period": config.period,
        "multipliers": config.multipliers,
        "final_loss": loss_summary(&run),
    }))
}
