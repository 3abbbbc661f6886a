use crate::error::{Error, Result};
use crate::initialization::{periodic_network, PeriodicInitSpec, SirenInit, TargetSpectrum};
use crate::model::{FreezeMask, ParameterGroup, SinusoidalNetwork};
use crate::scalar::Scalar;
use crate::training::{
    fit, make_square_wave, make_twelve_sines, FitResult, SampleSet, TrainOptions,
};

/// First-layer initialization for an experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum OmegaInit<T> {
    /// Uniform in `(lo, hi)`, trained.
    Uniform(T, T),
    /// Fixed values, frozen during training.
    Frozen(Vec<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwelveSinesConfig<T> {
    pub variant: u8,
    pub width: usize,
    pub omega: OmegaInit<T>,
    pub seed: u64,
    pub options: TrainOptions<T>,
}

impl<T: Scalar> TwelveSinesConfig<T> {
    /// Reference setups: variant 1 draws `ω` in `(−5, 5)`; variant 2 freezes
    /// `ω = (2π, 46π)`; variant 3 freezes `(2π, 22π)` at width 2 and
    /// `(2π, 22π, 46π)` at width 3.
    pub fn reference(variant: u8, width: usize, seed: u64) -> Result<Self> {
        let tau = T::TAU();
        let multiples =
            |ls: &[i64]| OmegaInit::Frozen(ls.iter().map(|&l| T::of_int(l) * tau).collect());
        let omega = match (variant, width) {
            (1, _) => OmegaInit::Uniform(T::of(-5.0), T::of(5.0)),
            (2, 2) => multiples(&[1, 23]),
            (3, 2) => multiples(&[1, 11]),
            (3, 3) => multiples(&[1, 11, 23]),
            _ => {
                return Err(Error::Validation(format!(
                    "no reference setup for twelve-sines variant {variant} at width {width}"
                )))
            }
        };
        Ok(Self {
            variant,
            width,
            omega,
            seed,
            options: TrainOptions {
                seed,
                ..TrainOptions::default()
            },
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentRun<T> {
    pub initial: SinusoidalNetwork<T>,
    pub samples: SampleSet<T>,
    pub result: FitResult<T>,
}

fn initial_network<T: Scalar>(
    width: usize,
    omega: &OmegaInit<T>,
    seed: u64,
) -> Result<(SinusoidalNetwork<T>, Option<FreezeMask>)> {
    match omega {
        OmegaInit::Uniform(lo, hi) => Ok((
            SirenInit::with_omega_range(*lo, *hi)?.build(width, seed)?,
            None,
        )),
        OmegaInit::Frozen(values) => {
            let net = SirenInit::default()
                .build(width, seed)?
                .with_omega(values.clone())?;
            Ok((
                net,
                Some(FreezeMask::none(width).with_group(ParameterGroup::Omega)),
            ))
        }
    }
}

pub fn twelve_sines_run<T: Scalar>(
    config: &TwelveSinesConfig<T>,
) -> Result<(TargetSpectrum<T>, ExperimentRun<T>)> {
    let (target, samples) = make_twelve_sines(config.variant)?;
    let (initial, freeze) = initial_network(config.width, &config.omega, config.seed)?;
    let options = TrainOptions {
        freeze: freeze.or_else(|| config.options.freeze.clone()),
        ..config.options.clone()
    };
    let result = fit(&initial, &samples, &options)?;
    Ok((
        target,
        ExperimentRun {
            initial,
            samples,
            result,
        },
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquareWaveConfig<T> {
    pub delta: T,
    pub period: T,
    pub multipliers: Vec<i64>,
    pub seed: u64,
    pub options: TrainOptions<T>,
}

impl<T: Scalar> SquareWaveConfig<T> {
    /// Width 5, `ω = π·(1, 3, 5, 7, 9)` frozen, period 2, `δ = 0.02`.
    pub fn reference(seed: u64) -> Self {
        Self {
            delta: T::of(0.02),
            period: T::of(2.0),
            multipliers: vec![1, 3, 5, 7, 9],
            seed,
            options: TrainOptions {
                seed,
                ..TrainOptions::default()
            },
        }
    }
}

pub fn square_wave_run<T: Scalar>(config: &SquareWaveConfig<T>) -> Result<ExperimentRun<T>> {
    let samples = make_square_wave(config.delta)?;
    let spec = PeriodicInitSpec::new(config.period, config.multipliers.clone())?;
    let initial = periodic_network(&spec, config.seed)?;
    let options = TrainOptions {
        freeze: Some(FreezeMask::none(initial.width()).with_group(ParameterGroup::Omega)),
        ..config.options.clone()
    };
    let result = fit(&initial, &samples, &options)?;
    Ok(ExperimentRun {
        initial,
        samples,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_setups() {
        let c = TwelveSinesConfig::<f64>::reference(2, 2, 0).unwrap();
        match c.omega {
            OmegaInit::Frozen(w) => {
                assert!((w[0] - 2.0 * std::f64::consts::PI).abs() < 1e-15);
                assert!((w[1] - 46.0 * std::f64::consts::PI).abs() < 1e-12);
            }
            _ => panic!("variant 2 freezes the first layer"),
        }
        assert!(TwelveSinesConfig::<f64>::reference(2, 4, 0).is_err());
        assert_eq!(c.options.steps, 20_000);
    }

    #[test]
    fn short_runs_keep_frozen_layer() {
        let mut c = TwelveSinesConfig::<f64>::reference(3, 3, 7).unwrap();
        c.options.steps = 20;
        let (_, run) = twelve_sines_run(&c).unwrap();
        assert_eq!(run.result.network.omega(), run.initial.omega());
        assert_eq!(run.result.history.len(), 21);

        let mut s = SquareWaveConfig::<f64>::reference(1);
        s.options.steps = 20;
        let run = square_wave_run(&s).unwrap();
        assert_eq!(run.result.network.omega(), run.initial.omega());
        assert!(run.result.final_loss().mse < run.result.history[0].mse);
    }
}
