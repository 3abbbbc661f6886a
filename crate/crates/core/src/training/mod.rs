//! Full-batch Adam fitting of sinusoidal networks.

mod data;
mod experiments;

pub use data::{
    make_square_wave, make_square_wave_with, make_twelve_sines, square_wave, uniform_grid,
    SampleSet, SQUARE_WAVE_SAMPLES, TWELVE_SINES_SAMPLES,
};
pub use experiments::{
    square_wave_run, twelve_sines_run, ExperimentRun, OmegaInit, SquareWaveConfig,
    TwelveSinesConfig,
};

use std::io::Write;

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::model::{FreezeMask, SinusoidalNetwork};
use crate::scalar::Scalar;

/// Loss above which training aborts.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossReport<T> {
    pub mse: T,
    /// `√(mse · domain length)`, a Riemann estimate of `‖f − y‖₂` on the domain.
    pub l2: T,
}

impl<T: Scalar> LossReport<T> {
    fn from_mse(mse: T, domain_length: T) -> Self {
        Self {
            mse,
            l2: (mse * domain_length).sqrt(),
        }
    }
}

pub fn mse<T: Scalar>(net: &SinusoidalNetwork<T>, data: &SampleSet<T>) -> Result<LossReport<T>> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let total = data.points().iter().fold(T::zero(), |acc, &(x, y)| {
        acc + (net.evaluate(x) - y).powi(2)
    });
    Ok(LossReport::from_mse(
        total / T::of_usize(data.len()),
        data.domain_length(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOptions<T> {
    pub steps: usize,
    pub learning_rate: T,
    pub adam_beta1: T,
    pub adam_beta2: T,
    pub adam_eps: T,
    pub freeze: Option<FreezeMask>,
    /// Recorded for reproducibility; full-batch Adam itself draws no randomness.
    pub seed: u64,
}

impl<T: Scalar> Default for TrainOptions<T> {
    fn default() -> Self {
        Self {
            steps: 20_000,
            learning_rate: T::of(1e-3),
            adam_beta1: T::of(0.9),
            adam_beta2: T::of(0.999),
            adam_eps: T::of(1e-8),
            freeze: None,
            seed: 0,
        }
    }
}

impl<T: Scalar> TrainOptions<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |b: T| b >= T::zero() && b < T::one();
        if !(self.learning_rate > T::zero()) || !self.learning_rate.is_finite() {
            return Err(Error::Validation("learning rate must be positive".into()));
        }
        if !unit(self.adam_beta1) || !unit(self.adam_beta2) {
            return Err(Error::Validation("Adam betas must lie in [0, 1)".into()));
        }
        if !(self.adam_eps > T::zero()) {
            return Err(Error::Validation("Adam epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Adam state over a flat parameter vector.
#[derive(Debug, Clone)]
pub struct Adam<T> {
    beta1: T,
    beta2: T,
    eps: T,
    learning_rate: T,
    first: Vec<T>,
    second: Vec<T>,
    step: i32,
}

impl<T: Scalar> Adam<T> {
    pub fn new(len: usize, opts: &TrainOptions<T>) -> Self {
        Self {
            beta1: opts.adam_beta1,
            beta2: opts.adam_beta2,
            eps: opts.adam_eps,
            learning_rate: opts.learning_rate,
            first: vec![T::zero(); len],
            second: vec![T::zero(); len],
            step: 0,
        }
    }

    /// One bias-corrected update; entries with `frozen[i]` are not read or written.
    pub fn step(&mut self, params: &mut [T], grad: &[T], frozen: Option<&[bool]>) {
        self.step += 1;
        let c1 = T::one() - self.beta1.powi(self.step);
        let c2 = T::one() - self.beta2.powi(self.step);
        for i in 0..params.len() {
            if frozen.is_some_and(|f| f[i]) {
                continue;
            }
            let g = grad[i];
            self.first[i] = self.beta1 * self.first[i] + (T::one() - self.beta1) * g;
            self.second[i] = self.beta2 * self.second[i] + (T::one() - self.beta2) * g * g;
            let m_hat = self.first[i] / c1;
            let v_hat = self.second[i] / c2;
            params[i] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult<T> {
    pub network: SinusoidalNetwork<T>,
    /// Loss after `0, 1, …, steps` updates.
    pub history: Vec<LossReport<T>>,
}

impl<T: Scalar> FitResult<T> {
    pub fn final_loss(&self) -> LossReport<T> {
        *self.history.last().expect("history holds the initial loss")
    }

    pub fn write_history_csv<W: Write>(&self, sink: W) -> Result<()> {
        write_history_csv(&self.history, sink)
    }
}

/// Writes `step;mse;l2`.
pub fn write_history_csv<T: Scalar, W: Write>(history: &[LossReport<T>], sink: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().delimiter(b';').from_writer(sink);
    writer.write_record(["step", "mse", "l2"])?;
    for (step, loss) in history.iter().enumerate() {
        writer.write_record([step.to_string(), loss.mse.to_string(), loss.l2.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

/// MSE and its gradient over the full batch.
fn loss_and_gradient<T: Scalar>(
    net: &SinusoidalNetwork<T>,
    data: &SampleSet<T>,
    grad: &mut [T],
) -> T {
    grad.iter_mut().for_each(|g| *g = T::zero());
    let weight = T::of(2.0) / T::of_usize(data.len());
    let mut point = vec![T::zero(); grad.len()];
    let mut total = T::zero();
    for &(x, y) in data.points() {
        point.iter_mut().for_each(|g| *g = T::zero());
        let residual = net.accumulate_gradient(x, T::one(), &mut point) - y;
        total += residual * residual;
        let scale = weight * residual;
        for (g, &p) in grad.iter_mut().zip(&point) {
            *g += scale * p;
        }
    }
    total / T::of_usize(data.len())
}

pub fn fit<T: Scalar>(
    net: &SinusoidalNetwork<T>,
    data: &SampleSet<T>,
    opts: &TrainOptions<T>,
) -> Result<FitResult<T>> {
    fit_observed(net, data, opts, |_, _, _| {})
}

/// [`fit`] calling `observer(step, network, loss)` for every recorded loss.
pub fn fit_observed<T: Scalar>(
    net: &SinusoidalNetwork<T>,
    data: &SampleSet<T>,
    opts: &TrainOptions<T>,
    mut observer: impl FnMut(usize, &SinusoidalNetwork<T>, &LossReport<T>),
) -> Result<FitResult<T>> {
    opts.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let width = net.width();
    let frozen = opts.freeze.as_ref().map(FreezeMask::as_slice);
    if let Some(mask) = &opts.freeze {
        check_len("freeze mask width", width, mask.width())?;
    }
    let mut params = net.to_flat();
    let mut grad = vec![T::zero(); params.len()];
    let mut adam = Adam::new(params.len(), opts);
    let mut current = net.clone();
    let mut history = Vec::with_capacity(opts.steps + 1);
    let length = data.domain_length();

    for step in 0..=opts.steps {
        let loss = loss_and_gradient(&current, data, &mut grad);
        if !loss.is_finite() || loss > T::of(DIVERGENCE_LIMIT) {
            return Err(Error::Divergence {
                step,
                loss: loss.as_f64(),
            });
        }
        let report = LossReport::from_mse(loss, length);
        observer(step, &current, &report);
        history.push(report);
        if step == opts.steps {
            break;
        }
        adam.step(&mut params, &grad, frozen);
        current = SinusoidalNetwork::from_flat(width, &params)?;
    }
    Ok(FitResult {
        network: current,
        history,
    })
}
