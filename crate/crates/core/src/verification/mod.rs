//! Independent numerical checks of analytic spectra and periodicity.

mod fft;

pub use fft::{fft, fft_in_place};

use std::io::Write;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{canonical_spectrum, expand_network, Spectrum, TruncationSpec};
use crate::model::SinusoidalNetwork;
use crate::scalar::Scalar;

pub const DEFAULT_SAMPLE_COUNT: usize = 4096;
pub const MIN_SAMPLE_COUNT: usize = 64;
pub const DEFAULT_OVERSHOOT_WINDOW: f64 = 0.2;
pub const DEFAULT_OVERSHOOT_GRID: usize = 10_000;
/// Relative spacing tolerance for the uniform-sampling check.
const UNIFORM_TOLERANCE: f64 = 1e-9;

/// One DFT bin, `coefficient = A − iB` for the content `A cos(βx) + B sin(βx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalBin<T> {
    pub frequency: T,
    pub coefficient: Complex<T>,
}

impl<T: Scalar> EmpiricalBin<T> {
    pub fn magnitude(&self) -> T {
        self.coefficient.norm()
    }

    pub fn cos_amp(&self) -> T {
        self.coefficient.re
    }

    pub fn sin_amp(&self) -> T {
        -self.coefficient.im
    }

    /// `θ` with the bin content equal to `magnitude · sin(βx + θ)`.
    pub fn phase(&self) -> T {
        self.cos_amp().atan2(self.sin_amp())
    }
}

/// Spectrum measured from `N` uniform samples over one period; bin `m` sits at
/// `2πm / period` for `m = 0..=N/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalSpectrum<T> {
    pub bins: Vec<EmpiricalBin<T>>,
    pub sample_count: usize,
    pub period: T,
}

impl<T: Scalar> EmpiricalSpectrum<T> {
    /// Writes `frequency;magnitude;phase`.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new().delimiter(b';').from_writer(sink);
        writer.write_record(["frequency", "magnitude", "phase"])?;
        for bin in &self.bins {
            writer.write_record([
                bin.frequency.to_string(),
                bin.magnitude().to_string(),
                bin.phase().to_string(),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Index of the bin nearest to `frequency`, if it lies within `tolerance`.
    pub fn bin_at(&self, frequency: T, tolerance: T) -> Option<usize> {
        let spacing = T::TAU() / self.period;
        let m = (frequency / spacing).round().to_usize()?;
        (m < self.bins.len() && (self.bins[m].frequency - frequency).abs() <= tolerance)
            .then_some(m)
    }

    /// Mean of `f²` over the period from the bins (Parseval).
    pub fn power(&self) -> T {
        let last = self.bins.len() - 1;
        self.bins
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (m, bin)| {
                let p = bin.coefficient.norm_sqr();
                if m == 0 || (m == last && self.sample_count > 1) {
                    acc + p
                } else {
                    acc + p / T::of(2.0)
                }
            })
    }
}

/// `count` samples of `f` at `x0 + jP/count`, `j = 0..count`.
pub fn sample_period<T: Scalar>(f: impl Fn(T) -> T, x0: T, period: T, count: usize) -> Vec<(T, T)> {
    (0..count)
        .map(|j| {
            let x = x0 + period * T::of_usize(j) / T::of_usize(count);
            (x, f(x))
        })
        .collect()
}

/// Normalized DFT of uniform samples covering exactly one period.
pub fn dft_spectrum<T: Scalar>(samples: &[(T, T)], period: T) -> Result<EmpiricalSpectrum<T>> {
    let n = samples.len();
    if n < MIN_SAMPLE_COUNT || !n.is_power_of_two() {
        return Err(Error::Validation(format!(
            "sample count {n} must be a power of two of at least {MIN_SAMPLE_COUNT}"
        )));
    }
    if !(period > T::zero()) {
        return Err(Error::Validation(format!(
            "period must be positive, got {period}"
        )));
    }
    let step = period / T::of_usize(n);
    let x0 = samples[0].0;
    let tolerance = T::of(UNIFORM_TOLERANCE) * period.max(x0.abs());
    for (j, &(x, _)) in samples.iter().enumerate() {
        let expected = x0 + step * T::of_usize(j);
        if (x - expected).abs() > tolerance {
            return Err(Error::NonUniform(format!(
                "sample {j} at x = {x}, expected {expected} for {n} points per period {period}"
            )));
        }
    }
    let values: Vec<T> = samples.iter().map(|s| s.1).collect();
    let transform = fft(&values)?;
    let count = T::of_usize(n);
    let spacing = T::TAU() / period;
    let bins = (0..=n / 2)
        .map(|m| {
            let frequency = spacing * T::of_usize(m);
            let scale = if m == 0 || m == n / 2 {
                T::one()
            } else {
                T::of(2.0)
            };
            let shift = Complex::from_polar(T::one(), -frequency * x0);
            EmpiricalBin {
                frequency,
                coefficient: transform[m] * shift * (scale / count),
            }
        })
        .collect();
    Ok(EmpiricalSpectrum {
        bins,
        sample_count: n,
        period,
    })
}

/// Per-bin comparison of a measured spectrum with a canonical analytic one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumComparison<T> {
    /// `max_m |c_m(measured) − (A − iB)_m(analytic)|`, constant bin included.
    pub max_deviation: T,
    pub worst_frequency: T,
    /// Analytic lines not on the bin grid or above the last bin.
    pub unmatched_lines: usize,
}

pub fn compare_spectra<T: Scalar>(
    measured: &EmpiricalSpectrum<T>,
    analytic: &Spectrum<T>,
    freq_tol: T,
) -> SpectrumComparison<T> {
    let canonical = canonical_spectrum(analytic, freq_tol);
    let mut expected = vec![Complex::new(T::zero(), T::zero()); measured.bins.len()];
    expected[0] = Complex::new(canonical.constant, T::zero());
    let mut unmatched_lines = 0;
    for line in &canonical.lines {
        match measured.bin_at(line.frequency, freq_tol.max(T::of(1e-6))) {
            Some(m) => expected[m] += Complex::new(line.cos_amp, -line.sin_amp),
            None => unmatched_lines += 1,
        }
    }
    let (worst, max_deviation) = measured
        .bins
        .iter()
        .zip(&expected)
        .enumerate()
        .map(|(m, (bin, e))| (m, (bin.coefficient - e).norm()))
        .fold(
            (0, T::zero()),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    SpectrumComparison {
        max_deviation,
        worst_frequency: measured.bins[worst].frequency,
        unmatched_lines,
    }
}

/// `max |f(x + P) − f(x)|` over `trials` points drawn uniformly from `[−2P, 2P]`.
pub fn periodicity_residual_of<T: Scalar>(
    f: impl Fn(T) -> T,
    period: T,
    trials: usize,
    seed: u64,
) -> Result<T> {
    if !(period > T::zero()) || trials == 0 {
        return Err(Error::Validation(
            "periodicity check needs P > 0 and trials >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reach = 2.0 * period.as_f64();
    Ok((0..trials).fold(T::zero(), |worst, _| {
        let x = T::of(rng.random_range(-reach..=reach));
        worst.max((f(x + period) - f(x)).abs())
    }))
}

pub fn periodicity_residual<T: Scalar>(
    net: &SinusoidalNetwork<T>,
    period: T,
    trials: usize,
    seed: u64,
) -> Result<T> {
    periodicity_residual_of(|x| net.evaluate(x), period, trials, seed)
}

/// `−Σ_{j=1}^{num_terms} 2/(iπ) sin(iπx)` over odd `i = 2j − 1`.
pub fn square_wave_fourier_partial<T: Scalar>(num_terms: usize, x: T) -> T {
    (1..=num_terms).fold(T::zero(), |acc, j| {
        let i = T::of_usize(2 * j - 1);
        acc - T::of(2.0) / (i * T::PI()) * (i * T::PI() * x).sin()
    })
}

/// `max (|f(x)| − |plateau|)` over `grid` equally spaced points strictly inside
/// `(jump, jump + window)`.
pub fn gibbs_overshoot_with<T: Scalar>(
    f: impl Fn(T) -> T,
    jump: T,
    plateau: T,
    window: T,
    grid: usize,
) -> Result<T> {
    if !(window > T::zero()) || grid == 0 {
        return Err(Error::Validation(
            "overshoot window and grid must be positive".into(),
        ));
    }
    let step = window / T::of_usize(grid + 1);
    Ok((1..=grid)
        .map(|m| f(jump + step * T::of_usize(m)).abs() - plateau.abs())
        .fold(T::neg_infinity(), T::max))
}

/// [`gibbs_overshoot_with`] on the default 10⁴-point grid.
pub fn gibbs_overshoot<T: Scalar>(f: impl Fn(T) -> T, jump: T, plateau: T, window: T) -> Result<T> {
    gibbs_overshoot_with(f, jump, plateau, window, DEFAULT_OVERSHOOT_GRID)
}

/// Analytic-versus-measured summary for a network assumed `period`-periodic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerificationReport<T> {
    pub box_bound: u32,
    pub tail_bound: T,
    pub spectrum: SpectrumComparison<T>,
    /// `max |f(x) − spectrum(x)|` over the sampling grid.
    pub max_pointwise_deviation: T,
    pub periodicity_residual: T,
    pub sample_count: usize,
}

pub fn verify_network<T: Scalar>(
    net: &SinusoidalNetwork<T>,
    period: T,
    spec: &TruncationSpec<T>,
    sample_count: usize,
    seed: u64,
) -> Result<VerificationReport<T>> {
    let spectrum = expand_network(net, spec)?;
    let samples = sample_period(|x| net.evaluate(x), T::zero(), period, sample_count);
    let measured = dft_spectrum(&samples, period)?;
    let comparison = compare_spectra(
        &measured,
        &spectrum,
        T::of(crate::expansion::DEFAULT_FREQUENCY_TOLERANCE),
    );
    let max_pointwise_deviation = samples.iter().fold(T::zero(), |worst, &(x, y)| {
        worst.max((y - spectrum.evaluate(x)).abs())
    });
    Ok(VerificationReport {
        box_bound: spec.box_bound,
        tail_bound: spectrum.tail_bound,
        spectrum: comparison,
        max_pointwise_deviation,
        periodicity_residual: periodicity_residual(net, period, 1000, seed)?,
        sample_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initialization::{periodic_network, PeriodicInitSpec};
    use std::f64::consts::PI;

    #[test]
    fn unit_sine_single_line() {
        let samples = sample_period(|x: f64| (2.0 * PI * x).sin(), 0.0, 1.0, 256);
        let s = dft_spectrum(&samples, 1.0).unwrap();
        assert!((s.bins[1].frequency - 2.0 * PI).abs() < 1e-15);
        assert!((s.bins[1].magnitude() - 1.0).abs() < 1e-12);
        assert!((s.bins[1].sin_amp() - 1.0).abs() < 1e-12);
        assert!(s
            .bins
            .iter()
            .enumerate()
            .all(|(m, b)| m == 1 || b.magnitude() < 1e-12));
        assert!(s.bins[1].phase().abs() < 1e-12);
    }

    #[test]
    fn offset_origin_and_phase() {
        let f = |x: f64| 0.7 * (3.0 * x + 0.4).sin() + 0.2;
        let samples = sample_period(f, -1.3, 2.0 * PI, 128);
        let s = dft_spectrum(&samples, 2.0 * PI).unwrap();
        assert!((s.bins[3].magnitude() - 0.7).abs() < 1e-12);
        assert!((s.bins[3].phase() - 0.4).abs() < 1e-12);
        assert!((s.bins[0].coefficient.re - 0.2).abs() < 1e-12);
        assert!((s.power() - (0.04 + 0.49 / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_signal_and_errors() {
        let zero = sample_period(|_| 0.0f64, 0.0, 1.0, 64);
        assert!(dft_spectrum(&zero, 1.0)
            .unwrap()
            .bins
            .iter()
            .all(|b| b.magnitude() < 1e-14));
        assert!(dft_spectrum(&zero[..32], 1.0).is_err());
        let mut bent = zero.clone();
        bent[5].0 += 1e-3;
        assert!(matches!(
            dft_spectrum(&bent, 1.0),
            Err(Error::NonUniform(_))
        ));
    }

    #[test]
    fn periodic_network_matches_analytic_spectrum() {
        let spec = PeriodicInitSpec::new(2.0, vec![1, 2]).unwrap();
        let net = periodic_network(&spec, 5).unwrap();
        let report = verify_network(&net, 2.0, &TruncationSpec::new(14), 1024, 0).unwrap();
        assert_eq!(report.spectrum.unmatched_lines, 0);
        assert!(report.tail_bound < 1e-9);
        assert!(
            report.spectrum.max_deviation < 1e-8 + report.tail_bound,
            "{report:?}"
        );
        assert!(report.max_pointwise_deviation <= report.tail_bound + 1e-12);
        assert!(report.periodicity_residual < 1e-9);
    }

    #[test]
    fn periodicity_examples() {
        let constant = SinusoidalNetwork::<f64>::zeros(2)
            .unwrap()
            .with_linear_bias(0.3)
            .unwrap();
        assert_eq!(periodicity_residual(&constant, 1.0, 50, 0).unwrap(), 0.0);
        let spec = PeriodicInitSpec::new(2.0, vec![1, 3, 5]).unwrap();
        let net = periodic_network(&spec, 2).unwrap();
        assert!(periodicity_residual(&net, 2.0, 200, 1).unwrap() < 1e-9);
        let control = net.with_omega(vec![1.0, 2f64.sqrt(), 0.5]).unwrap();
        assert!(periodicity_residual(&control, 2.0 * PI, 200, 1).unwrap() > 1e-3);
    }

    #[test]
    fn square_wave_partial_sums() {
        for n in [1, 5, 46] {
            assert_eq!(square_wave_fourier_partial(n, 0.0), 0.0);
        }
        assert!((square_wave_fourier_partial(1, -0.5) - 2.0 / PI).abs() < 1e-15);
        // mpmath: S_46(−1/2)
        let s46: f64 = square_wave_fourier_partial(46, -0.5);
        assert!((s46 - 0.496_540_518_468_833_97).abs() < 1e-13);
        assert!((s46 - 0.5).abs() < 0.02);
    }

    #[test]
    fn gibbs_values() {
        let exact = gibbs_overshoot(crate::training::square_wave, 0.0, 0.5, 0.2).unwrap();
        assert_eq!(exact, 0.0);
        let partial: f64 =
            gibbs_overshoot(|x| square_wave_fourier_partial(46, x), 0.0, 0.5, 0.2).unwrap();
        // mpmath: first lobe at x = 1/92
        assert!(
            (partial - 0.089_509_564_527_780_97).abs() < 1e-5,
            "{partial}"
        );
        assert!(gibbs_overshoot(|x: f64| x, 0.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn empirical_csv() {
        let samples = sample_period(|x: f64| (2.0 * PI * x).cos(), 0.0, 1.0, 64);
        let s = dft_spectrum(&samples, 1.0).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("frequency;magnitude;phase\n"));
        assert_eq!(text.lines().count(), 34);
    }
}
