use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initialization::TargetSpectrum;
use crate::scalar::Scalar;

/// Sampled target `(x, y)` pairs on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet<T> {
    points: Vec<(T, T)>,
    domain: (T, T),
}

#[derive(Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
struct Row<T> {
    x: T,
    y: T,
}

impl<T: Scalar> SampleSet<T> {
    pub fn new(points: Vec<(T, T)>, domain: (T, T)) -> Result<Self> {
        let (lo, hi) = domain;
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Validation(format!("invalid domain [{lo}, {hi}]")));
        }
        for &(x, y) in &points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Validation("samples must be finite".into()));
            }
            if x < lo || x > hi {
                return Err(Error::Validation(format!(
                    "sample x = {x} outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { points, domain })
    }

    /// `f` sampled on `count` equally spaced points of `[lo, hi]`, endpoints included.
    pub fn from_fn(lo: T, hi: T, count: usize, f: impl Fn(T) -> T) -> Result<Self> {
        let points = uniform_grid(lo, hi, count)
            .into_iter()
            .map(|x| (x, f(x)))
            .collect();
        Self::new(points, (lo, hi))
    }

    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn domain(&self) -> (T, T) {
        self.domain
    }

    pub fn domain_length(&self) -> T {
        self.domain.1 - self.domain.0
    }

    pub fn xs(&self) -> impl Iterator<Item = T> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new().delimiter(b';').from_writer(sink);
        for &(x, y) in &self.points {
            writer.serialize(Row { x, y })?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Reads `x;y` rows; the domain is the hull of the sampled `x`.
    pub fn read_csv<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b';')
            .from_reader(source);
        let points = reader
            .deserialize::<Row<T>>()
            .map(|row| row.map(|r| (r.x, r.y)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if points.is_empty() {
            return Err(Error::EmptyData);
        }
        let lo = points.iter().map(|p| p.0).fold(T::infinity(), T::min);
        let hi = points.iter().map(|p| p.0).fold(T::neg_infinity(), T::max);
        Self::new(points, (lo, hi))
    }
}

/// `count` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid<T: Scalar>(lo: T, hi: T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::of_usize(count - 1);
            (0..count)
                .map(|i| {
                    if i + 1 == count {
                        hi
                    } else {
                        lo + step * T::of_usize(i)
                    }
                })
                .collect()
        }
    }
}

pub const TWELVE_SINES_SAMPLES: usize = 1024;
pub const SQUARE_WAVE_SAMPLES: usize = 1024;

/// Amplitude of the `k`-th of twelve sines (`k = 1..=12`) for a variant.
fn twelve_sines_amplitude(variant: u8, k: usize) -> f64 {
    match variant {
        // linear from 1 down to 0.005
        1 => 1.0 + (k as f64 - 1.0) * (0.005 - 1.0) / 11.0,
        2 => {
            if k >= 11 {
                1.0
            } else {
                0.1
            }
        }
        _ => {
            if k >= 11 || k == 5 || k == 6 {
                1.0
            } else {
                0.1
            }
        }
    }
}

/// Target `Σ_{k=1}^{12} c_k sin(τ_k x)` and its samples on a 1024-point grid over `[−1, 1]`.
///
/// Variant 1: `τ_k = 2k+1`, `c_k` linear from 1 to 0.005. Variant 2: `τ_k = (2k+1)2π`,
/// baseline 0.1 with `c_11 = c_12 = 1`. Variant 3: variant 2 plus `c_5 = c_6 = 1`.
pub fn make_twelve_sines<T: Scalar>(variant: u8) -> Result<(TargetSpectrum<T>, SampleSet<T>)> {
    if !(1..=3).contains(&variant) {
        return Err(Error::Validation(format!(
            "twelve-sines variant must be 1, 2 or 3, got {variant}"
        )));
    }
    let scale = if variant == 1 { T::one() } else { T::TAU() };
    let frequencies: Vec<T> = (1..=12).map(|k| T::of_usize(2 * k + 1) * scale).collect();
    let amplitudes: Vec<T> = (1..=12)
        .map(|k| T::of(twelve_sines_amplitude(variant, k)))
        .collect();
    let target = TargetSpectrum::new(frequencies, amplitudes, None)?;
    let samples = SampleSet::from_fn(-T::one(), T::one(), TWELVE_SINES_SAMPLES, |x| {
        target.evaluate(x)
    })?;
    Ok((target, samples))
}

/// `0.5` on `[−1, 0]`, `−0.5` on `(0, 1]`.
pub fn square_wave<T: Scalar>(x: T) -> T {
    if x <= T::zero() {
        T::of(0.5)
    } else {
        T::of(-0.5)
    }
}

/// Square wave on a 1024-point grid over `[−1, 1]`, dropping points closer than
/// `delta` to the jumps at `−1`, `0` and `1`.
pub fn make_square_wave<T: Scalar>(delta: T) -> Result<SampleSet<T>> {
    make_square_wave_with(delta, SQUARE_WAVE_SAMPLES)
}

pub fn make_square_wave_with<T: Scalar>(delta: T, count: usize) -> Result<SampleSet<T>> {
    if !(delta >= T::zero() && delta < T::of(0.5)) {
        return Err(Error::Validation(format!(
            "delta must lie in [0, 0.5), got {delta}"
        )));
    }
    let jumps = [-T::one(), T::zero(), T::one()];
    let points = uniform_grid(-T::one(), T::one(), count)
        .into_iter()
        .filter(|&x| jumps.iter().all(|&j| (x - j).abs() >= delta))
        .map(|x| (x, square_wave(x)))
        .collect();
    SampleSet::new(points, (-T::one(), T::one()))
}
