//! Initialization schemes derived from the harmonic expansion.

mod least_squares;

pub use least_squares::{
    fit_frequencies_to_rows, least_squares_frequencies, solve_least_squares, FrequencyFit,
    LeastSquaresSolution, SolveStatus,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::model::SinusoidalNetwork;
use crate::scalar::Scalar;

/// Uniform initialization: hidden and linear weights in `(−√(6/n), √(6/n))`,
/// first-layer frequencies in `omega_range`, phases and biases zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirenInit<T> {
    pub omega_range: (T, T),
}

impl<T: Scalar> Default for SirenInit<T> {
    fn default() -> Self {
        Self {
            omega_range: (T::of(-30.0), T::of(30.0)),
        }
    }
}

impl<T: Scalar> SirenInit<T> {
    pub fn with_omega_range(lo: T, hi: T) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Validation(format!(
                "omega range ({lo}, {hi}) is empty"
            )));
        }
        Ok(Self {
            omega_range: (lo, hi),
        })
    }

    /// Draw order: ω, then the hidden matrix row by row, then the linear weights.
    pub fn build(&self, n: usize, seed: u64) -> Result<SinusoidalNetwork<T>> {
        if n == 0 {
            return Err(Error::Validation("network width must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = siren_weight_range::<T>(n);
        let (lo, hi) = self.omega_range;
        let omega = (0..n).map(|_| open_uniform(&mut rng, lo, hi)).collect();
        let hidden = (0..n)
            .map(|_| (0..n).map(|_| open_uniform(&mut rng, -r, r)).collect())
            .collect();
        let linear = (0..n).map(|_| open_uniform(&mut rng, -r, r)).collect();
        SinusoidalNetwork::new(
            omega,
            vec![T::zero(); n],
            hidden,
            vec![T::zero(); n],
            linear,
            T::zero(),
        )
    }
}

/// `√(6/n)`
pub fn siren_weight_range<T: Scalar>(n: usize) -> T {
    (T::of(6.0) / T::of_usize(n)).sqrt()
}

/// Sample strictly inside `(lo, hi)` after rounding to `T`.
fn open_uniform<T: Scalar>(rng: &mut ChaCha8Rng, lo: T, hi: T) -> T {
    let (lo64, hi64) = (lo.as_f64(), hi.as_f64());
    loop {
        let v = T::of(rng.random_range(lo64..hi64));
        if v > lo && v < hi {
            return v;
        }
    }
}

/// [`SirenInit::build`] with the default ω range `(−30, 30)`.
pub fn siren_init<T: Scalar>(n: usize, seed: u64) -> Result<SinusoidalNetwork<T>> {
    SirenInit::default().build(n, seed)
}

/// Smallest width `n` with `((2B+1)^n − 1)/2 >= K`, i.e. `⌈ln(2K+1) / ln(2B+1)⌉`,
/// evaluated in integers.
pub fn width_lower_bound(k: u64, b: u64) -> Result<usize> {
    if k == 0 || b == 0 {
        return Err(Error::Validation(
            "width bound needs K >= 1 and B >= 1".into(),
        ));
    }
    let target = 2 * u128::from(k) + 1;
    let side = 2 * u128::from(b) + 1;
    let mut reach = 1u128;
    let mut n = 0;
    while reach < target {
        reach = reach.saturating_mul(side);
        n += 1;
    }
    Ok(n)
}

/// Target harmonic sum `Σ amplitude_i sin(frequency_i x + phase_i)`, sorted by
/// descending `|amplitude|` (stable, so equal amplitudes keep input order).
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpectrum<T> {
    frequencies: Vec<T>,
    amplitudes: Vec<T>,
    phases: Option<Vec<T>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
struct TargetEntry<T> {
    frequency: T,
    amplitude: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phase: Option<T>,
}

impl<T: Scalar> TargetSpectrum<T> {
    pub fn new(frequencies: Vec<T>, amplitudes: Vec<T>, phases: Option<Vec<T>>) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::Validation(
                "target spectrum needs at least one frequency".into(),
            ));
        }
        check_len("amplitudes", frequencies.len(), amplitudes.len())?;
        if let Some(p) = &phases {
            check_len("phases", frequencies.len(), p.len())?;
        }
        let all_finite = frequencies
            .iter()
            .chain(&amplitudes)
            .chain(phases.iter().flatten())
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::Validation(
                "target spectrum entries must be finite".into(),
            ));
        }
        for (i, f) in frequencies.iter().enumerate() {
            if frequencies[..i].contains(f) {
                return Err(Error::Validation(format!("frequency {f} appears twice")));
            }
        }
        let mut order: Vec<usize> = (0..frequencies.len()).collect();
        order.sort_by(|&i, &j| {
            amplitudes[j]
                .abs()
                .partial_cmp(&amplitudes[i].abs())
                .expect("finite amplitudes")
        });
        let pick = |v: &[T]| order.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Ok(Self {
            frequencies: pick(&frequencies),
            amplitudes: pick(&amplitudes),
            phases: phases.as_deref().map(pick),
        })
    }

    /// Parses a JSON array of `{frequency, amplitude, phase?}`; phases must be given
    /// for every entry or for none.
    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<TargetEntry<T>> = serde_json::from_str(text).map_err(Error::from_json)?;
        let with_phase = entries.iter().filter(|e| e.phase.is_some()).count();
        if with_phase != 0 && with_phase != entries.len() {
            return Err(Error::Parse {
                field: "phase".into(),
                message: "phase must be given for all entries or none".into(),
            });
        }
        let phases = (with_phase > 0).then(|| entries.iter().filter_map(|e| e.phase).collect());
        Self::new(
            entries.iter().map(|e| e.frequency).collect(),
            entries.iter().map(|e| e.amplitude).collect(),
            phases,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        let entries: Vec<TargetEntry<T>> = (0..self.len())
            .map(|i| TargetEntry {
                frequency: self.frequencies[i],
                amplitude: self.amplitudes[i],
                phase: self.phases.as_ref().map(|p| p[i]),
            })
            .collect();
        serde_json::to_string_pretty(&entries).map_err(Error::from_json)
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequencies(&self) -> &[T] {
        &self.frequencies
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amplitudes
    }

    pub fn phases(&self) -> Option<&[T]> {
        self.phases.as_deref()
    }

    pub fn evaluate(&self, x: T) -> T {
        (0..self.len()).fold(T::zero(), |acc, i| {
            let phase = self.phases.as_ref().map_or(T::zero(), |p| p[i]);
            acc + self.amplitudes[i] * (self.frequencies[i] * x + phase).sin()
        })
    }
}

/// First layer `ω_i = l_i · 2π / P`, making the whole network `P`-periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicInitSpec<T> {
    period: T,
    integer_multipliers: Vec<i64>,
}

impl<T: Scalar> PeriodicInitSpec<T> {
    pub fn new(period: T, integer_multipliers: Vec<i64>) -> Result<Self> {
        if !(period > T::zero()) || !period.is_finite() {
            return Err(Error::Validation(format!(
                "period must be positive, got {period}"
            )));
        }
        if integer_multipliers.is_empty() {
            return Err(Error::Validation(
                "at least one integer multiplier is required".into(),
            ));
        }
        Ok(Self {
            period,
            integer_multipliers,
        })
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn integer_multipliers(&self) -> &[i64] {
        &self.integer_multipliers
    }
}

pub fn periodic_first_layer<T: Scalar>(spec: &PeriodicInitSpec<T>) -> Vec<T> {
    let base = T::TAU() / spec.period;
    spec.integer_multipliers
        .iter()
        .map(|&l| T::of_int(l) * base)
        .collect()
}

/// [`siren_init`] with the first layer replaced by [`periodic_first_layer`].
pub fn periodic_network<T: Scalar>(
    spec: &PeriodicInitSpec<T>,
    seed: u64,
) -> Result<SinusoidalNetwork<T>> {
    let n = spec.integer_multipliers.len();
    siren_init(n, seed)?.with_omega(periodic_first_layer(spec))
}
