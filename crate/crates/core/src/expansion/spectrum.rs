use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_len, Result};
use crate::expansion::bounds::tail_bound;
use crate::expansion::index::{enumerate_indices, MultiIndex, TruncationSpec};
use crate::model::SinusoidalNetwork;
use crate::scalar::Scalar;
use crate::special_functions::bessel_j;

/// Default absolute tolerance for merging colliding frequencies.
pub const DEFAULT_FREQUENCY_TOLERANCE: f64 = 1e-9;

const PARALLEL_MIN_INDICES: usize = 4096;

/// One term `α_k(a) sin(β_k x + λ_k)` of a neuron's harmonic expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicTerm<T> {
    pub index: MultiIndex,
    /// `α_k(a) = ∏ J_{k_i}(a_i)`
    pub amplitude: T,
    /// `β_k(ω) = Σ k_i ω_i`
    pub frequency: T,
    /// `λ_k(φ, b) = Σ k_i φ_i + b`
    pub phase: T,
}

/// A harmonic in sine-cosine and exponential form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumLine<T> {
    pub index: MultiIndex,
    pub frequency: T,
    /// Signed `α_k` for neuron spectra; `√(A² + B²)` for network and canonical spectra.
    pub amplitude: T,
    /// `A_k`, coefficient of `cos(β x)`
    pub cos_amp: T,
    /// `B_k`, coefficient of `sin(β x)`
    pub sin_amp: T,
    pub complex_coeff: Complex<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectrumForm {
    /// One line per multi-index, frequencies of either sign; `Σ c_k e^{iβx}` is the signal.
    Indexed,
    /// Distinct positive frequencies; `c = (A − iB)/2` pairs with its conjugate at `−β`.
    Canonical,
}

/// Truncated harmonic expansion with a certified sup-norm error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub lines: Vec<SpectrumLine<T>>,
    pub constant: T,
    pub truncation: TruncationSpec<T>,
    /// `sup_x |signal(x) − self.evaluate(x)| <= tail_bound`
    pub tail_bound: T,
    pub form: SpectrumForm,
}

impl<T: Scalar> Spectrum<T> {
    /// `constant + Σ A cos(βx) + B sin(βx)`.
    pub fn evaluate(&self, x: T) -> T {
        self.lines.iter().fold(self.constant, |acc, line| {
            let (s, c) = (line.frequency * x).sin_cos();
            acc + line.cos_amp * c + line.sin_amp * s
        })
    }

    /// The same signal summed in exponential form; the imaginary part is rounding noise.
    pub fn evaluate_exponential(&self, x: T) -> Complex<T> {
        let constant = Complex::new(self.constant, T::zero());
        self.lines.iter().fold(constant, |acc, line| {
            let rotation = Complex::from_polar(T::one(), line.frequency * x);
            let term = line.complex_coeff * rotation;
            match self.form {
                SpectrumForm::Indexed => acc + term,
                SpectrumForm::Canonical => acc + term + term.conj(),
            }
        })
    }

    pub fn frequencies(&self) -> Vec<T> {
        self.lines.iter().map(|l| l.frequency).collect()
    }

    /// Mean power over a common period, `constant² + ½ Σ (A² + B²)`.
    ///
    /// Only meaningful once colliding frequencies are merged, so indexed spectra are
    /// folded first.
    pub fn power(&self) -> T {
        let folded;
        let canonical = match self.form {
            SpectrumForm::Canonical => self,
            SpectrumForm::Indexed => {
                folded = canonical_spectrum(self, T::of(DEFAULT_FREQUENCY_TOLERANCE));
                &folded
            }
        };
        canonical
            .lines
            .iter()
            .fold(canonical.constant.powi(2), |acc, l| {
                acc + (l.cos_amp.powi(2) + l.sin_amp.powi(2)) / T::of(2.0)
            })
    }
}

/// `J_j(a_i)` for `|j| <= B`, one row per weight.
struct BesselTable<T> {
    box_bound: i32,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> BesselTable<T> {
    fn new(weights: &[T], box_bound: u32) -> Result<Self> {
        let b = box_bound as i32;
        let rows = weights
            .iter()
            .map(|&a| (-b..=b).map(|j| bessel_j(j, a)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { box_bound: b, rows })
    }

    fn amplitude(&self, k: &MultiIndex) -> T {
        self.rows
            .iter()
            .zip(k.entries())
            .fold(T::one(), |acc, (row, &ki)| {
                acc * row[(ki + self.box_bound) as usize]
            })
    }
}

fn map_indices<R, F>(indices: &[MultiIndex], f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&MultiIndex) -> R + Sync + Send,
{
    if indices.len() >= PARALLEL_MIN_INDICES {
        indices.par_iter().map(f).collect()
    } else {
        indices.iter().map(f).collect()
    }
}

fn check_neuron_dims<T>(a: &[T], omega: &[T], phi: &[T]) -> Result<()> {
    check_len("omega", a.len(), omega.len())?;
    check_len("phi", a.len(), phi.len())
}

/// The `k`-th term of the expansion of `sin(Σ a_i sin(ω_i x + φ_i) + b)`.
pub fn harmonic_term<T: Scalar>(
    a: &[T],
    omega: &[T],
    phi: &[T],
    b: T,
    k: &MultiIndex,
) -> Result<HarmonicTerm<T>> {
    check_neuron_dims(a, omega, phi)?;
    check_len("index", a.len(), k.len())?;
    let mut amplitude = T::one();
    for (&ai, &ki) in a.iter().zip(k.entries()) {
        amplitude *= bessel_j(ki, ai)?;
    }
    Ok(HarmonicTerm {
        index: k.clone(),
        amplitude,
        frequency: k.dot(omega),
        phase: k.dot(phi) + b,
    })
}

/// `(A_k, B_k) = (α sin λ, α cos λ)`, so the term equals `A cos(βx) + B sin(βx)`.
pub fn sine_cosine_coeffs<T: Scalar>(term: &HarmonicTerm<T>) -> (T, T) {
    let (s, c) = term.phase.sin_cos();
    (term.amplitude * s, term.amplitude * c)
}

/// Exponential-form coefficient `c_k` such that `Σ_k c_k e^{i⟨k,ω⟩x}` reproduces the neuron.
///
/// `c_k = −i α_k e^{i⟨k,φ⟩} (e^{ib} − (−1)^{Σk_i} e^{−ib}) / 2`.
pub fn exponential_coeff<T: Scalar>(term: &HarmonicTerm<T>, b: T) -> Complex<T> {
    exponential_from_parts(term.amplitude, term.phase, b, term.index.sum())
}

fn exponential_from_parts<T: Scalar>(amplitude: T, phase: T, b: T, index_sum: i64) -> Complex<T> {
    // e^{i⟨k,φ⟩}(e^{ib} − s e^{−ib}) = e^{iλ} − s e^{i(λ − 2b)}
    let sign = if index_sum.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    };
    let bracket =
        Complex::from_polar(T::one(), phase) - Complex::from_polar(sign, phase - T::of(2.0) * b);
    Complex::new(T::zero(), -amplitude / T::of(2.0)) * bracket
}

/// Expansion of one neuron over the box `‖k‖_∞ <= B`.
///
/// Lines follow [`enumerate_indices`] order and include `k = 0` (frequency zero).
pub fn expand_neuron<T: Scalar>(
    a: &[T],
    omega: &[T],
    phi: &[T],
    b: T,
    spec: &TruncationSpec<T>,
) -> Result<Spectrum<T>> {
    check_neuron_dims(a, omega, phi)?;
    let indices = enumerate_indices(a.len(), spec)?;
    let table = BesselTable::new(a, spec.box_bound)?;
    let lines = map_indices(&indices, |k| {
        let term = HarmonicTerm {
            index: k.clone(),
            amplitude: table.amplitude(k),
            frequency: k.dot(omega),
            phase: k.dot(phi) + b,
        };
        let (cos_amp, sin_amp) = sine_cosine_coeffs(&term);
        SpectrumLine {
            complex_coeff: exponential_coeff(&term, b),
            index: term.index,
            frequency: term.frequency,
            amplitude: term.amplitude,
            cos_amp,
            sin_amp,
        }
    });
    let (lines, dropped) = apply_floor(lines, spec.amplitude_floor);
    Ok(Spectrum {
        lines,
        constant: T::zero(),
        truncation: *spec,
        tail_bound: tail_bound(a, spec.box_bound) + dropped,
        form: SpectrumForm::Indexed,
    })
}

/// Expansion of the whole network: every neuron contributes over the same index set,
/// weighted by its linear-layer coefficient.
pub fn expand_network<T: Scalar>(
    net: &SinusoidalNetwork<T>,
    spec: &TruncationSpec<T>,
) -> Result<Spectrum<T>> {
    let n = net.width();
    let indices = enumerate_indices(n, spec)?;
    let tables = net
        .hidden_rows()
        .map(|row| BesselTable::new(row, spec.box_bound))
        .collect::<Result<Vec<_>>>()?;
    let omega = net.omega();
    let phi = net.phi();
    let bias = net.hidden_bias();
    let weights = net.linear_weights();

    let lines = map_indices(&indices, |k| {
        let theta = k.dot(phi);
        let index_sum = k.sum();
        let mut cos_amp = T::zero();
        let mut sin_amp = T::zero();
        let mut complex_coeff = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            let alpha = tables[i].amplitude(k);
            let phase = theta + bias[i];
            let (s, c) = phase.sin_cos();
            cos_amp += weights[i] * alpha * s;
            sin_amp += weights[i] * alpha * c;
            complex_coeff += exponential_from_parts(alpha, phase, bias[i], index_sum) * weights[i];
        }
        SpectrumLine {
            index: k.clone(),
            frequency: k.dot(omega),
            amplitude: cos_amp.hypot(sin_amp),
            cos_amp,
            sin_amp,
            complex_coeff,
        }
    });
    let (lines, dropped) = apply_floor(lines, spec.amplitude_floor);
    let tail = net
        .hidden_rows()
        .zip(weights)
        .fold(T::zero(), |acc, (row, &c)| {
            acc + c.abs() * tail_bound(row, spec.box_bound)
        });
    Ok(Spectrum {
        lines,
        constant: net.linear_bias(),
        truncation: *spec,
        tail_bound: tail + dropped,
        form: SpectrumForm::Indexed,
    })
}

fn apply_floor<T: Scalar>(
    lines: Vec<SpectrumLine<T>>,
    floor: Option<T>,
) -> (Vec<SpectrumLine<T>>, T) {
    let Some(floor) = floor else {
        return (lines, T::zero());
    };
    let mut dropped = T::zero();
    let kept = lines
        .into_iter()
        .filter(|line| {
            let size = line.cos_amp.hypot(line.sin_amp);
            if line.amplitude.abs() < floor {
                dropped += size;
                false
            } else {
                true
            }
        })
        .collect();
    (kept, dropped)
}

/// Folds negative frequencies onto positive ones, merges frequencies closer than
/// `freq_tol` and moves zero-frequency content into the constant.
///
/// Output lines are sorted by ascending frequency; each keeps the index of its first
/// contributor in input order (sign-flipped when folded).
pub fn canonical_spectrum<T: Scalar>(spectrum: &Spectrum<T>, freq_tol: T) -> Spectrum<T> {
    struct Folded<T> {
        frequency: T,
        cos_amp: T,
        sin_amp: T,
        index: MultiIndex,
        order: usize,
    }

    let mut constant = spectrum.constant;
    let mut folded = Vec::with_capacity(spectrum.lines.len());
    for (order, line) in spectrum.lines.iter().enumerate() {
        let (frequency, sin_amp, index) = if line.frequency < T::zero() {
            (-line.frequency, -line.sin_amp, line.index.negated())
        } else {
            (line.frequency, line.sin_amp, line.index.clone())
        };
        if frequency <= freq_tol {
            constant += line.cos_amp;
            continue;
        }
        folded.push(Folded {
            frequency,
            cos_amp: line.cos_amp,
            sin_amp,
            index,
            order,
        });
    }
    folded.sort_by(|x, y| {
        x.frequency
            .partial_cmp(&y.frequency)
            .expect("finite frequencies")
            .then(x.order.cmp(&y.order))
    });

    let mut groups: Vec<Folded<T>> = Vec::new();
    for item in folded {
        match groups.last_mut() {
            Some(group) if item.frequency - group.frequency <= freq_tol => {
                group.cos_amp += item.cos_amp;
                group.sin_amp += item.sin_amp;
                if item.order < group.order {
                    group.order = item.order;
                    group.index = item.index;
                }
            }
            _ => groups.push(item),
        }
    }

    let lines = groups
        .into_iter()
        .map(|g| SpectrumLine {
            index: g.index,
            frequency: g.frequency,
            amplitude: g.cos_amp.hypot(g.sin_amp),
            cos_amp: g.cos_amp,
            sin_amp: g.sin_amp,
            complex_coeff: Complex::new(g.cos_amp, -g.sin_amp) / T::of(2.0),
        })
        .collect();
    Spectrum {
        lines,
        constant,
        truncation: spectrum.truncation,
        tail_bound: spectrum.tail_bound,
        form: SpectrumForm::Canonical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::bounds::amplitude_upper_bound;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const J1_AT_1: f64 = 0.440_050_585_744_933_5;

    fn grid(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
        (0..count).map(move |i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
    }

    #[test]
    fn zero_index_term() {
        let t = harmonic_term(
            &[0.0, 0.0],
            &[1.0, 2.0],
            &[0.3, 0.1],
            0.7,
            &MultiIndex::zero(2),
        )
        .unwrap();
        assert_eq!((t.amplitude, t.frequency, t.phase), (1.0, 0.0, 0.7));

        let a = [0.4, -1.1];
        let t = harmonic_term(&a, &[1.0, 2.0], &[0.3, 0.1], 0.7, &MultiIndex::zero(2)).unwrap();
        let j0: f64 = a.iter().map(|&x| bessel_j(0, x).unwrap()).product();
        assert_eq!(t.amplitude, j0);
        let (cos_amp, _) = sine_cosine_coeffs(&t);
        assert!((cos_amp - j0 * 0.7f64.sin()).abs() < 1e-16);
    }

    #[test]
    fn single_term_values() {
        let t = harmonic_term(&[1.0], &[PI], &[0.0], 0.0, &MultiIndex::new(vec![1])).unwrap();
        assert!((t.amplitude - J1_AT_1).abs() < 1e-15);
        assert_eq!(t.frequency, PI);
        assert_eq!(t.phase, 0.0);
        assert!(harmonic_term(&[1.0], &[PI, 1.0], &[0.0], 0.0, &MultiIndex::new(vec![1])).is_err());
    }

    #[test]
    fn sine_cosine_special_phases() {
        let mut t = HarmonicTerm {
            index: MultiIndex::new(vec![1]),
            amplitude: 0.3,
            frequency: 2.0,
            phase: 0.0,
        };
        assert_eq!(sine_cosine_coeffs(&t), (0.0, 0.3));
        t.phase = PI / 2.0;
        let (a, b) = sine_cosine_coeffs(&t);
        assert!(b.abs() < 1e-15);
        assert_eq!(a, 0.3);
    }

    #[test]
    fn sine_cosine_matches_amplitude_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let t = HarmonicTerm {
                index: MultiIndex::new(vec![1]),
                amplitude: rng.random_range(-1.0..1.0),
                frequency: rng.random_range(-20.0..20.0),
                phase: rng.random_range(-6.0..6.0),
            };
            let (a, b) = sine_cosine_coeffs(&t);
            for _ in 0..100 {
                let x: f64 = rng.random_range(-3.0..3.0);
                let lhs = a * (t.frequency * x).cos() + b * (t.frequency * x).sin();
                let rhs = t.amplitude * (t.frequency * x + t.phase).sin();
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exponential_coefficient_properties() {
        let term = harmonic_term(
            &[0.8, 0.5],
            &[1.0, 3.0],
            &[0.2, -0.4],
            0.0,
            &MultiIndex::new(vec![1, 1]),
        )
        .unwrap();
        assert_eq!(exponential_coeff(&term, 0.0), Complex::new(0.0, 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let a: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
            let omega: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
            let phi: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            let b = rng.random_range(-3.0..3.0);
            let k = MultiIndex::new((0..3).map(|_| rng.random_range(-4..=4)).collect());
            let plus = harmonic_term(&a, &omega, &phi, b, &k).unwrap();
            let minus = harmonic_term(&a, &omega, &phi, b, &k.negated()).unwrap();
            let diff = exponential_coeff(&minus, b) - exponential_coeff(&plus, b).conj();
            assert!(diff.norm() < 1e-14);
        }
    }

    #[test]
    fn exponential_sum_is_real_and_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = [0.9f64, -0.6];
        let omega = [1.3, 2.9];
        let phi = [0.4, -1.0];
        let b = 0.8;
        let s = expand_neuron(&a, &omega, &phi, b, &TruncationSpec::new(8)).unwrap();
        for _ in 0..100 {
            let x = rng.random_range(-4.0..4.0);
            let z = s.evaluate_exponential(x);
            assert!(z.im.abs() < 1e-12);
            assert!((z.re - s.evaluate(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_weights_give_constant() {
        let s = expand_neuron(
            &[0.0, 0.0],
            &[1.0, 2.0],
            &[0.1, 0.2],
            0.6,
            &TruncationSpec::new(3),
        )
        .unwrap();
        assert_eq!(s.tail_bound, 0.0);
        for x in grid(-3.0, 3.0, 50) {
            assert!((s.evaluate(x) - 0.6f64.sin()).abs() < 1e-15);
        }
        let c = canonical_spectrum(&s, 1e-9);
        assert!((c.constant - 0.6f64.sin()).abs() < 1e-15);
        assert!(c.lines.iter().all(|l| l.amplitude == 0.0));
    }

    #[test]
    fn sine_of_sine_identity() {
        let s = expand_neuron(&[1.0], &[1.0], &[0.0], 0.0, &TruncationSpec::new(15)).unwrap();
        let mut worst: f64 = 0.0;
        for x in grid(-PI, PI, 1000) {
            worst = worst.max((s.evaluate(x) - x.sin().sin()).abs());
        }
        assert!(worst < 1e-12, "{worst}");
        // the truncation tail is far below rounding here; allow a few ulps
        assert!(
            worst <= s.tail_bound + 8.0 * f64::EPSILON,
            "{worst} vs {}",
            s.tail_bound
        );
        let coarse = expand_neuron(&[1.0], &[1.0], &[0.0], 0.0, &TruncationSpec::new(4)).unwrap();
        for x in grid(-PI, PI, 1000) {
            assert!((coarse.evaluate(x) - x.sin().sin()).abs() <= coarse.tail_bound);
        }
        // ±k pairs cancel for even k, leaving odd harmonics only
        let c = canonical_spectrum(&s, 1e-9);
        for line in &c.lines {
            let k = line.index.entries()[0];
            assert!(
                k % 2 == 1 || line.amplitude < 1e-16,
                "k={k} amp={}",
                line.amplitude
            );
        }
        assert!(c.constant.abs() < 1e-16);
    }

    #[test]
    fn width_one_network_is_scaled_neuron() {
        let net = SinusoidalNetwork::new(
            vec![1.7f64],
            vec![0.3],
            vec![vec![0.9]],
            vec![-0.4],
            vec![1.5],
            0.25,
        )
        .unwrap();
        let spec = TruncationSpec::new(10);
        let s_net = expand_network(&net, &spec).unwrap();
        let s_neuron = expand_neuron(&[0.9], &[1.7], &[0.3], -0.4, &spec).unwrap();
        assert_eq!(s_net.constant, 0.25);
        assert_eq!(s_net.lines.len(), s_neuron.lines.len());
        for (l, m) in s_net.lines.iter().zip(&s_neuron.lines) {
            assert_eq!(l.index, m.index);
            assert_eq!(l.frequency, m.frequency);
            assert!((l.cos_amp - 1.5 * m.cos_amp).abs() < 1e-15);
            assert!((l.sin_amp - 1.5 * m.sin_amp).abs() < 1e-15);
            assert!((l.complex_coeff - m.complex_coeff * 1.5).norm() < 1e-15);
        }
        assert!((s_net.tail_bound - 1.5 * s_neuron.tail_bound).abs() < 1e-18);
    }

    #[test]
    fn network_expansion_within_tail() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 2;
        let r = (6.0f64 / n as f64).sqrt();
        let hidden: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(-r..r)).collect())
            .collect();
        let net = SinusoidalNetwork::new(
            (0..n).map(|_| rng.random_range(-30.0..30.0)).collect(),
            (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
            hidden,
            (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
            (0..n).map(|_| rng.random_range(-r..r)).collect(),
            0.1,
        )
        .unwrap();
        let s = expand_network(&net, &TruncationSpec::new(12)).unwrap();
        for x in grid(-1.0, 1.0, 1000) {
            assert!((net.evaluate(x) - s.evaluate(x)).abs() <= s.tail_bound);
        }
    }

    #[test]
    fn hidden_rows_do_not_change_frequencies() {
        let base = SinusoidalNetwork::new(
            vec![1.0, 2.5],
            vec![0.0, 0.3],
            vec![vec![0.5, 0.2], vec![-0.3, 0.9]],
            vec![0.1, 0.2],
            vec![1.0, -1.0],
            0.0,
        )
        .unwrap();
        let other = SinusoidalNetwork::new(
            vec![1.0, 2.5],
            vec![0.0, 0.3],
            vec![vec![-1.5, 0.0], vec![2.0, 0.1]],
            vec![0.7, -0.2],
            vec![0.3, 2.0],
            1.0,
        )
        .unwrap();
        let spec = TruncationSpec::new(4);
        assert_eq!(
            expand_network(&base, &spec).unwrap().frequencies(),
            expand_network(&other, &spec).unwrap().frequencies()
        );
    }

    #[test]
    fn canonical_merges_and_preserves_values() {
        let net = SinusoidalNetwork::new(
            vec![1.0f64, 2.0],
            vec![0.2, -0.1],
            vec![vec![0.6, -0.4], vec![0.3, 0.8]],
            vec![0.5, -0.3],
            vec![0.7, -1.1],
            0.05,
        )
        .unwrap();
        let s = expand_network(&net, &TruncationSpec::new(6)).unwrap();
        let c = canonical_spectrum(&s, 1e-9);
        assert!(c
            .lines
            .windows(2)
            .all(|w| w[1].frequency - w[0].frequency > 1e-9));
        assert!(c.lines.iter().all(|l| l.frequency > 0.0));
        // (2,0) and (0,1) collide at frequency 2
        let two = c
            .lines
            .iter()
            .find(|l| (l.frequency - 2.0).abs() < 1e-12)
            .unwrap();
        let contributions: f64 = s
            .lines
            .iter()
            .filter(|l| (l.frequency - 2.0).abs() < 1e-12)
            .map(|l| l.cos_amp)
            .sum::<f64>()
            + s.lines
                .iter()
                .filter(|l| (l.frequency + 2.0).abs() < 1e-12)
                .map(|l| l.cos_amp)
                .sum::<f64>();
        assert!((two.cos_amp - contributions).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = rng.random_range(-5.0..5.0);
            assert!((c.evaluate(x) - s.evaluate(x)).abs() < 1e-12);
            let z = c.evaluate_exponential(x);
            assert!((z.re - s.evaluate(x)).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
        let again = canonical_spectrum(&c, 1e-9);
        assert_eq!(again, c);
    }

    #[test]
    fn negative_frequency_line_folds() {
        let line = |f: f64, a: f64, b: f64, k: i32| SpectrumLine {
            index: MultiIndex::new(vec![k]),
            frequency: f,
            amplitude: a.hypot(b),
            cos_amp: a,
            sin_amp: b,
            complex_coeff: Complex::new(0.0, 0.0),
        };
        let s = Spectrum {
            lines: vec![line(-1.5, 0.3, 0.2, -1), line(1.5, -0.1, 0.4, 1)],
            constant: 0.0,
            truncation: TruncationSpec::new(1),
            tail_bound: 0.0,
            form: SpectrumForm::Indexed,
        };
        let c = canonical_spectrum(&s, 1e-9);
        assert_eq!(c.lines.len(), 1);
        assert_eq!(c.lines[0].frequency, 1.5);
        assert_eq!(c.lines[0].index, MultiIndex::new(vec![1]));
        assert!((c.lines[0].cos_amp - 0.2).abs() < 1e-15);
        assert!((c.lines[0].sin_amp - 0.2).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let x = rng.random_range(-5.0..5.0);
            assert!((c.evaluate(x) - s.evaluate(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_floor_extends_tail() {
        let a = [1.2, 0.7];
        let omega = [1.0, 2.3];
        let phi = [0.0, 0.5];
        let full = expand_neuron(&a, &omega, &phi, 0.3, &TruncationSpec::new(6)).unwrap();
        let spec = TruncationSpec::new(6).with_amplitude_floor(1e-4).unwrap();
        let floored = expand_neuron(&a, &omega, &phi, 0.3, &spec).unwrap();
        assert!(floored.lines.len() < full.lines.len());
        assert!(floored.tail_bound > full.tail_bound);
        for x in grid(-3.0, 3.0, 300) {
            let exact =
                (a[0] * (omega[0] * x + phi[0]).sin() + a[1] * (omega[1] * x + phi[1]).sin() + 0.3)
                    .sin();
            assert!((floored.evaluate(x) - exact).abs() <= floored.tail_bound);
        }
        assert!(TruncationSpec::<f64>::new(2)
            .with_amplitude_floor(-1.0)
            .is_err());
    }

    #[test]
    fn amplitudes_respect_upper_bound() {
        let a = [1.4f64, -0.3, 0.9];
        let s = expand_neuron(
            &a,
            &[1.0, 2.0, 3.0],
            &[0.0; 3],
            0.0,
            &TruncationSpec::new(4),
        )
        .unwrap();
        for line in &s.lines {
            assert!(line.amplitude.abs() < amplitude_upper_bound(&a, &line.index).unwrap());
        }
    }

    #[test]
    fn single_precision_expansion() {
        let s = expand_neuron(&[1.0f32], &[1.0], &[0.0], 0.0, &TruncationSpec::new(10)).unwrap();
        for i in 0..100 {
            let x = -3.0 + 0.06 * i as f32;
            assert!((s.evaluate(x) - x.sin().sin()).abs() < 1e-5);
        }
    }
}
