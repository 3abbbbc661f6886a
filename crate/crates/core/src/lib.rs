//! Harmonic analysis of single-hidden-layer sinusoidal networks.
//!
//! The network `f(x) = Σ_i c_i sin(Σ_j a_ij sin(ω_j x + φ_j) + b_i) + d` is a
//! finite combination of integer multiples of the first-layer frequencies. This
//! crate expands it exactly, bounds the truncation error, builds initializations
//! from the expansion, trains small networks with Adam and checks analytic
//! spectra against FFT measurements.
//!
//! Every numeric routine is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar for the common cases.

// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expansion;
pub mod initialization;
pub mod model;
pub mod scalar;
pub mod special_functions;
pub mod training;
pub mod verification;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Network = model::SinusoidalNetwork<f64>;
pub type Spectrum = expansion::Spectrum<f64>;
pub type SpectrumLine = expansion::SpectrumLine<f64>;
pub type HarmonicTerm = expansion::HarmonicTerm<f64>;
pub type TruncationSpec = expansion::TruncationSpec<f64>;
pub type TargetSpectrum = initialization::TargetSpectrum<f64>;
pub type SampleSet = training::SampleSet<f64>;
pub type TrainOptions = training::TrainOptions<f64>;
pub type EmpiricalSpectrum = verification::EmpiricalSpectrum<f64>;

pub type NetworkF32 = model::SinusoidalNetwork<f32>;
pub type SpectrumF32 = expansion::Spectrum<f32>;
pub type SampleSetF32 = training::SampleSet<f32>;
