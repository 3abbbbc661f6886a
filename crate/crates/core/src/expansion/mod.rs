//! Harmonic expansion of sinusoidal neurons and networks.
//!
//! A neuron `sin(Σ a_i sin(ω_i x + φ_i) + b)` equals
//! `Σ_{k ∈ ℤⁿ} α_k(a) sin(⟨k, ω⟩ x + ⟨k, φ⟩ + b)` with `α_k(a) = ∏ J_{k_i}(a_i)`.
//! Truncating to `‖k‖_∞ <= B` leaves an error bounded by [`tail_bound`].

pub mod bounds;
pub mod export;
pub mod index;
pub mod spectrum;

pub use bounds::{
    amplitude_upper_bound, box_bound_for_tolerance, siren_amplitude_bound, tail_bound,
};
pub use export::{spectrum_csv_string, spectrum_json, write_spectrum_csv, SPECTRUM_CSV_HEADER};
pub use index::{
    amplitude_order, box_size, canonical_classes, enumerate_indices, enumerate_indices_with_cap,
    nonzero_class_count, ordering_advisory, ordering_guaranteed, AmplitudeOrder, MultiIndex,
    TruncationSpec, DEFAULT_ENUMERATION_CAP,
};
pub use spectrum::{
    canonical_spectrum, expand_network, expand_neuron, exponential_coeff, harmonic_term,
    sine_cosine_coeffs, HarmonicTerm, Spectrum, SpectrumForm, SpectrumLine,
    DEFAULT_FREQUENCY_TOLERANCE,
};
