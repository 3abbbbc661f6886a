//! Analytic amplitude bounds and certified truncation tails.

use crate::error::{check_len, Result};
use crate::expansion::index::MultiIndex;
use crate::scalar::Scalar;

/// `(|a|/2)^k / k!` computed as a running product (no overflow for large `k`).
fn power_over_factorial<T: Scalar>(half_a: T, k: u32) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * half_a / T::of(f64::from(j)))
}

/// `∏_i (|a_i|/2)^|k_i| / |k_i|!`, an upper bound on `|α_k(a)| = |∏ J_{k_i}(a_i)|`.
pub fn amplitude_upper_bound<T: Scalar>(a: &[T], k: &MultiIndex) -> Result<T> {
    check_len("index", a.len(), k.len())?;
    Ok(a.iter().zip(k.entries()).fold(T::one(), |acc, (&ai, &ki)| {
        acc * power_over_factorial(ai.abs() / T::of(2.0), ki.unsigned_abs())
    }))
}

/// Bound on `|⟨c, A_k⟩|` and `|⟨c, B_k⟩|` for a width-`n` network whose hidden and
/// linear weights lie in `(-√(6/n), √(6/n))`:
/// `√(6n) · (3/(2n))^{Σ|k_i|/2} / ∏ |k_i|!`.
pub fn siren_amplitude_bound<T: Scalar>(n: usize, k: &MultiIndex) -> T {
    let width = T::of_usize(n);
    let ratio = T::of(3.0) / (T::of(2.0) * width);
    let exponent = T::of(k.l1() as f64) / T::of(2.0);
    let factorials = k
        .entries()
        .iter()
        .flat_map(|ki| 1..=ki.unsigned_abs())
        .fold(T::one(), |acc, j| acc * T::of(f64::from(j)));
    (T::of(6.0) * width).sqrt() * ratio.powf(exponent) / factorials
}

/// Upper bound on `Σ_{‖k‖_∞ > B} ∏ (|a_i|/2)^|k_i| / |k_i|!`, hence on the sup-norm
/// error of truncating a neuron's expansion to the box `‖k‖_∞ <= B`.
///
/// Equals `∏ S_i − ∏ S_i^{≤B}` with `S_i = 2e^{|a_i|/2} − 1` and
/// `S_i^{≤B} = 1 + 2 Σ_{j=1}^{B} (|a_i|/2)^j / j!`, evaluated as the telescoping sum
/// `Σ_j (∏_{i<j} S_i^{≤B}) (S_j − S_j^{≤B}) (∏_{i>j} S_i)` so small tails keep their digits.
pub fn tail_bound<T: Scalar>(a: &[T], box_bound: u32) -> T {
    let parts: Vec<(T, T)> = a
        .iter()
        .map(|&ai| {
            let half = ai.abs() / T::of(2.0);
            let head = (1..=box_bound).fold(T::one(), |acc, j| {
                acc + T::of(2.0) * power_over_factorial(half, j)
            });
            (head, T::of(2.0) * exp_tail(half, box_bound))
        })
        .collect();
    let mut total = T::zero();
    for j in 0..parts.len() {
        let before = parts[..j]
            .iter()
            .fold(T::one(), |acc, &(head, _)| acc * head);
        let after = parts[j + 1..]
            .iter()
            .fold(T::one(), |acc, &(head, tail)| acc * (head + tail));
        total += before * parts[j].1 * after;
    }
    total
}

/// `Σ_{j > B} x^j / j!` for `x >= 0`, summed directly.
fn exp_tail<T: Scalar>(x: T, box_bound: u32) -> T {
    if x == T::zero() {
        return T::zero();
    }
    let mut term = power_over_factorial(x, box_bound + 1);
    let mut sum = T::zero();
    let mut j = box_bound + 1;
    while term > T::zero() {
        sum += term;
        if term < sum * T::epsilon() * T::of(1e-3) {
            break;
        }
        j += 1;
        term = term * x / T::of(f64::from(j));
    }
    sum
}

/// Smallest `B <= max_bound` with `Σ_i weight_i · tail_bound(row_i, B) < tolerance`.
pub fn box_bound_for_tolerance<T: Scalar>(
    rows: &[&[T]],
    weights: &[T],
    tolerance: T,
    max_bound: u32,
) -> Option<u32> {
    (0..=max_bound).find(|&b| {
        let total = rows.iter().zip(weights).fold(T::zero(), |acc, (row, &w)| {
            acc + w.abs() * tail_bound(row, b)
        });
        total < tolerance
    })
}
