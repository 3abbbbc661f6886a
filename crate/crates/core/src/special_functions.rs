//! Bessel functions of the first kind for integer order.
//!
//! [`bessel_j`] is the kernel every harmonic amplitude goes through. For
//! `|a| <= 8` it sums the ascending power series
//! `J_k(a) = Σ_m (-1)^m (a/2)^(2m+k) / (m! (m+k)!)`; beyond that the series
//! loses digits to cancellation, so Miller's backward recurrence normalised by
//! `J_0 + 2 Σ J_2m = 1` takes over up to the regime guard `|a| <= 64`.
//!
//! [`bessel_j_quadrature`] integrates `(1/π) ∫_0^π cos(kθ - a sin θ) dθ` with
//! composite Simpson and exists only as an independent cross-check.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest `|argument|` accepted by the Bessel routines.
pub const BESSEL_ARGUMENT_LIMIT: f64 = 64.0;

/// Positive root of `J_0(a) - J_1(a)` (no closed form; computed numerically).
pub const J0_J1_CROSSING: f64 = 1.434_695_650_819_563;

const SERIES_LIMIT: f64 = 8.0;
const SERIES_RELATIVE_CUTOFF: f64 = 1e-18;
const RESCALE_THRESHOLD: f64 = 1e10;

const QUADRATURE_TOLERANCE: f64 = 1e-12;
const QUADRATURE_MIN_PANELS: usize = 64;
const QUADRATURE_MAX_PANELS: usize = 1 << 24;

fn check_argument<T: Scalar>(argument: T) -> Result<()> {
    if argument.is_finite() && argument.abs() <= T::of(BESSEL_ARGUMENT_LIMIT) {
        Ok(())
    } else {
        Err(Error::Domain {
            argument: argument.as_f64(),
            limit: BESSEL_ARGUMENT_LIMIT,
        })
    }
}

/// `J_order(argument)`, negative orders via `J_{-k}(a) = (-1)^k J_k(a)`.
pub fn bessel_j<T: Scalar>(order: i32, argument: T) -> Result<T> {
    check_argument(argument)?;
    let n = order.unsigned_abs();
    let value = if argument.abs() <= T::of(SERIES_LIMIT) {
        ascending_series(n, argument)
    } else {
        backward_recurrence(n, argument)
    };
    Ok(if order < 0 && n % 2 == 1 {
        -value
    } else {
        value
    })
}

fn ascending_series<T: Scalar>(n: u32, x: T) -> T {
    let half = x / T::of(2.0);
    let mut term = T::one();
    for j in 1..=n {
        term = term * half / T::of(f64::from(j));
    }
    if term == T::zero() {
        return T::zero();
    }
    let step = -(half * half);
    let cutoff = T::of(SERIES_RELATIVE_CUTOFF);
    let order = T::of(f64::from(n));
    let mut sum = term;
    let mut m = T::zero();
    loop {
        m += T::one();
        term = term * step / (m * (m + order));
        sum += term;
        if term.abs() < cutoff * (sum.abs() + T::one()) {
            return sum;
        }
    }
}

fn backward_recurrence<T: Scalar>(n: u32, x: T) -> T {
    let ax = x.abs();
    let reach = (n as usize).max(ax.ceil().to_usize().unwrap_or(0));
    let extra = ((160 * reach.max(1)) as f64).sqrt().ceil() as usize;
    // even starting order so the normalisation sum picks up J_start
    let start = (reach + extra + 10) & !1;
    let target = n as usize;
    if target > start {
        return T::zero();
    }

    let two_over_x = T::of(2.0) / ax;
    let big = T::of(RESCALE_THRESHOLD);
    let small = T::one() / big;

    let mut above = T::zero(); // J_{k+1}
    let mut current = T::one(); // J_k, k = start
    let mut norm = T::of(2.0);
    let mut result = if target == start { current } else { T::zero() };

    for k in (1..=start).rev() {
        let below = T::of_usize(k) * two_over_x * current - above;
        above = current;
        current = below;
        let order = k - 1;
        if order == target {
            result = current;
        }
        if order > 0 && order % 2 == 0 {
            norm += T::of(2.0) * current;
        }
        if current.abs() > big {
            current *= small;
            above *= small;
            norm *= small;
            result *= small;
        }
    }
    norm += current;

    let value = result / norm;
    if x < T::zero() && n % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Composite Simpson evaluation of `(1/π) ∫_0^π cos(kθ - a sin θ) dθ`.
///
/// The panel count doubles from 64 until two successive estimates agree to
/// `1e-12` (or single-precision epsilon for `f32`).
pub fn bessel_j_quadrature<T: Scalar>(order: i32, argument: T) -> Result<T> {
    check_argument(argument)?;
    let k = T::of(f64::from(order));
    let integrand = |theta: T| (k * theta - argument * theta.sin()).cos();
    let tolerance = T::of(QUADRATURE_TOLERANCE).max(T::epsilon() * T::of(64.0));

    let mut panels = QUADRATURE_MIN_PANELS;
    let mut previous = simpson(&integrand, T::PI(), panels);
    loop {
        panels *= 2;
        let current = simpson(&integrand, T::PI(), panels);
        if (current - previous).abs() < tolerance || panels >= QUADRATURE_MAX_PANELS {
            return Ok(current / T::PI());
        }
        previous = current;
    }
}

fn simpson<T: Scalar>(f: &impl Fn(T) -> T, upper: T, panels: usize) -> T {
    let h = upper / T::of_usize(panels);
    let mut odd = T::zero();
    let mut even = T::zero();
    for i in 1..panels {
        let value = f(h * T::of_usize(i));
        if i % 2 == 1 {
            odd += value;
        } else {
            even += value;
        }
    }
    h / T::of(3.0) * (f(T::zero()) + f(upper) + T::of(4.0) * odd + T::of(2.0) * even)
}

/// Brackets the first positive crossing of `J_0` and `J_1` by bisection on `[1, 1.5]`.
pub fn j0_j1_crossing<T: Scalar>() -> T {
    let gap =
        |a: T| bessel_j(0, a).expect("inside regime") - bessel_j(1, a).expect("inside regime");
    let (mut lo, mut hi) = (T::one(), T::of(1.5));
    for _ in 0..200 {
        let mid = (lo + hi) / T::of(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::of(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath besselj at 40 digits
    const J1_AT_1: f64 = 0.440_050_585_744_933_5;
    const J2_AT_1: f64 = 0.114_903_484_931_900_48;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0_f64).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0_f64).unwrap(), 0.0);
        assert_eq!(bessel_j(-4, 0.0_f64).unwrap(), 0.0);
        assert!((bessel_j_quadrature(0, 0.0_f64).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_values() {
        assert!((bessel_j(1, 1.0_f64).unwrap() - J1_AT_1).abs() < 1e-15);
        assert!((bessel_j_quadrature(1, 1.0_f64).unwrap() - J1_AT_1).abs() < 1e-11);
        assert!((bessel_j(2, 1.0_f64).unwrap() - J2_AT_1).abs() < 1e-15);
        assert!((bessel_j_quadrature(2, 1.0_f64).unwrap() - J2_AT_1).abs() < 1e-11);
    }

    #[test]
    fn backward_recurrence_region() {
        // mpmath references
        let cases = [
            (0, 64.0f64, 0.092_590_012_216_048_11),
            (10, 30.0, -0.129_876_893_998_588_77),
            (3, -7.5, 0.258_060_913_193_460_3),
            (40, 20.0, 9.902_389_413_744_686e-10),
        ];
        for (k, a, want) in cases {
            let got = bessel_j(k, a).unwrap();
            assert!(
                (got - want).abs() < 1e-13,
                "J_{k}({a}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_switch() {
        for k in 0..12 {
            let s = ascending_series(k, 8.0_f64);
            let r = backward_recurrence(k, 8.0_f64);
            assert!((s - r).abs() < 1e-13, "order {k}: {s} vs {r}");
        }
    }

    #[test]
    fn negative_order_symmetry() {
        let j1 = bessel_j(1, 0.5_f64).unwrap();
        assert_eq!(bessel_j(-1, 0.5_f64).unwrap(), -j1);
        for k in 0..8 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let a = 1.3_f64;
            assert_eq!(bessel_j(-k, a).unwrap(), sign * bessel_j(k, a).unwrap());
        }
    }

    #[test]
    fn small_argument_bound() {
        let v = bessel_j_quadrature(5, 0.5_f64).unwrap();
        assert!(v.abs() < 0.25_f64.powi(5) / 120.0);
        assert!(bessel_j(5, 0.5_f64).unwrap().abs() < 8.14e-6);
    }

    #[test]
    fn regime_guard() {
        for bad in [64.5, -100.0, f64::NAN, f64::INFINITY] {
            match bessel_j(0, bad) {
                Err(Error::Domain { limit, .. }) => assert_eq!(limit, BESSEL_ARGUMENT_LIMIT),
                other => panic!("expected domain error, got {other:?}"),
            }
            assert!(bessel_j_quadrature(2, bad).is_err());
        }
        assert!(bessel_j(0, 64.0_f64).is_ok());
    }

    #[test]
    fn crossing_is_bracketed() {
        let c: f64 = j0_j1_crossing();
        assert!((c - J0_J1_CROSSING).abs() < 1e-12);
        assert!(bessel_j(0, 1.0_f64).unwrap() > bessel_j(1, 1.0_f64).unwrap());
        assert!(bessel_j(0, 1.5_f64).unwrap() < bessel_j(1, 1.5_f64).unwrap());
    }

    #[test]
    fn single_precision_kernel() {
        let v = bessel_j(1, 1.0_f32).unwrap();
        assert!((v - J1_AT_1 as f32).abs() < 1e-6);
        let q = bessel_j_quadrature(1, 1.0_f32).unwrap();
        assert!((q - J1_AT_1 as f32).abs() < 1e-5);
    }

    #[test]
    fn bounded_by_one() {
        for k in -15..=15 {
            for i in -64..=64 {
                let a = f64::from(i);
                assert!(bessel_j(k, a).unwrap().abs() <= 1.0);
            }
        }
    }
}
