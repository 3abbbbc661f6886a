use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// In-place forward DFT `X_m = Σ_n x_n e^{−2πi mn/N}` for `N` a power of two.
pub fn fft_in_place<T: Scalar>(data: &mut [Complex<T>]) -> Result<()> {
    let n = data.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Validation(format!(
            "FFT length {n} is not a power of two"
        )));
    }
    let bits = n.trailing_zeros();
    if bits > 0 {
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let angle = -T::TAU() / T::of_usize(len);
        // twiddles computed directly per index, not by repeated multiplication
        let twiddles: Vec<Complex<T>> = (0..half)
            .map(|k| Complex::from_polar(T::one(), angle * T::of_usize(k)))
            .collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let even = data[start + k];
                let odd = data[start + k + half] * twiddles[k];
                data[start + k] = even + odd;
                data[start + k + half] = even - odd;
            }
        }
        len *= 2;
    }
    Ok(())
}

pub fn fft<T: Scalar>(input: &[T]) -> Result<Vec<Complex<T>>> {
    let mut data: Vec<Complex<T>> = input.iter().map(|&v| Complex::new(v, T::zero())).collect();
    fft_in_place(&mut data)?;
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_dft(x: &[f64]) -> Vec<Complex<f64>> {
        let n = x.len();
        (0..n)
            .map(|m| {
                x.iter()
                    .enumerate()
                    .fold(Complex::new(0.0, 0.0), |acc, (k, &v)| {
                        let angle = -2.0 * std::f64::consts::PI * ((m * k) % n) as f64 / n as f64;
                        acc + Complex::from_polar(v, angle)
                    })
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for bits in 0..9 {
            let x: Vec<f64> = (0..1 << bits)
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let fast = fft(&x).unwrap();
            for (a, b) in fast.iter().zip(naive_dft(&x)) {
                assert!((a - b).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn rejects_bad_length() {
        assert!(fft(&[1.0, 2.0, 3.0]).is_err());
        assert!(fft::<f64>(&[]).is_err());
    }

    #[test]
    fn impulse_is_flat() {
        let mut x = vec![0.0; 16];
        x[0] = 1.0;
        assert!(fft(&x)
            .unwrap()
            .iter()
            .all(|c| (c - Complex::new(1.0, 0.0)).norm() < 1e-15));
    }
}
