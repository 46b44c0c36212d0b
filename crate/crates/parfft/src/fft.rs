//! Sequential transforms: the direct quadratic oracle, the radix-2 fast
//! transform, the inverse obtained from the forward machinery, and
//! exponential-polynomial evaluation.
//!
//! The transform convention puts the `1/N` normalization on the forward
//! direction: `c[k] = (1/N) * sum_j x[j] * e^(-2*pi*i*k*j/N)`.

use std::f64::consts::PI;

use crate::complex::{bit_reverse_order, check_finite, Complex, TwiddleTable};
use crate::error::{Error, Result};

/// One decimation-in-time combine level over `block`, whose left half
/// holds the even-branch coefficients and right half the odd-branch
/// coefficients. The twiddle stride is derived from the table size, so
/// the same kernel serves full transforms and partial worker branches.
///
/// `mults` advances by two per butterfly: the twiddle product feeds both
/// outputs and the counting convention charges each output once,
/// including the trivial `w^0` products.
pub(crate) fn butterfly_level(block: &mut [Complex], table: &TwiddleTable, mults: &mut u64) {
    let half = block.len() / 2;
    let stride = table.size() / block.len();
    for r in 0..half {
        let w = table.factor(r * stride);
        let t = w * block[half + r];
        block[half + r] = block[r] - t;
        block[r] += t;
        *mults += 2;
    }
}

/// Runs every combine level from size 2 up to `a.len()` over a buffer
/// already in bit-reversed leaf order. Returns the multiplication count
/// per level.
pub(crate) fn butterfly_passes(a: &mut [Complex], table: &TwiddleTable) -> Vec<u64> {
    let mut per_level = Vec::new();
    let mut len = 2;
    while len <= a.len() {
        let mut mults = 0u64;
        for block in a.chunks_exact_mut(len) {
            butterfly_level(block, table, &mut mults);
        }
        per_level.push(mults);
        len <<= 1;
    }
    per_level
}

pub(crate) fn normalize(values: &mut [Complex], n: usize) {
    let scale = 1.0 / n as f64;
    for v in values.iter_mut() {
        *v *= scale;
    }
}

/// Direct `O(N^2)` evaluation of the transform; ground truth for every
/// fast path in the crate. Accepts any positive length, not only powers
/// of two, and never touches the twiddle table.
pub fn dft_oracle(samples: &[Complex]) -> Result<Vec<Complex>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_finite(samples)?;
    let n = samples.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            // k*j reduced mod n keeps the trig argument small.
            let angle = -2.0 * PI * ((k * j) % n) as f64 / n as f64;
            acc += s * Complex::new(angle.cos(), angle.sin());
        }
        out.push(acc / n as f64);
    }
    Ok(out)
}

/// Radix-2 fast transform over `log2(N)` butterfly levels, normalized by
/// `1/N` in a single final pass.
pub fn fft(samples: &[Complex]) -> Result<Vec<Complex>> {
    if !samples.len().is_power_of_two() {
        return Err(Error::InvalidSize(samples.len()));
    }
    check_finite(samples)?;
    let table = TwiddleTable::new(samples.len())?;
    Ok(fft_with_table(samples, &table))
}

/// Same as [`fft`] but reusing a caller-owned table; `table.size()` must
/// equal `samples.len()`.
pub(crate) fn fft_with_table(samples: &[Complex], table: &TwiddleTable) -> Vec<Complex> {
    let n = samples.len();
    let order = bit_reverse_order(n).expect("size validated by caller");
    let mut a: Vec<Complex> = order.iter().map(|&j| samples[j]).collect();
    butterfly_passes(&mut a, table);
    normalize(&mut a, n);
    a
}

/// Index reversal turning a forward spectrum into the inverse transform:
/// `out[k] = N * spectrum[(N - k) mod N]`.
pub(crate) fn reverse_and_scale(spectrum: &[Complex]) -> Vec<Complex> {
    let n = spectrum.len();
    let scale = n as f64;
    (0..n).map(|k| spectrum[(n - k) % n] * scale).collect()
}

/// Inverse transform computed with the forward machinery: scale the
/// forward output by `N` and read it in contrary index order, with
/// `(N - k) mod N` so index 0 maps to itself.
pub fn ifft(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    let spectrum = fft(coeffs)?;
    Ok(reverse_and_scale(&spectrum))
}

/// Evaluates `p(x) = sum_k coeffs[k] * e^(i*k*x)` by direct summation.
///
/// An empty coefficient list evaluates to zero.
pub fn eval_exp_poly(coeffs: &[Complex], x: f64) -> Complex {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * Complex::from_polar(1.0, k as f64 * x))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn max_err(a: &[Complex], b: &[Complex]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn random_vec(rng: &mut StdRng, n: usize) -> Vec<Complex> {
        (0..n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn oracle_constant_signal_is_dc_only() {
        let out = dft_oracle(&[c(1.0, 0.0); 4]).unwrap();
        assert!(max_err(&out, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]) < 1e-15);
    }

    #[test]
    fn oracle_impulse_is_flat() {
        let out = dft_oracle(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(max_err(&out, &[c(0.25, 0.0); 4]) < 1e-15);
    }

    #[test]
    fn oracle_pure_first_harmonic() {
        let input = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        let out = dft_oracle(&input).unwrap();
        assert!(max_err(&out, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]) < 1e-15);
    }

    #[test]
    fn oracle_accepts_non_power_of_two() {
        let out = dft_oracle(&[c(1.0, 0.0); 3]).unwrap();
        assert!((out[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(out[1].norm() < 1e-15 && out[2].norm() < 1e-15);
    }

    #[test]
    fn oracle_rejects_empty() {
        assert!(matches!(dft_oracle(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn fft_constant_signal() {
        let out = fft(&[c(1.0, 0.0); 4]).unwrap();
        assert!(max_err(&out, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]) < 1e-15);
    }

    #[test]
    fn fft_impulse_has_flat_eighth_spectrum() {
        let mut input = vec![c(0.0, 0.0); 8];
        input[0] = c(1.0, 0.0);
        let out = fft(&input).unwrap();
        assert!(max_err(&out, &vec![c(0.125, 0.0); 8]) < 1e-15);
    }

    #[test]
    fn fft_matches_oracle_on_random_input() {
        let mut rng = StdRng::seed_from_u64(16);
        let input = random_vec(&mut rng, 16);
        let fast = fft(&input).unwrap();
        let direct = dft_oracle(&input).unwrap();
        assert!(max_err(&fast, &direct) < 1e-12);
    }

    #[test]
    fn fft_rejects_bad_inputs() {
        assert!(matches!(fft(&[c(1.0, 0.0); 3]), Err(Error::InvalidSize(3))));
        assert!(matches!(fft(&[]), Err(Error::InvalidSize(0))));
        assert!(matches!(
            fft(&[c(f64::INFINITY, 0.0), c(0.0, 0.0)]),
            Err(Error::NonFinite(0))
        ));
    }

    #[test]
    fn ifft_dc_only_spectrum_is_constant() {
        let out = ifft(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(max_err(&out, &[c(1.0, 0.0); 4]) < 1e-15);
    }

    #[test]
    fn ifft_round_trip() {
        let input = [c(3.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)];
        let back = ifft(&fft(&input).unwrap()).unwrap();
        assert!(max_err(&back, &input) < 1e-12);
    }

    #[test]
    fn ifft_matches_direct_polynomial_evaluation() {
        // Independent route: evaluate p(x_k) = sum_j c_j e^(i*j*x_k) by a
        // plain double loop, nothing shared with the fast path.
        let mut rng = StdRng::seed_from_u64(32);
        let coeffs = random_vec(&mut rng, 32);
        let n = coeffs.len();
        let direct: Vec<Complex> = (0..n)
            .map(|k| {
                let x = 2.0 * PI * k as f64 / n as f64;
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, cj)| {
                        let angle = j as f64 * x;
                        cj * Complex::new(angle.cos(), angle.sin())
                    })
                    .sum()
            })
            .collect();
        let fast = ifft(&coeffs).unwrap();
        assert!(max_err(&fast, &direct) < 1e-10);
    }

    #[test]
    fn eval_constant_polynomial() {
        let coeffs = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        for x in [0.0, 0.37, -2.0, 11.5] {
            assert!((eval_exp_poly(&coeffs, x) - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn eval_e_to_the_i_pi() {
        let coeffs = [c(0.0, 0.0), c(1.0, 0.0)];
        assert!((eval_exp_poly(&coeffs, PI) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_interpolates_the_samples() {
        let mut rng = StdRng::seed_from_u64(64);
        let samples = random_vec(&mut rng, 16);
        let coeffs = fft(&samples).unwrap();
        let n = samples.len();
        for (j, s) in samples.iter().enumerate() {
            let x = 2.0 * PI * j as f64 / n as f64;
            assert!((eval_exp_poly(&coeffs, x) - s).norm() < 1e-9, "j={j}");
        }
    }

    #[test]
    fn eval_of_empty_coeffs_is_zero() {
        assert_eq!(eval_exp_poly(&[], 1.0), c(0.0, 0.0));
    }

    #[test]
    fn forward_machinery_evaluates_inverse_in_contrary_order() {
        let mut rng = StdRng::seed_from_u64(3);
        let coeffs = random_vec(&mut rng, 16);
        let n = coeffs.len();
        let forward = fft(&coeffs).unwrap();
        for k in 0..n {
            let x_k = 2.0 * PI * k as f64 / n as f64;
            let lhs = eval_exp_poly(&coeffs, 2.0 * PI - x_k);
            let rhs = forward[k] * n as f64;
            assert!((lhs - rhs).norm() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn sequential_mult_count_is_n_log_n() {
        let n = 64;
        let table = TwiddleTable::new(n).unwrap();
        let order = bit_reverse_order(n).unwrap();
        let samples: Vec<Complex> = (0..n).map(|j| c(j as f64, 0.0)).collect();
        let mut a: Vec<Complex> = order.iter().map(|&j| samples[j]).collect();
        let per_level = butterfly_passes(&mut a, &table);
        assert_eq!(per_level.len(), 6);
        assert!(per_level.iter().all(|&m| m == n as u64));
    }
}
