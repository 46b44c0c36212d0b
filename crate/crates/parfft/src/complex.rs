//! Complex arithmetic helpers, the twiddle-factor table and the
//! bit-reversal permutation that fixes the leaf layout of the
//! interpolation tree.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Double-precision complex scalar used everywhere in this crate.
pub type Complex = num_complex::Complex<f64>;

pub(crate) fn log2(n: usize) -> usize {
    n.trailing_zeros() as usize
}

/// Rejects NaN/Inf before they enter a transform.
pub(crate) fn check_finite(values: &[Complex]) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite(i));
        }
    }
    Ok(())
}

/// Precomputed n-th roots of unity `e^(-2*pi*i*j/n)` for `0 <= j < n`.
///
/// Every butterfly in the crate draws its twiddle factors from one shared
/// table so that sequential and worker-distributed runs perform exactly
/// the same floating-point operations.
#[derive(Debug, Clone, PartialEq)]
pub struct TwiddleTable {
    n: usize,
    factors: Vec<Complex>,
}

impl TwiddleTable {
    /// Builds the table for a power-of-two `n`.
    ///
    /// Each factor is computed directly from its own angle rather than by
    /// repeated multiplication, which keeps the per-entry rounding error
    /// independent of `n`.
    pub fn new(n: usize) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::InvalidSize(n));
        }
        let mut factors = Vec::with_capacity(n);
        factors.push(Complex::new(1.0, 0.0));
        for j in 1..n {
            let angle = -2.0 * PI * j as f64 / n as f64;
            factors.push(Complex::new(angle.cos(), angle.sin()));
        }
        Ok(Self { n, factors })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// The j-th root, `j < n`.
    #[inline]
    pub fn factor(&self, j: usize) -> Complex {
        self.factors[j]
    }

    pub fn factors(&self) -> &[Complex] {
        &self.factors
    }
}

/// Reverses the lowest `bits` bits of `x`.
pub(crate) fn reverse_bits(mut x: usize, bits: usize) -> usize {
    let mut out = 0;
    for _ in 0..bits {
        out = (out << 1) | (x & 1);
        x >>= 1;
    }
    out
}

/// Permutation placing index `j` at the position given by reversing its
/// `log2(n)`-bit binary representation; this is the left-to-right leaf
/// order of the interpolation tree.
///
/// Applying the permutation twice yields the identity.
pub fn bit_reverse_order(n: usize) -> Result<Vec<usize>> {
    if !n.is_power_of_two() {
        return Err(Error::InvalidSize(n));
    }
    let bits = log2(n);
    Ok((0..n).map(|j| reverse_bits(j, bits)).collect())
}
