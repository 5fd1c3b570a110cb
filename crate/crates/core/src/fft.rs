//! Radix-2 FFT for power-of-two grids.
//!
//! The std FFT crates need `std`; quadrature grids here are always powers
//! of two, so a compact in-place Cooley–Tukey is enough.

use core::f64::consts::PI;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::{Complex64, Error, Result};

/// In-place forward transform, `X_k = Σ_j x_j e^{-2πi jk/M}` (unnormalized).
pub fn forward(x: &mut [Complex64]) -> Result<()> {
    transform(x, -1.0)
}

/// In-place inverse transform without the `1/M` factor.
pub fn inverse(x: &mut [Complex64]) -> Result<()> {
    transform(x, 1.0)
}

fn transform(x: &mut [Complex64], sign: f64) -> Result<()> {
    let n = x.len();
    if !n.is_power_of_two() {
        return Err(Error::InvalidArgument("FFT length must be a power of two"));
    }
    if n <= 1 {
        return Ok(());
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            x.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = sign * 2.0 * PI / len as f64;
        for k in 0..half {
            // Twiddles evaluated directly to avoid recurrence round-off.
            let (s, c) = (step * k as f64).sin_cos();
            let w = Complex64::new(c, s);
            for start in (0..n).step_by(len) {
                let u = x[start + k];
                let v = x[start + k + half] * w;
                x[start + k] = u + v;
                x[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
    Ok(())
}
