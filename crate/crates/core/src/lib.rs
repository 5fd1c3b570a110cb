//! Finite truncations of the infinite symplectic group Sp(∞) acting on
//! mean-zero functions on the circle.
//!
//! Everything lives on a symmetric index window `{-N..-1, 1..N}`.
//! Operators are dense `2N x 2N` complex matrices in the `ẽ` basis,
//! Lie-algebra elements are sparse, and the curvature engine works on
//! formal combinations of the `ξ_ab` frame.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Float methods come from `num_traits` without std; with std they are inherent.

extern crate alloc;

pub mod diffeo;
pub mod embed;
mod error;
pub mod fft;
pub mod fourier;
pub mod op;
pub mod ricci;
pub mod sim;
pub mod sp;
mod window;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use window::{sgn, Window};

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
