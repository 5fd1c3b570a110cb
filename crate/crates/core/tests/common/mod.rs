#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splab_core::op::TruncOp;
use splab_core::ricci::XiCombo;
use splab_core::sp::{Part, SpElem};
use splab_core::{Complex64, Window};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cplx(r: &mut impl Rng) -> Complex64 {
    Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

pub fn random_op(w: Window, r: &mut impl Rng) -> TruncOp {
    TruncOp::from_fn(w, |_, _| cplx(r))
}

/// Random element of sp(∞): the projection of a random matrix.
pub fn random_sp(w: Window, r: &mut impl Rng) -> SpElem {
    splab_core::sp::project_sp(&random_op(w, r))
}

/// `exp(X)` by scaling and squaring on a truncated Taylor series.
pub fn expm(x: &TruncOp) -> TruncOp {
    let w = x.window();
    let norm = x.frobenius();
    let mut s = 0;
    while norm / f64::from(1u32 << s) > 0.25 {
        s += 1;
    }
    let xs = x.scale(Complex64::new(1.0 / f64::from(1u32 << s), 0.0));
    let mut term = TruncOp::identity(w);
    let mut sum = TruncOp::identity(w);
    for k in 1..20 {
        term = (&term * &xs).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Random combination of frame elements with indices `≤ n`.
pub fn random_combo(n: i32, terms: usize, r: &mut impl Rng) -> XiCombo {
    let mut x = XiCombo::zero();
    for _ in 0..terms {
        let mut idx = || {
            let v = r.random_range(1..=n);
            if r.random_bool(0.5) {
                v
            } else {
                -v
            }
        };
        let (a, b) = (idx(), idx());
        let part = if r.random_bool(0.5) {
            Part::Re
        } else {
            Part::Im
        };
        x.add(a, b, part, r.random_range(-1.0..1.0));
    }
    x
}

pub fn win(n: usize) -> Window {
    Window::new(n).unwrap()
}
