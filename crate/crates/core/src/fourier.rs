//! Fourier coefficient vectors, the Hilbert transform `J`, the form `ω`
//! and the `H^{1/2}` norm.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::{sgn, Complex64, Error, Result, Window, I};

/// Which basis the coefficients are expressed in.
///
/// `Hat` is `ê_n = e^{inθ}`. `Tilde` is the `H^{1/2}`-orthonormal basis
/// `ẽ_n = e^{inθ}/√n` for `n > 0` and `e^{inθ}/(i√|n|)` for `n < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Hat,
    Tilde,
}

impl Basis {
    fn name(self) -> &'static str {
        match self {
            Basis::Hat => "hat",
            Basis::Tilde => "tilde",
        }
    }
}

/// Factor `τ_n` with `ũ(n) = τ_n û(n)`: `√n` or `i√|n|`.
#[inline]
pub fn tilde_factor(n: i32) -> Complex64 {
    let r = (n.unsigned_abs() as f64).sqrt();
    if n > 0 {
        Complex64::new(r, 0.0)
    } else {
        Complex64::new(0.0, r)
    }
}

/// Coefficient of `ê_n` in `ẽ_n`, i.e. `1/τ_n`.
#[inline]
pub fn hat_factor(n: i32) -> Complex64 {
    tilde_factor(n).inv()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVec {
    window: Window,
    values: Vec<Complex64>,
    basis: Basis,
}

impl CoeffVec {
    pub fn zeros(window: Window, basis: Basis) -> Self {
        CoeffVec {
            window,
            values: vec![Complex64::new(0.0, 0.0); window.dim()],
            basis,
        }
    }

    /// Values are taken in serialization order.
    pub fn from_values(window: Window, basis: Basis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != window.dim() {
            return Err(Error::InvalidArgument("coefficient count must be 2N"));
        }
        Ok(CoeffVec {
            window,
            values,
            basis,
        })
    }

    pub fn from_fn(window: Window, basis: Basis, mut f: impl FnMut(i32) -> Complex64) -> Self {
        CoeffVec {
            window,
            values: window.indices().map(&mut f).collect(),
            basis,
        }
    }

    /// Single mode `value` at index `n`.
    pub fn delta(window: Window, basis: Basis, n: i32, value: Complex64) -> Result<Self> {
        let mut v = Self::zeros(window, basis);
        v.values[window.try_slot(n)?] = value;
        Ok(v)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, n: i32) -> Complex64 {
        self.values[self.window.slot(n)]
    }

    pub fn set(&mut self, n: i32, value: Complex64) {
        let s = self.window.slot(n);
        self.values[s] = value;
    }

    /// `(index, value)` pairs in serialization order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.window.indices().zip(self.values.iter().copied())
    }

    fn expect(&self, basis: Basis) -> Result<()> {
        if self.basis == basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected: basis.name(),
                found: self.basis.name(),
            })
        }
    }

    pub fn to_tilde(&self) -> Result<CoeffVec> {
        self.expect(Basis::Hat)?;
        Ok(CoeffVec::from_fn(self.window, Basis::Tilde, |n| {
            tilde_factor(n) * self.get(n)
        }))
    }

    pub fn to_hat(&self) -> Result<CoeffVec> {
        self.expect(Basis::Tilde)?;
        Ok(CoeffVec::from_fn(self.window, Basis::Hat, |n| {
            hat_factor(n) * self.get(n)
        }))
    }

    /// Hat-basis copy, converting if needed.
    pub fn as_hat(&self) -> CoeffVec {
        match self.basis {
            Basis::Hat => self.clone(),
            Basis::Tilde => self.to_hat().expect("tilde input"),
        }
    }

    /// Hilbert transform `û(n) ↦ i·sgn(n)·û(n)`. The multiplier is
    /// diagonal in both bases, so the tag is preserved.
    pub fn hilbert(&self) -> CoeffVec {
        CoeffVec::from_fn(self.window, self.basis, |n| {
            I * f64::from(sgn(n)) * self.get(n)
        })
    }
}

/// `ω(u, v) = (1/2π)∫ u v′ dθ = Σ_n i·n·û(-n)·v̂(n)`.
pub fn omega_form(u: &CoeffVec, v: &CoeffVec) -> Result<Complex64> {
    u.window.check_same(&v.window)?;
    let (u, v) = (u.as_hat(), v.as_hat());
    Ok(u.window
        .indices()
        .map(|n| I * f64::from(n) * u.get(-n) * v.get(n))
        .sum())
}

/// `Σ_n |n|·|û(n)|²`.
pub fn h_half_norm_sq(u: &CoeffVec) -> f64 {
    match u.basis {
        Basis::Tilde => u.values.iter().map(|z| z.norm_sqr()).sum(),
        Basis::Hat => u
            .iter()
            .map(|(n, z)| f64::from(n.unsigned_abs()) * z.norm_sqr())
            .sum(),
    }
}

/// For `k = 1..=kmax`, the supremum of `|n|^k·|û(n)|` over the tail `|n| ≥ N/2`.
pub fn smoothness_profile(u: &CoeffVec, kmax: u32) -> Result<Vec<(u32, f64)>> {
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be at least 1"));
    }
    let u = u.as_hat();
    let n = u.window.n();
    Ok((1..=kmax)
        .map(|k| {
            let sup = u
                .iter()
                .filter(|(m, _)| 2 * m.unsigned_abs() as usize >= n)
                .map(|(m, z)| f64::from(m.unsigned_abs()).powi(k as i32) * z.norm())
                .fold(0.0, f64::max);
            (k, sup)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize) -> Window {
        Window::new(n).unwrap()
    }

    #[test]
    fn delta_to_tilde() {
        let one = Complex64::new(1.0, 0.0);
        let u = CoeffVec::delta(w(6), Basis::Hat, 4, one).unwrap();
        assert_eq!(u.to_tilde().unwrap().get(4), Complex64::new(2.0, 0.0));
        let u = CoeffVec::delta(w(6), Basis::Hat, -4, one).unwrap();
        assert_eq!(u.to_tilde().unwrap().get(-4), Complex64::new(0.0, 2.0));
        let z = CoeffVec::zeros(w(6), Basis::Hat).to_tilde().unwrap();
        assert!(z.values().iter().all(|c| *c == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn wrong_tag_rejected() {
        let u = CoeffVec::zeros(w(3), Basis::Tilde);
        assert!(matches!(u.to_tilde(), Err(Error::BasisMismatch { .. })));
        assert!(u.to_hat().unwrap().to_hat().is_err());
    }

    #[test]
    fn hilbert_on_deltas() {
        let one = Complex64::new(1.0, 0.0);
        let u = CoeffVec::delta(w(4), Basis::Hat, 3, one).unwrap();
        assert_eq!(u.hilbert().get(3), I);
        let u = CoeffVec::delta(w(4), Basis::Hat, -2, one).unwrap();
        assert_eq!(u.hilbert().get(-2), -I);
    }

    #[test]
    fn omega_on_tilde_basis() {
        let win = w(5);
        let one = Complex64::new(1.0, 0.0);
        for m in win.indices() {
            for n in win.indices() {
                let em = CoeffVec::delta(win, Basis::Tilde, m, one).unwrap();
                let en = CoeffVec::delta(win, Basis::Tilde, n, one).unwrap();
                let expect = if m == -n { -f64::from(sgn(m)) } else { 0.0 };
                let got = omega_form(&em, &en).unwrap();
                assert!((got - expect).norm() < 1e-15, "m={m} n={n} got {got}");
            }
        }
    }

    #[test]
    fn norms_of_modes() {
        let one = Complex64::new(1.0, 0.0);
        let t = CoeffVec::delta(w(8), Basis::Tilde, 5, one).unwrap();
        assert_eq!(h_half_norm_sq(&t), 1.0);
        assert!((h_half_norm_sq(&t.to_hat().unwrap()) - 1.0).abs() < 1e-15);
        let h = CoeffVec::delta(w(8), Basis::Hat, 5, one).unwrap();
        assert_eq!(h_half_norm_sq(&h), 5.0);
        assert_eq!(h_half_norm_sq(&CoeffVec::zeros(w(8), Basis::Hat)), 0.0);
    }

    #[test]
    fn window_mismatch() {
        let a = CoeffVec::zeros(w(3), Basis::Hat);
        let b = CoeffVec::zeros(w(4), Basis::Hat);
        assert!(matches!(
            omega_form(&a, &b),
            Err(Error::WindowMismatch { left: 3, right: 4 })
        ));
    }
}
