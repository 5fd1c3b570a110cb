//! A closed family of orientation-preserving circle diffeomorphisms,
//! with analytic derivatives and a robust inverse.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Lifts `ψ: ℝ → ℝ` with `ψ(θ + 2π) = ψ(θ) + 2π`.
#[derive(Debug, Clone, PartialEq)]
pub enum Diffeo {
    /// `ψ(θ) = θ + α`
    Rotation(f64),
    /// `ψ(θ) = θ + ε·sin(kθ)`, requires `|εk| < 1`
    Sine { k: u32, eps: f64 },
    /// `[ψ₁, ψ₂, …]` is `ψ₁ ∘ ψ₂ ∘ …`; empty means the identity.
    Compose(Vec<Diffeo>),
}

/// Convergence target for [`Diffeo::invert`].
pub const INVERT_TOL: f64 = 1e-13;
const MAX_STEPS: usize = 100;

impl Diffeo {
    pub fn identity() -> Self {
        Diffeo::Compose(Vec::new())
    }

    pub fn sine(k: u32, eps: f64) -> Result<Self> {
        let d = Diffeo::Sine { k, eps };
        d.validate()?;
        Ok(d)
    }

    /// `ψ(θ) = θ + t·cos(lθ)` written as `R_{-β} ∘ S ∘ R_β` with `lβ = π/2`.
    pub fn cosine(l: u32, t: f64) -> Result<Self> {
        if l == 0 {
            return Ok(Diffeo::Rotation(t));
        }
        let beta = core::f64::consts::FRAC_PI_2 / f64::from(l);
        let d = Diffeo::Compose(alloc::vec![
            Diffeo::Rotation(-beta),
            Diffeo::Sine { k: l, eps: t },
            Diffeo::Rotation(beta),
        ]);
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Diffeo::Rotation(a) if !a.is_finite() => {
                Err(Error::InvalidDiffeo("rotation angle must be finite"))
            }
            Diffeo::Rotation(_) => Ok(()),
            Diffeo::Sine { k, eps } => {
                if *k == 0 {
                    Err(Error::InvalidDiffeo("sine frequency k must be positive"))
                } else if !eps.is_finite() || (eps * f64::from(*k)).abs() >= 1.0 {
                    Err(Error::InvalidDiffeo("sine family needs |eps*k| < 1"))
                } else {
                    Ok(())
                }
            }
            Diffeo::Compose(parts) => parts.iter().try_for_each(Diffeo::validate),
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            Diffeo::Rotation(a) => theta + a,
            Diffeo::Sine { k, eps } => theta + eps * (f64::from(*k) * theta).sin(),
            Diffeo::Compose(parts) => parts.iter().rev().fold(theta, |t, p| p.eval(t)),
        }
    }

    /// `ψ′(θ)`.
    pub fn deriv(&self, theta: f64) -> f64 {
        match self {
            Diffeo::Rotation(_) => 1.0,
            Diffeo::Sine { k, eps } => {
                let k = f64::from(*k);
                1.0 + eps * k * (k * theta).cos()
            }
            Diffeo::Compose(parts) => {
                let mut t = theta;
                let mut d = 1.0;
                for p in parts.iter().rev() {
                    d *= p.deriv(t);
                    t = p.eval(t);
                }
                d
            }
        }
    }

    /// Bound on `sup |ψ(θ) − θ|`.
    pub fn displacement_bound(&self) -> f64 {
        match self {
            Diffeo::Rotation(a) => a.abs(),
            Diffeo::Sine { eps, .. } => eps.abs(),
            Diffeo::Compose(parts) => parts.iter().map(Diffeo::displacement_bound).sum(),
        }
    }

    /// `φ(θ) = ψ^{-1}(θ)` on the lift, with `|ψ(φ(θ)) − θ| ≤ 1e-13`.
    ///
    /// Newton from `θ`; bisection on a bracket from the displacement bound
    /// if Newton stalls or leaves the bracket.
    pub fn invert(&self, theta: f64) -> Result<f64> {
        if let Diffeo::Rotation(a) = self {
            return Ok(theta - a);
        }
        let r = self.displacement_bound() + 1.0;
        let (lo, hi) = (theta - r, theta + r);
        let mut t = theta;
        for _ in 0..MAX_STEPS {
            let f = self.eval(t) - theta;
            if f.abs() <= 0.1 * INVERT_TOL {
                return Ok(t);
            }
            let d = self.deriv(t);
            if !(d > 0.0) {
                break;
            }
            let next = t - f / d;
            if !(lo..=hi).contains(&next) {
                break;
            }
            if next == t {
                break;
            }
            t = next;
        }
        if (self.eval(t) - theta).abs() <= INVERT_TOL {
            return Ok(t);
        }
        self.bisect(theta, lo, hi)
    }

    fn bisect(&self, theta: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
        for _ in 0..MAX_STEPS {
            let mid = 0.5 * (lo + hi);
            let f = self.eval(mid) - theta;
            if f.abs() <= INVERT_TOL {
                return Ok(mid);
            }
            if f < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::Numerical("inverse did not converge in 100 steps"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn rotation_inverse_exact() {
        let r = Diffeo::Rotation(0.4);
        assert_eq!(r.invert(1.0).unwrap(), 1.0 - 0.4);
    }

    #[test]
    fn sine_fixed_point() {
        let s = Diffeo::sine(1, 0.3).unwrap();
        assert_eq!(s.invert(0.0).unwrap(), 0.0);
    }

    #[test]
    fn sine_validation() {
        assert!(Diffeo::sine(2, 0.5).is_err());
        assert!(Diffeo::sine(0, 0.1).is_err());
        assert!(Diffeo::sine(3, 0.3).is_ok());
    }

    #[test]
    fn compose_order() {
        let d = Diffeo::Compose(alloc::vec![
            Diffeo::Rotation(1.0),
            Diffeo::Sine { k: 1, eps: 0.5 }
        ]);
        let t = 0.7;
        assert_eq!(d.eval(t), t + 0.5 * t.sin() + 1.0);
        assert!((d.deriv(t) - (1.0 + 0.5 * t.cos())).abs() < 1e-15);
        let back = d.invert(d.eval(t)).unwrap();
        assert!((back - t).abs() < 1e-12);
    }

    #[test]
    fn cosine_field() {
        let d = Diffeo::cosine(3, 0.1).unwrap();
        for j in 0..16 {
            let t = 2.0 * PI * j as f64 / 16.0;
            assert!((d.eval(t) - (t + 0.1 * (3.0 * t).cos())).abs() < 1e-14);
        }
    }
}
