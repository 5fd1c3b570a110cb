//! Dense truncated operators in the `ẽ` basis.
//!
//! `entry(m, n) = A_{m,n} = (A ẽ_n, ẽ_m)_ω`, stored row-major by slot.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::{sgn, Complex64, Error, Result, Window, I};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct TruncOp {
    window: Window,
    data: Vec<Complex64>,
}

/// One of the four `N x N` compressions `π^± A π^±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrant {
    /// rows `m > 0`, columns `n > 0`
    A,
    /// rows `m > 0`, columns `n < 0`
    B,
    /// rows `m < 0`, columns `n > 0`
    C,
    /// rows `m < 0`, columns `n < 0`
    D,
}

impl TryFrom<char> for Quadrant {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'a' => Ok(Quadrant::A),
            'b' => Ok(Quadrant::B),
            'c' => Ok(Quadrant::C),
            'd' => Ok(Quadrant::D),
            other => Err(Error::InvalidQuadrant(other)),
        }
    }
}

impl TruncOp {
    pub fn zeros(window: Window) -> Self {
        let d = window.dim();
        TruncOp {
            window,
            data: vec![ZERO; d * d],
        }
    }

    pub fn identity(window: Window) -> Self {
        Self::scalar(window, ONE)
    }

    pub fn scalar(window: Window, c: Complex64) -> Self {
        let mut a = Self::zeros(window);
        for s in 0..window.dim() {
            a.data[s * window.dim() + s] = c;
        }
        a
    }

    pub fn diagonal(window: Window, mut f: impl FnMut(i32) -> Complex64) -> Self {
        let mut a = Self::zeros(window);
        for m in window.indices() {
            a.set(m, m, f(m));
        }
        a
    }

    pub fn from_fn(window: Window, mut f: impl FnMut(i32, i32) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(window.dim() * window.dim());
        for m in window.indices() {
            for n in window.indices() {
                data.push(f(m, n));
            }
        }
        TruncOp { window, data }
    }

    /// Row-major data in slot order.
    pub fn from_data(window: Window, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != window.dim() * window.dim() {
            return Err(Error::InvalidArgument(
                "matrix data must have (2N)^2 entries",
            ));
        }
        Ok(TruncOp { window, data })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    fn at(&self, m: i32, n: i32) -> usize {
        self.window.slot(m) * self.window.dim() + self.window.slot(n)
    }

    #[inline]
    pub fn get(&self, m: i32, n: i32) -> Complex64 {
        self.data[self.at(m, n)]
    }

    #[inline]
    pub fn set(&mut self, m: i32, n: i32, v: Complex64) {
        let k = self.at(m, n);
        self.data[k] = v;
    }

    #[inline]
    pub fn add_at(&mut self, m: i32, n: i32, v: Complex64) {
        let k = self.at(m, n);
        self.data[k] += v;
    }

    /// `(m, n, A_{m,n})` in serialization order.
    pub fn entries(&self) -> impl Iterator<Item = (i32, i32, Complex64)> + '_ {
        let w = self.window;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (w.index(k / w.dim()), w.index(k % w.dim()), *v))
    }

    /// Column `n` as a vector over the window.
    pub fn column(&self, n: i32) -> Vec<Complex64> {
        self.window.indices().map(|m| self.get(m, n)).collect()
    }

    /// `(Ā)_{m,n} = conj(A_{-m,-n})`
    pub fn conj_op(&self) -> TruncOp {
        TruncOp::from_fn(self.window, |m, n| self.get(-m, -n).conj())
    }

    /// `(A†)_{m,n} = conj(A_{n,m})`
    pub fn dagger(&self) -> TruncOp {
        TruncOp::from_fn(self.window, |m, n| self.get(n, m).conj())
    }

    /// `(Aᵀ)_{m,n} = A_{-n,-m}`
    pub fn transpose(&self) -> TruncOp {
        TruncOp::from_fn(self.window, |m, n| self.get(-n, -m))
    }

    /// Symplectic adjoint, `(A#)_{m,n} = sgn(mn)·A_{-n,-m}`.
    pub fn sharp(&self) -> TruncOp {
        TruncOp::from_fn(self.window, |m, n| {
            f64::from(sgn(m) * sgn(n)) * self.get(-n, -m)
        })
    }

    pub fn block(&self, q: Quadrant) -> Vec<Complex64> {
        let n = self.window.n() as i32;
        let pos: Vec<i32> = (1..=n).collect();
        let neg: Vec<i32> = (-n..=-1).collect();
        let (rows, cols) = match q {
            Quadrant::A => (&pos, &pos),
            Quadrant::B => (&pos, &neg),
            Quadrant::C => (&neg, &pos),
            Quadrant::D => (&neg, &neg),
        };
        rows.iter()
            .flat_map(|&m| cols.iter().map(move |&k| (m, k)))
            .map(|(m, k)| self.get(m, k))
            .collect()
    }

    /// Hilbert–Schmidt norm of the off-diagonal block `b`.
    pub fn norm2(&self) -> f64 {
        self.block(Quadrant::B)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &TruncOp) -> f64 {
        assert_eq!(self.window, other.window);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Max entry deviation restricted to `|m|, |n| ≤ h`.
    pub fn max_abs_diff_on(&self, other: &TruncOp, h: usize) -> f64 {
        self.entries()
            .filter(|(m, n, _)| inner(*m, *n, h))
            .map(|(m, n, v)| (v - other.get(m, n)).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> TruncOp {
        TruncOp {
            window: self.window,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.window.dim();
        assert_eq!(v.len(), d);
        self.data
            .chunks_exact(d)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn try_mul(&self, rhs: &TruncOp) -> Result<TruncOp> {
        self.window.check_same(&rhs.window)?;
        let d = self.window.dim();
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            let row = &mut out[i * d..(i + 1) * d];
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(&rhs.data[k * d..(k + 1) * d]) {
                    *o += a * b;
                }
            }
        }
        Ok(TruncOp {
            window: self.window,
            data: out,
        })
    }

    fn zip_with(&self, rhs: &TruncOp, f: impl Fn(Complex64, Complex64) -> Complex64) -> TruncOp {
        assert_eq!(self.window, rhs.window, "window mismatch");
        TruncOp {
            window: self.window,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    /// `max |A_{m,n} − conj(A_{-m,-n})|`.
    pub fn real_residual(&self) -> f64 {
        self.entries()
            .map(|(m, n, v)| (v - self.get(-m, -n).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Max deviation of `Σ_k sgn(mk)·A_{k,m}·conj(A_{k,n})` from `δ_mn`,
    /// over `|m|, |n| ≤ h`, with `k` running over the whole window.
    pub fn omega_residual_on(&self, h: usize) -> f64 {
        let w = self.window;
        let mut worst: f64 = 0.0;
        for m in w.indices().filter(|m| m.unsigned_abs() as usize <= h) {
            for n in w.indices().filter(|n| n.unsigned_abs() as usize <= h) {
                let s: Complex64 = w
                    .indices()
                    .map(|k| f64::from(sgn(m) * sgn(k)) * self.get(k, m) * self.get(k, n).conj())
                    .sum();
                worst = worst.max((s - delta(m, n)).norm());
            }
        }
        worst
    }

    pub fn omega_residual(&self) -> f64 {
        self.omega_residual_on(self.window.n())
    }

    /// Max deviation of `Σ_k sgn(mk)·A_{m,k}·conj(A_{n,k})` from `δ_mn`.
    pub fn invertible_residual(&self) -> f64 {
        let w = self.window;
        let mut worst: f64 = 0.0;
        for m in w.indices() {
            for n in w.indices() {
                let s: Complex64 = w
                    .indices()
                    .map(|k| f64::from(sgn(m) * sgn(k)) * self.get(m, k) * self.get(n, k).conj())
                    .sum();
                worst = worst.max((s - delta(m, n)).norm());
            }
        }
        worst
    }

    /// `max(‖A#A − I‖_∞, ‖AA# − I‖_∞)` entrywise.
    pub fn group_residual_max(&self) -> f64 {
        let s = self.sharp();
        let id = TruncOp::identity(self.window);
        let l = (&s * self).max_abs_diff(&id);
        let r = (self * &s).max_abs_diff(&id);
        l.max(r)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.real_residual() <= tol
    }

    pub fn preserves_omega(&self, tol: f64) -> bool {
        self.omega_residual() <= tol
    }

    pub fn invertible_symplectic(&self, tol: f64) -> bool {
        self.invertible_residual() <= tol
    }

    pub fn in_sp_group(&self, tol: f64) -> bool {
        self.is_real(tol) && self.group_residual_max() <= tol
    }

    /// Largest singular value by power iteration on `A†A`.
    ///
    /// Runs at most `100` iterations and stops once successive estimates
    /// agree to a relative `1e-6`.
    pub fn operator_norm(&self) -> f64 {
        let d = self.window.dim();
        let aha = &self.dagger() * self;
        // Deterministic start with no special alignment to the basis.
        let mut v: Vec<Complex64> = (0..d)
            .map(|k| Complex64::new(1.0 + 0.1 * k as f64, 0.05 * k as f64))
            .collect();
        let mut est = 0.0;
        for _ in 0..100 {
            let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nv == 0.0 {
                return 0.0;
            }
            v.iter_mut().for_each(|z| *z /= nv);
            let w = aha.apply(&v);
            let next = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let done = (next - est).abs() <= 1e-6 * next;
            est = next;
            v = w;
            if done {
                break;
            }
        }
        est.sqrt()
    }
}

#[inline]
fn inner(m: i32, n: i32, h: usize) -> bool {
    m.unsigned_abs() as usize <= h && n.unsigned_abs() as usize <= h
}

#[inline]
fn delta(m: i32, n: i32) -> Complex64 {
    if m == n {
        ONE
    } else {
        ZERO
    }
}

/// The complex structure, `J_{m,n} = i·sgn(m)·δ_mn`.
pub fn hilbert_op(window: Window) -> TruncOp {
    TruncOp::diagonal(window, |m| I * f64::from(sgn(m)))
}

/// Dense product of two `N x N` row-major blocks.
pub fn block_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

impl Mul for &TruncOp {
    type Output = TruncOp;

    fn mul(self, rhs: &TruncOp) -> TruncOp {
        self.try_mul(rhs).expect("window mismatch")
    }
}

impl Add for &TruncOp {
    type Output = TruncOp;

    fn add(self, rhs: &TruncOp) -> TruncOp {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncOp {
    type Output = TruncOp;

    fn sub(self, rhs: &TruncOp) -> TruncOp {
        self.zip_with(rhs, |a, b| a - b)
    }
}
