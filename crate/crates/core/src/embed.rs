//! The symplectic representation of circle diffeomorphisms, vector-field
//! generators, and the non-surjectivity witness.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::diffeo::Diffeo;
use crate::fourier::{hat_factor, tilde_factor, Basis, CoeffVec};
use crate::op::TruncOp;
use crate::{fft, Complex64, Error, Result, Window, I};

/// Tail-energy fraction above which a column is flagged as aliased.
pub const ALIAS_TOL: f64 = 1e-6;

/// Uniform samples `θ_j = 2πj/M` with `M` a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureGrid {
    m: usize,
}

impl QuadratureGrid {
    pub fn new(m: usize) -> Result<Self> {
        if !m.is_power_of_two() || m < 4 {
            return Err(Error::InvalidArgument(
                "grid size must be a power of two >= 4",
            ));
        }
        Ok(QuadratureGrid { m })
    }

    /// Default `M = 8N`, rounded up to a power of two.
    pub fn for_window(w: Window) -> Self {
        QuadratureGrid {
            m: (8 * w.n()).next_power_of_two(),
        }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.m as f64
    }

    fn check(&self, w: Window) -> Result<()> {
        if self.m < 8 * w.n() {
            Err(Error::InvalidArgument("grid must satisfy M >= 8N"))
        } else {
            Ok(())
        }
    }
}

/// `I_{n,m}` for one source index `m`, plus the aliasing diagnostic.
#[derive(Debug, Clone)]
pub struct ActionColumn {
    pub m: i32,
    /// `I_{n,m}` over the window, hat basis.
    pub coeffs: CoeffVec,
    /// Energy in bins `|n| > M/4` relative to the total.
    pub tail_fraction: f64,
}

impl ActionColumn {
    pub fn aliased(&self) -> bool {
        self.tail_fraction > ALIAS_TOL
    }
}

/// `I_{n,m} = (1/2π)∫ e^{imφ(θ) − inθ} dθ`, `φ = ψ^{-1}`, by FFT of
/// `e^{imφ(θ_j)}` on the grid. The zero bin is dropped.
pub fn action_coeffs(
    psi: &Diffeo,
    m: i32,
    grid: QuadratureGrid,
    window: Window,
) -> Result<ActionColumn> {
    psi.validate()?;
    window.try_slot(m)?;
    let phi = (0..grid.m)
        .map(|j| psi.invert(grid.theta(j)))
        .collect::<Result<Vec<f64>>>()?;
    action_coeffs_from_inverse(&phi, m, grid, window)
}

/// Same as [`action_coeffs`], reusing precomputed `φ(θ_j)`.
pub fn action_coeffs_from_inverse(
    phi: &[f64],
    m: i32,
    grid: QuadratureGrid,
    window: Window,
) -> Result<ActionColumn> {
    grid.check(window)?;
    let mm = grid.m;
    let mf = f64::from(m);
    let mut buf: Vec<Complex64> = phi
        .iter()
        .map(|p| {
            let (s, c) = (mf * p).sin_cos();
            Complex64::new(c, s)
        })
        .collect();
    fft::forward(&mut buf)?;
    let scale = 1.0 / mm as f64;
    buf.iter_mut().for_each(|z| *z *= scale);

    let bin = |n: i32| {
        if n >= 0 {
            n as usize
        } else {
            (mm as i64 + n as i64) as usize
        }
    };
    let total: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
    let tail: f64 = buf
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let f = if *k <= mm / 2 { *k } else { mm - *k };
            f > mm / 4
        })
        .map(|(_, z)| z.norm_sqr())
        .sum();
    let coeffs = CoeffVec::from_fn(window, Basis::Hat, |n| buf[bin(n)]);
    Ok(ActionColumn {
        m,
        coeffs,
        tail_fraction: if total > 0.0 { tail / total } else { 0.0 },
    })
}

/// Samples of `φ = ψ^{-1}` on the grid.
pub fn inverse_samples(psi: &Diffeo, grid: QuadratureGrid) -> Result<Vec<f64>> {
    psi.validate()?;
    (0..grid.m).map(|j| psi.invert(grid.theta(j))).collect()
}

/// Embedded operator and the source indices whose columns were flagged.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub op: TruncOp,
    pub aliased: Vec<i32>,
}

/// `Φ_{n,m} = (ψ.ẽ_m, ẽ_n)_ω = τ_n · I_{n,m} / τ_m`.
pub fn embed(psi: &Diffeo, window: Window, grid: QuadratureGrid) -> Result<Embedding> {
    let phi = inverse_samples(psi, grid)?;
    let cols = window
        .indices()
        .map(|m| action_coeffs_from_inverse(&phi, m, grid, window))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(window, &cols))
}

/// Builds `Φ` from per-column coefficients (any order of `cols`).
pub fn assemble(window: Window, cols: &[ActionColumn]) -> Embedding {
    let mut op = TruncOp::zeros(window);
    let mut aliased = Vec::new();
    for col in cols {
        let g = hat_factor(col.m);
        for (n, v) in col.coeffs.iter() {
            op.set(n, col.m, tilde_factor(n) * g * v);
        }
        if col.aliased() {
            aliased.push(col.m);
        }
    }
    aliased.sort_unstable();
    Embedding { op, aliased }
}

/// Vector-field family for [`vf_generator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// `cos(lθ)`
    Cos,
    /// `sin(kθ)`, `k ≥ 1`
    Sin,
}

/// Sign table: `-i` for `m,n > 0`, `1` for mixed signs, `i` for `m,n < 0`.
fn s(m: i32, n: i32) -> Complex64 {
    match (m > 0, n > 0) {
        (true, true) => -I,
        (false, false) => I,
        _ => Complex64::new(1.0, 0.0),
    }
}

/// Matrix of the generator `X_l` (cos) or `Y_k` (sin) on the window.
pub fn vf_generator(kind: Field, l: u32, window: Window) -> Result<TruncOp> {
    if kind == Field::Sin && l == 0 {
        return Err(Error::InvalidArgument("sine generator needs k >= 1"));
    }
    let l = l as i64;
    let d = |x: i64| if x == l { 1.0 } else { 0.0 };
    Ok(TruncOp::from_fn(window, |m, n| {
        let (mi, ni) = (i64::from(m), i64::from(n));
        let r = 0.5 * ((mi * ni).unsigned_abs() as f64).sqrt();
        match kind {
            Field::Cos => s(m, n) * r * (d(mi - ni) + d(ni - mi)),
            Field::Sin => s(m, n) * (-I) * r * (d(mi - ni) - d(ni - mi)),
        }
    }))
}

/// `A_{1,1} = A_{-1,-1} = √2`, `A_{1,-1} = i`, `A_{-1,1} = -i`, identity elsewhere.
pub fn witness_not_surjective(window: Window) -> TruncOp {
    let mut a = TruncOp::identity(window);
    let r = Complex64::new(SQRT_2, 0.0);
    a.set(1, 1, r);
    a.set(-1, -1, r);
    a.set(1, -1, I);
    a.set(-1, 1, -I);
    a
}

/// Points `(Aẽ_n)(θ_j)` for `samples` uniform `θ_j`, as `x + iy`.
pub fn image_curve(a: &TruncOp, n: i32, samples: usize) -> Result<Vec<Complex64>> {
    let w = a.window();
    w.try_slot(n)?;
    let col: Vec<(i32, Complex64)> = w
        .indices()
        .map(|m| (m, a.get(m, n) * hat_factor(m)))
        .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
        .collect();
    Ok((0..samples)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / samples as f64;
            col.iter()
                .map(|(m, c)| {
                    let (s, co) = (f64::from(*m) * t).sin_cos();
                    c * Complex64::new(co, s)
                })
                .sum()
        })
        .collect())
}

/// Algebraic least-squares circle through `pts`.
#[derive(Debug, Clone, Copy)]
pub struct CircleFit {
    pub center: Complex64,
    pub radius: f64,
    /// `max_j | |p_j − center| − radius |`
    pub max_deviation: f64,
}

pub fn fit_circle(pts: &[Complex64]) -> Result<CircleFit> {
    if pts.len() < 3 {
        return Err(Error::InvalidArgument("circle fit needs three points"));
    }
    // Centering first keeps the normal equations well conditioned.
    let mean: Complex64 = pts.iter().sum::<Complex64>() / pts.len() as f64;
    // x² + y² + Dx + Ey + F = 0 in centred coordinates.
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for p in pts {
        let q = p - mean;
        let row = [q.re, q.im, 1.0];
        let rhs = -(q.re * q.re + q.im * q.im);
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * rhs;
        }
    }
    let [d, e, f] = solve3(ata, atb).ok_or(Error::Numerical("degenerate circle fit"))?;
    let c = Complex64::new(-d / 2.0, -e / 2.0);
    let radius = (c.norm_sqr() - f).sqrt();
    let max_deviation = pts
        .iter()
        .map(|p| ((p - mean - c).norm() - radius).abs())
        .fold(0.0, f64::max);
    Ok(CircleFit {
        center: c + mean,
        radius,
        max_deviation,
    })
}

#[allow(clippy::needless_range_loop)]
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            for c in col..3 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// `Σ_n |n|·|I_{n,m}|² / |m|` for one column.
pub fn column_energy(col: &ActionColumn) -> f64 {
    let e: f64 = col
        .coeffs
        .iter()
        .map(|(n, z)| f64::from(n.unsigned_abs()) * z.norm_sqr())
        .sum();
    e / f64::from(col.m.unsigned_abs())
}

/// `Σ_{n>0, m<0, |n|,|m| ≤ h} |n|·|I_{n,m}|²`.
pub fn off_corner_sum(psi: &Diffeo, window: Window, grid: QuadratureGrid, h: usize) -> Result<f64> {
    let phi = inverse_samples(psi, grid)?;
    let h = h.min(window.n()) as i32;
    let mut total = 0.0;
    for m in -h..=-1 {
        let col = action_coeffs_from_inverse(&phi, m, grid, window)?;
        total += (1..=h)
            .map(|n| f64::from(n) * col.coeffs.get(n).norm_sqr())
            .sum::<f64>();
    }
    Ok(total)
}

/// Both readings of the Hilbert–Schmidt size of an embedded map:
/// `Σ_{n>0,m<0} |Φ_{n,m}|²` (exact rescaling) and `Σ_{n>0,m<0} |n||I_{n,m}|²`.
pub fn embedded_block_sums(
    psi: &Diffeo,
    window: Window,
    grid: QuadratureGrid,
) -> Result<(f64, f64)> {
    let phi = inverse_samples(psi, grid)?;
    let n = window.n() as i32;
    let mut exact = 0.0;
    let mut unscaled = 0.0;
    for m in -n..=-1 {
        let col = action_coeffs_from_inverse(&phi, m, grid, window)?;
        for k in 1..=n {
            let v = col.coeffs.get(k).norm_sqr();
            exact += f64::from(k) * v / f64::from(m.unsigned_abs());
            unscaled += f64::from(k) * v;
        }
    }
    Ok((exact, unscaled))
}

/// Defect `‖Φ(ψ₁∘ψ₂) − Φ(ψ₁)Φ(ψ₂)‖_∞` over `|m|,|n| ≤ N/2`.
pub fn homomorphism_defect(
    psi1: &Diffeo,
    psi2: &Diffeo,
    window: Window,
    grid: QuadratureGrid,
) -> Result<f64> {
    let both = Diffeo::Compose(vec![psi1.clone(), psi2.clone()]);
    let lhs = embed(&both, window, grid)?.op;
    let rhs = &embed(psi1, window, grid)?.op * &embed(psi2, window, grid)?.op;
    Ok(lhs.max_abs_diff_on(&rhs, window.n() / 2))
}
