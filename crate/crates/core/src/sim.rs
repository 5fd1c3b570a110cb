//! Euler–Maruyama simulation of the group-valued Brownian motion
//! `dY = (I+Y) dW + ½(I+Y) D dt`, `Y₀ = 0`, with membership monitoring.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::op::TruncOp;
use crate::sp::{drift_matrix, noise_frame, sum_xi_residual, BasisLabel, CovSpec, SpElem};
use crate::{Complex64, Error, Result, Window};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub window: Window,
    pub dt: f64,
    pub t_end: f64,
    pub paths: usize,
    pub seed: u64,
    pub q: CovSpec,
    pub record_every: usize,
    /// One Newton correction toward `(Y+I)(Y#+I) = I` after each step.
    pub project: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument("dt must be positive"));
        }
        if !(self.t_end >= self.dt) {
            return Err(Error::InvalidArgument("need dt <= T"));
        }
        if self.paths == 0 {
            return Err(Error::InvalidArgument("need at least one path"));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record stride must be positive"));
        }
        Ok(())
    }

    /// Number of steps, `round(T/dt)`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub path: usize,
    pub times: Vec<f64>,
    pub residual: Vec<f64>,
    pub norm2: Vec<f64>,
    pub terminal: TruncOp,
    /// Set if a non-finite value stopped the path early.
    pub failed: bool,
}

impl PathRecord {
    pub fn terminal_residual(&self) -> f64 {
        *self.residual.last().expect("at least the initial record")
    }
}

type Frame = Vec<(i32, i32, Complex64)>;

/// Precomputed `√Q(ℓ)` and noise frames in label order.
#[derive(Debug, Clone)]
pub struct NoiseModel {
    window: Window,
    terms: Vec<(BasisLabel, f64, Frame)>,
    /// Row-major offsets of each frame entry, parallel to `terms`.
    offsets: Vec<Vec<usize>>,
    drift: Vec<f64>,
}

impl NoiseModel {
    pub fn new(q: &CovSpec, window: Window) -> Result<Self> {
        let q = q.restrict(window);
        let terms = q
            .iter()
            .map(|(l, w)| {
                let f = noise_frame(l, window)?;
                Ok((
                    l,
                    w.sqrt(),
                    f.entries().map(|((m, n), v)| (m, n, v)).collect::<Frame>(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let dim = window.dim();
        let offsets = terms
            .iter()
            .map(|t| {
                t.2.iter()
                    .map(|(m, n, _)| window.slot(*m) * dim + window.slot(*n))
                    .collect()
            })
            .collect();
        Ok(NoiseModel {
            window,
            drift: drift_matrix(&q, window),
            terms,
            offsets,
        })
    }

    pub fn drift(&self) -> &[f64] {
        &self.drift
    }

    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        self.terms.iter().map(|t| t.0)
    }

    /// `ΔW = Σ_ℓ √(Q(ℓ)dt)·g_ℓ·f_ℓ`, one standard normal per label in label order.
    pub fn sample<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> SpElem {
        let mut dw = SpElem::zero(self.window);
        let sdt = dt.sqrt();
        for (_, sq, frame) in &self.terms {
            let g: f64 = rng.sample(StandardNormal);
            let c = sq * sdt * g;
            for (m, n, v) in frame {
                dw.add_at(*m, *n, v * c).expect("frame inside window");
            }
        }
        dw
    }

    /// [`Self::sample`] written densely into `buf` (row-major by slot),
    /// consuming the same normals.
    fn sample_into<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R, buf: &mut [Complex64]) {
        buf.fill(Complex64::new(0.0, 0.0));
        let sdt = dt.sqrt();
        for ((_, sq, frame), offs) in self.terms.iter().zip(&self.offsets) {
            let g: f64 = rng.sample(StandardNormal);
            let c = sq * sdt * g;
            for ((_, _, v), o) in frame.iter().zip(offs) {
                buf[*o] += v * c;
            }
        }
    }
}

/// One increment from a fresh model; see [`NoiseModel::sample`].
pub fn sample_increment<R: Rng + ?Sized>(
    q: &CovSpec,
    window: Window,
    dt: f64,
    rng: &mut R,
) -> Result<SpElem> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument("dt must be positive"));
    }
    Ok(NoiseModel::new(q, window)?.sample(dt, rng))
}

/// Stream for path `path` under `seed`.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(
        seed ^ splitmix64(path.wrapping_add(0x5851_F42D_4C95_7F2D)),
    ))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `Y′ = Y + (I+Y)·ΔW + ½(I+Y)·D·dt`.
pub fn em_step(y: &TruncOp, dw: &SpElem, d: &[f64], dt: f64) -> TruncOp {
    let w = y.window();
    assert_eq!(d.len(), w.dim());
    let mut out = y.clone();
    // (I+Y)ΔW, column by column of the sparse ΔW.
    for ((k, n), v) in dw.entries() {
        out.add_at(k, n, v);
        for m in w.indices() {
            let a = y.get(m, k);
            if a != Complex64::new(0.0, 0.0) {
                out.add_at(m, n, a * v);
            }
        }
    }
    for n in w.indices() {
        let c = 0.5 * d[w.slot(n)] * dt;
        if c == 0.0 {
            continue;
        }
        out.add_at(n, n, Complex64::new(c, 0.0));
        for m in w.indices() {
            out.add_at(m, n, y.get(m, n) * c);
        }
    }
    out
}

/// Dense form of [`em_step`] on row-major slices.
fn em_step_dense(
    y: &[Complex64],
    dw: &[Complex64],
    d: &[f64],
    dt: f64,
    dim: usize,
    out: &mut [Complex64],
) {
    out.copy_from_slice(y);
    for i in 0..dim {
        let row = &mut out[i * dim..(i + 1) * dim];
        for k in 0..dim {
            let mut a = y[i * dim + k];
            if i == k {
                a.re += 1.0;
            }
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let src = &dw[k * dim..(k + 1) * dim];
            for (o, b) in row.iter_mut().zip(src) {
                o.re += a.re * b.re - a.im * b.im;
                o.im += a.re * b.im + a.im * b.re;
            }
        }
        for (j, o) in row.iter_mut().enumerate() {
            let c = 0.5 * d[j] * dt;
            let mut a = y[i * dim + j];
            if i == j {
                a.re += 1.0;
            }
            o.re += a.re * c;
            o.im += a.im * c;
        }
    }
}

/// `‖(Y+I)(Y#+I) − I‖_F`.
pub fn group_residual(y: &TruncOp) -> f64 {
    let id = TruncOp::identity(y.window());
    let x = y + &id;
    let xs = &y.sharp() + &id;
    (&(&x * &xs) - &id).frobenius()
}

/// `X ← X − ½(XX# − I)X` with `X = I + Y`.
pub fn project_step(y: &TruncOp) -> TruncOp {
    let id = TruncOp::identity(y.window());
    let x = y + &id;
    let e = &(&x * &x.sharp()) - &id;
    let corr = (&e * &x).scale(Complex64::new(0.5, 0.0));
    &(&x - &corr) - &id
}

/// Runs one path. The stream depends only on `(seed, path)`.
pub fn simulate_path(cfg: &SimConfig, model: &NoiseModel, path: usize) -> PathRecord {
    let mut rng = path_rng(cfg.seed, path as u64);
    let mut y = TruncOp::zeros(cfg.window);
    let steps = cfg.steps();
    let mut rec = PathRecord {
        path,
        times: alloc::vec![0.0],
        residual: alloc::vec![0.0],
        norm2: alloc::vec![0.0],
        terminal: TruncOp::zeros(cfg.window),
        failed: false,
    };
    let dim = cfg.window.dim();
    let mut dw = alloc::vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut next = dw.clone();
    for step in 1..=steps {
        model.sample_into(cfg.dt, &mut rng, &mut dw);
        em_step_dense(y.data(), &dw, model.drift(), cfg.dt, dim, &mut next);
        y = TruncOp::from_data(cfg.window, next.clone()).expect("square");
        if cfg.project {
            y = project_step(&y);
        }
        let blown = y
            .data()
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()));
        if blown || step % cfg.record_every == 0 || step == steps {
            rec.times.push(step as f64 * cfg.dt);
            rec.residual
                .push(if blown { f64::NAN } else { group_residual(&y) });
            rec.norm2.push(y.norm2());
        }
        if blown {
            rec.failed = true;
            break;
        }
    }
    rec.terminal = y;
    rec
}

/// Checks the drift pairing, then runs all paths in order.
pub fn simulate(cfg: &SimConfig) -> Result<Vec<PathRecord>> {
    let model = prepare(cfg)?;
    Ok((0..cfg.paths)
        .map(|p| simulate_path(cfg, &model, p))
        .collect())
}

/// Validation shared by sequential and parallel drivers.
pub fn prepare(cfg: &SimConfig) -> Result<NoiseModel> {
    cfg.validate()?;
    if sum_xi_residual(&cfg.q, cfg.window)? > 1e-12 {
        return Err(Error::Numerical("drift does not cancel the Ito correction"));
    }
    NoiseModel::new(&cfg.q, cfg.window)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean_terminal_residual: f64,
    pub max_residual: f64,
    pub failed_paths: usize,
}

pub fn summarize(records: &[PathRecord]) -> Summary {
    let n = records.len().max(1) as f64;
    Summary {
        mean_terminal_residual: records
            .iter()
            .map(PathRecord::terminal_residual)
            .sum::<f64>()
            / n,
        max_residual: records
            .iter()
            .flat_map(|r| r.residual.iter().copied())
            .fold(0.0, f64::max),
        failed_paths: records.iter().filter(|r| r.failed).count(),
    }
}
