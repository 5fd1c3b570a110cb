//! Invariant battery run by `splab verify`.

use serde::Serialize;
use splab_core::diffeo::Diffeo;
use splab_core::embed::{embed, vf_generator, witness_not_surjective, Field, QuadratureGrid};
use splab_core::fourier::{omega_form, Basis, CoeffVec};
use splab_core::op::{hilbert_op, TruncOp};
use splab_core::ricci::{bracket, nabla, nabla_oracle, oracle_index_set, CurvatureReport, XiCombo};
use splab_core::sim::{path_rng, prepare, sample_increment, summarize, SimConfig};
use splab_core::sp::{
    basis_element, labels, project_sp, sum_xi_residual, CovSpec, LambdaSeq, Part, SpElem,
};
use splab_core::{Complex64, Window};

use crate::error::{tag, Result};

/// One named invariant with its measured residual.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    /// Informational checks are reported but never fail the run.
    pub gating: bool,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tol,
            gating: true,
        }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tol
    }
}

/// Deterministic pseudo-random value in `[-1, 1]`.
fn wobble(k: f64) -> f64 {
    (k * 12.9898).sin() * 0.9 + (k * 4.1414).cos() * 0.1
}

fn sample_op(w: Window, salt: f64) -> TruncOp {
    TruncOp::from_fn(w, |m, n| {
        let k = f64::from(m) * 31.0 + f64::from(n) + salt;
        Complex64::new(wobble(k), wobble(k + 0.5))
    })
}

fn sample_combo(n: i32, salt: f64) -> XiCombo {
    let mut x = XiCombo::zero();
    for t in 0..6 {
        let k = salt + f64::from(t);
        let idx = |s: f64| {
            let v = 1 + ((wobble(s).abs() * 97.0) as i32 % n);
            if wobble(s + 0.25) < 0.0 {
                -v
            } else {
                v
            }
        };
        let part = if wobble(k + 0.75) < 0.0 {
            Part::Re
        } else {
            Part::Im
        };
        x.add(idx(k), idx(k + 0.125), part, wobble(k + 0.375));
    }
    x
}

fn frames(n: i32) -> Vec<XiCombo> {
    let idx: Vec<i32> = (-n..=n).filter(|&i| i != 0).collect();
    let mut out = Vec::new();
    for &a in &idx {
        for &b in &idx {
            for p in [Part::Re, Part::Im] {
                out.push(XiCombo::term(a, b, p, 1.0));
            }
        }
    }
    out
}

fn fourier_checks(w: Window, out: &mut Vec<Check>) -> Result<()> {
    let j = hilbert_op(w);
    out.push(Check::new(
        "fourier.hilbert_square",
        (&j * &j).max_abs_diff(&TruncOp::scalar(w, Complex64::new(-1.0, 0.0))),
        1e-15,
    ));
    let u = CoeffVec::from_fn(w, Basis::Hat, |n| {
        Complex64::new(wobble(f64::from(n)), wobble(f64::from(n) + 0.3))
    });
    let v = CoeffVec::from_fn(w, Basis::Hat, |n| {
        Complex64::new(wobble(f64::from(n) + 7.0), 0.0)
    });
    let back = u
        .to_tilde()
        .map_err(tag("fourier"))?
        .to_hat()
        .map_err(tag("fourier"))?;
    let rt = u
        .iter()
        .map(|(n, z)| (z - back.get(n)).norm())
        .fold(0.0, f64::max);
    out.push(Check::new("fourier.tilde_roundtrip", rt, 1e-14));
    let anti = (omega_form(&u, &v).map_err(tag("fourier"))?
        + omega_form(&v, &u).map_err(tag("fourier"))?)
    .norm();
    out.push(Check::new("fourier.omega_antisymmetry", anti, 1e-12));
    Ok(())
}

fn op_checks(w: Window, out: &mut Vec<Check>) {
    let (a, b) = (sample_op(w, 0.0), sample_op(w, 3.0));
    out.push(Check::new(
        "op.sharp_involution",
        a.sharp().sharp().max_abs_diff(&a),
        0.0,
    ));
    let ab = (&a * &b).sharp();
    out.push(Check::new(
        "op.sharp_reverses_products",
        ab.max_abs_diff(&(&b.sharp() * &a.sharp())),
        1e-12,
    ));
    out.push(Check::new(
        "op.identity_in_group",
        TruncOp::identity(w).group_residual_max(),
        0.0,
    ));
    out.push(Check::new(
        "op.witness_in_group",
        witness_not_surjective(w).group_residual_max(),
        1e-12,
    ));
}

fn embed_checks(w: Window, out: &mut Vec<Check>) -> Result<()> {
    let rot =
        embed(&Diffeo::Rotation(0.7), w, QuadratureGrid::for_window(w)).map_err(tag("embed"))?;
    out.push(Check::new(
        "embed.rotation_symplectic",
        rot.op.omega_residual(),
        1e-12,
    ));
    let psi = Diffeo::sine(2, 0.2).map_err(tag("embed"))?;
    let e = embed(&psi, w, QuadratureGrid::for_window(w)).map_err(tag("embed"))?;
    out.push(Check::new("embed.sine_real", e.op.real_residual(), 1e-10));
    // Truncation error dominates on small windows; measure on a wider one.
    let big = Window::new(w.n().max(8) * 4).map_err(tag("embed"))?;
    let e = embed(&psi, big, QuadratureGrid::for_window(big)).map_err(tag("embed"))?;
    out.push(Check::new(
        format!("embed.sine_omega(N={} inside {})", w.n(), big.n()),
        e.op.omega_residual_on(w.n()),
        1e-6,
    ));
    for (name, f) in [("cos", Field::Cos), ("sin", Field::Sin)] {
        let g = vf_generator(f, 1, w).map_err(tag("embed"))?;
        let r = SpElem::from_dense(&g).sp_residual().max(g.real_residual());
        out.push(Check::new(
            format!("embed.generator_{name}_in_sp"),
            r,
            1e-14,
        ));
    }
    Ok(())
}

fn sp_checks(w: Window, out: &mut Vec<Check>) -> Result<()> {
    let lam = LambdaSeq::canonical(w.n());
    let mut worst: f64 = 0.0;
    for l in labels(w.n()) {
        worst = worst.max(basis_element(l, &lam, w).map_err(tag("sp"))?.sp_residual());
    }
    out.push(Check::new("sp.basis_elements", worst, 1e-15));
    let p = project_sp(&sample_op(w, 1.0)).to_dense();
    out.push(Check::new(
        "sp.projection_idempotent",
        project_sp(&p).to_dense().max_abs_diff(&p),
        1e-14,
    ));
    let presets = [
        ("zero", CovSpec::zero()),
        (
            "uniform(1,4)",
            CovSpec::uniform(1.0, 4, w).map_err(tag("sp"))?,
        ),
        ("power(2)", CovSpec::power(2.0, w).map_err(tag("sp"))?),
    ];
    for (name, q) in presets {
        out.push(Check::new(
            format!("sp.sum_xi[{name}]"),
            sum_xi_residual(&q, w).map_err(tag("sp"))?,
            1e-12,
        ));
    }
    Ok(())
}

fn sim_checks(w: Window, out: &mut Vec<Check>) -> Result<()> {
    let mut cfg = SimConfig {
        window: w,
        dt: 1e-2,
        t_end: 0.1,
        paths: 2,
        seed: 7,
        q: CovSpec::zero(),
        record_every: 1,
        project: false,
    };
    let s = summarize(&crate::par::simulate(&cfg)?);
    out.push(Check::new(
        "sim.zero_covariance_stays_at_identity",
        s.max_residual,
        0.0,
    ));
    cfg.q = CovSpec::power(2.0, w).map_err(tag("sim"))?;
    let dw = sample_increment(&cfg.q, w, 1e-3, &mut path_rng(7, 0)).map_err(tag("sim"))?;
    out.push(Check::new("sim.increment_in_sp", dw.sp_residual(), 1e-15));
    prepare(&cfg).map_err(tag("sim"))?;
    cfg.dt = 1e-3;
    cfg.t_end = 0.05;
    cfg.paths = 4;
    let s = summarize(&crate::par::simulate(&cfg)?);
    let r = if s.failed_paths > 0 {
        f64::INFINITY
    } else {
        s.max_residual
    };
    out.push(Check::new("sim.plain_run_finite", r, 1.0));
    cfg.project = true;
    let s = summarize(&crate::par::simulate(&cfg)?);
    out.push(Check::new(
        "sim.projected_run_near_group",
        s.max_residual,
        1e-4,
    ));
    Ok(())
}

fn ricci_checks(w: Window, out: &mut Vec<Check>) -> Result<()> {
    let n = w.n().min(3) as i32;
    let lam = LambdaSeq::new(
        (1..=w.n())
            .map(|i| 0.75 + 0.5 * wobble(i as f64).abs())
            .collect(),
    )
    .map_err(tag("ricci"))?;
    let fr = frames(n);
    let mut worst: f64 = 0.0;
    for x in &fr {
        for y in &fr {
            let o = nabla_oracle(x, y, &lam, &oracle_index_set(x, y)).map_err(tag("ricci"))?;
            worst = worst.max(nabla(x, y, &lam).axpy(-1.0, &o).max_abs());
        }
    }
    out.push(Check::new(
        format!("ricci.connection_vs_oracle(indices<={n})"),
        worst,
        1e-12,
    ));
    let (mut tors, mut metric): (f64, f64) = (0.0, 0.0);
    for t in 0..40 {
        let s = f64::from(t) * 3.3;
        let (x, y, z) = (
            sample_combo(n, s),
            sample_combo(n, s + 1.1),
            sample_combo(n, s + 2.2),
        );
        let d = nabla(&x, &y, &lam)
            .axpy(-1.0, &nabla(&y, &x, &lam))
            .axpy(-1.0, &bracket(&x, &y, &lam));
        tors = tors.max(d.max_abs());
        metric = metric.max((nabla(&x, &y, &lam).dot(&z) + y.dot(&nabla(&x, &z, &lam))).abs());
    }
    out.push(Check::new("ricci.torsion_free", tors, 1e-12));
    out.push(Check::new("ricci.metric_compatible", metric, 1e-12));
    let canon = LambdaSeq::canonical(w.n());
    let k = w.n().min(4);
    let mut diff: f64 = 0.0;
    for l in labels(k) {
        let r = CurvatureReport::compute(l, &canon, w.n()).map_err(tag("ricci"))?;
        diff = diff.max(r.abs_diff / r.closed_form.abs().max(1.0));
    }
    out.push(Check {
        gating: false,
        ..Check::new(
            format!("ricci.closed_form_agreement(labels<={k})"),
            diff,
            1e-9,
        )
    });
    Ok(())
}

/// Runs every module's checks on window `n`.
pub fn run(n: usize) -> Result<Vec<Check>> {
    let w = Window::new(n).map_err(tag("verify"))?;
    let mut out = Vec::new();
    fourier_checks(w, &mut out)?;
    op_checks(w, &mut out);
    embed_checks(w, &mut out)?;
    sp_checks(w, &mut out)?;
    sim_checks(w, &mut out)?;
    ricci_checks(w, &mut out)?;
    Ok(out)
}

/// Number of gating checks that failed.
pub fn failures(checks: &[Check]) -> usize {
    checks.iter().filter(|c| c.gating && !c.passed()).count()
}
