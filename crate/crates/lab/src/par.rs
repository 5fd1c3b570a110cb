//! Thread-pool drivers. Results come back in input order, so output does
//! not depend on the thread count.

use rayon::prelude::*;
use rayon::ThreadPool;
use splab_core::diffeo::Diffeo;
use splab_core::embed::{
    action_coeffs_from_inverse, assemble, inverse_samples, Embedding, QuadratureGrid,
};
use splab_core::ricci::{CurvatureReport, XiCombo};
use splab_core::sim::{prepare, simulate_path, PathRecord, SimConfig};
use splab_core::sp::{labels, BasisLabel, LambdaSeq};
use splab_core::Window;

use crate::error::{tag, LabError, Result};

/// Pool with `threads` workers, or one per core.
pub fn pool(threads: Option<usize>) -> Result<ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(LabError::Usage("--threads must be positive".into()));
        }
        b = b.num_threads(t);
    }
    b.build().map_err(|e| LabError::Usage(e.to_string()))
}

pub fn simulate(cfg: &SimConfig) -> Result<Vec<PathRecord>> {
    let model = prepare(cfg).map_err(tag("sim"))?;
    Ok((0..cfg.paths)
        .into_par_iter()
        .map(|p| simulate_path(cfg, &model, p))
        .collect())
}

pub fn embed(psi: &Diffeo, window: Window, grid: QuadratureGrid) -> Result<Embedding> {
    let phi = inverse_samples(psi, grid).map_err(tag("embed"))?;
    let cols = window
        .indices()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| action_coeffs_from_inverse(&phi, m, grid, window))
        .collect::<splab_core::Result<Vec<_>>>()
        .map_err(tag("embed"))?;
    Ok(assemble(window, &cols))
}

/// `Ric^N` with the summation over frame labels split across workers and
/// reduced in label order.
pub fn ricci_truncated(label: BasisLabel, lambda: &LambdaSeq, n: usize) -> Result<f64> {
    if label.extent() > n || lambda.len() < n {
        return Err(tag("ricci")(splab_core::Error::InvalidArgument(
            "label and lambda must fit the truncation",
        )));
    }
    let x = XiCombo::from_label(label);
    let terms: Vec<f64> = labels(n)
        .into_par_iter()
        .map(|l| {
            let y = XiCombo::from_label(l);
            splab_core::ricci::sectional(&x, &y, lambda) / y.norm_sq()
        })
        .collect();
    Ok(terms.iter().sum())
}

pub fn curvature_report(
    labels: &[BasisLabel],
    lambda: &LambdaSeq,
    n: usize,
) -> Result<Vec<CurvatureReport>> {
    labels
        .par_iter()
        .map(|l| CurvatureReport::compute(*l, lambda, n))
        .collect::<splab_core::Result<Vec<_>>>()
        .map_err(tag("ricci"))
}
