//! Covariance files, metric sequences, label selections and diffeomorphisms.

use std::path::Path;

use serde::{Deserialize, Serialize};
use splab_core::diffeo::Diffeo;
use splab_core::sp::{labels, BasisLabel, CovSpec, Kind, LambdaSeq};
use splab_core::Window;

use crate::error::{LabError, Result};

fn bad(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Zero,
    Uniform,
    Power,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovRow {
    pub kind: String,
    pub a: i32,
    pub b: i32,
    pub value: f64,
}

/// On-disk covariance description.
///
/// ```json
/// {"preset": "uniform", "q": 1.0, "k": 4, "rows": [{"kind": "mu_re", "a": 2, "b": 1, "value": 0.5}]}
/// ```
///
/// `uniform` takes `q` and `k`, `power` takes `p`. Rows override preset
/// values; `explicit` uses rows only. One row stands for the whole label,
/// so `Q_{mk} = Q_{km} = Q_{-m,-k}` holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovFile {
    pub preset: Preset,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<CovRow>,
}

impl CovFile {
    pub fn build(&self, window: Window) -> Result<CovSpec> {
        let core = |e: splab_core::Error| bad(e.to_string());
        let mut c = match self.preset {
            Preset::Zero | Preset::Explicit => CovSpec::zero(),
            Preset::Uniform => {
                let q = self.q.ok_or_else(|| bad("uniform preset needs q"))?;
                let k = self.k.ok_or_else(|| bad("uniform preset needs k"))?;
                CovSpec::uniform(q, k, window).map_err(core)?
            }
            Preset::Power => {
                CovSpec::power(self.p.ok_or_else(|| bad("power preset needs p"))?, window)
                    .map_err(core)?
            }
        };
        for r in &self.rows {
            let kind =
                Kind::parse(&r.kind).ok_or_else(|| bad(format!("unknown kind {:?}", r.kind)))?;
            let l = BasisLabel::new(kind, r.a, r.b).map_err(core)?;
            if l.extent() > window.n() {
                return Err(bad(format!("row {l} outside window")));
            }
            c.set(l, r.value).map_err(core)?;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
    }
}

/// `uniform:<x>`, `power:<p>` or `file:<path>` (one value per line for indices `1..=n`).
pub fn parse_lambda(spec: &str, n: usize) -> Result<LambdaSeq> {
    let (head, arg) = spec
        .split_once(':')
        .ok_or_else(|| bad(format!("lambda spec {spec:?}: expected <kind>:<arg>")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("lambda spec {spec:?}: bad number")))
    };
    let core = |e: splab_core::Error| bad(format!("lambda spec {spec:?}: {e}"));
    match head {
        "uniform" => LambdaSeq::uniform(n, num(arg)?).map_err(core),
        "power" => LambdaSeq::power(n, num(arg)?).map_err(core),
        "file" => {
            let text = std::fs::read_to_string(arg).map_err(|e| bad(format!("{arg}: {e}")))?;
            let vals = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(num)
                .collect::<Result<Vec<_>>>()?;
            if vals.len() < n {
                return Err(bad(format!("{arg}: need {n} values, found {}", vals.len())));
            }
            LambdaSeq::new(vals[..n].to_vec()).map_err(core)
        }
        _ => Err(bad(format!("lambda spec {spec:?}: unknown kind {head:?}"))),
    }
}

/// `all:<K>` or a `;`-separated list of `<kind>:<a>,<b>`.
pub fn parse_labels(spec: &str) -> Result<Vec<BasisLabel>> {
    if let Some(k) = spec.strip_prefix("all:") {
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| bad(format!("labels {spec:?}: bad bound")))?;
        return Ok(labels(k));
    }
    spec.split(';')
        .map(|item| {
            let (kind, ab) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| bad(format!("label {item:?}: expected <kind>:<a>,<b>")))?;
            let kind =
                Kind::parse(kind).ok_or_else(|| bad(format!("label {item:?}: unknown kind")))?;
            let (a, b) = ab
                .split_once(',')
                .ok_or_else(|| bad(format!("label {item:?}: expected a,b")))?;
            let idx = |s: &str| {
                s.trim()
                    .parse::<i32>()
                    .map_err(|_| bad(format!("label {item:?}: bad index")))
            };
            BasisLabel::new(kind, idx(a)?, idx(b)?).map_err(|e| bad(format!("label {item:?}: {e}")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Identity,
    Rotation,
    Sine,
    Cosine,
}

/// Named diffeomorphism: rotation by `angle`, `θ + ε sin(kθ)`, or `θ + t cos(kθ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffeoSpec {
    pub family: Family,
    pub k: u32,
    pub eps: f64,
    pub angle: f64,
    pub t: f64,
}

impl DiffeoSpec {
    pub fn build(&self) -> Result<Diffeo> {
        let core = |e: splab_core::Error| bad(format!("diffeomorphism: {e}"));
        match self.family {
            Family::Identity => Ok(Diffeo::identity()),
            Family::Rotation => Ok(Diffeo::Rotation(self.angle)),
            Family::Sine => Diffeo::sine(self.k, self.eps).map_err(core),
            Family::Cosine => Diffeo::cosine(self.k, self.t).map_err(core),
        }
    }
}
