//! CSV and JSON dumps of coefficient vectors and truncated operators.
//!
//! Floats are written with 17 significant digits and read back bit-exactly.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use splab_core::fourier::{Basis, CoeffVec};
use splab_core::op::TruncOp;
use splab_core::{Complex64, Window};

use crate::error::{tag, LabError, Result};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| LabError::Format(format!("not a number: {s:?}")))
}

fn parse_i32(s: &str) -> Result<i32> {
    s.trim()
        .parse()
        .map_err(|_| LabError::Format(format!("not an index: {s:?}")))
}

fn check_header(rdr: &mut csv::Reader<impl Read>, want: &[&str]) -> Result<()> {
    let h = rdr.headers()?;
    if h.iter().map(str::trim).ne(want.iter().copied()) {
        return Err(LabError::Format(format!(
            "expected header {}, got {:?}",
            want.join(","),
            h
        )));
    }
    Ok(())
}

/// Window whose serialization order has `len` entries, from the first index `-N`.
fn window_for(first: i32, dim: usize) -> Result<Window> {
    let n = first.unsigned_abs() as usize;
    if first >= 0 || 2 * n != dim {
        return Err(LabError::Format(
            "rows do not cover a full index window".into(),
        ));
    }
    Window::new(n).map_err(tag("fourier"))
}

pub fn write_coeffs(v: &CoeffVec, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "re", "im"])?;
    for (n, z) in v.iter() {
        w.write_record([n.to_string(), fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a `n,re,im` dump; rows must be in serialization order.
pub fn read_coeffs(input: impl Read, basis: Basis) -> Result<CoeffVec> {
    let mut rdr = csv::Reader::from_reader(input);
    check_header(&mut rdr, &["n", "re", "im"])?;
    let mut idx = Vec::new();
    let mut vals = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != 3 {
            return Err(LabError::Format("expected 3 fields".into()));
        }
        idx.push(parse_i32(&rec[0])?);
        vals.push(Complex64::new(parse_f64(&rec[1])?, parse_f64(&rec[2])?));
    }
    let w = window_for(
        *idx.first().ok_or(LabError::Format("no rows".into()))?,
        idx.len(),
    )?;
    if idx.iter().copied().ne(w.indices()) {
        return Err(LabError::Format(
            "indices out of serialization order".into(),
        ));
    }
    CoeffVec::from_values(w, basis, vals).map_err(tag("fourier"))
}

pub fn write_op(a: &TruncOp, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "n", "re", "im"])?;
    for (m, n, z) in a.entries() {
        w.write_record([m.to_string(), n.to_string(), fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a `m,n,re,im` dump written by [`write_op`].
pub fn read_op(input: impl Read) -> Result<TruncOp> {
    let mut rdr = csv::Reader::from_reader(input);
    check_header(&mut rdr, &["m", "n", "re", "im"])?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != 4 {
            return Err(LabError::Format("expected 4 fields".into()));
        }
        rows.push((
            parse_i32(&rec[0])?,
            parse_i32(&rec[1])?,
            Complex64::new(parse_f64(&rec[2])?, parse_f64(&rec[3])?),
        ));
    }
    let first = rows.first().ok_or(LabError::Format("no rows".into()))?.0;
    let dim = (rows.len() as f64).sqrt() as usize;
    if dim * dim != rows.len() {
        return Err(LabError::Format("row count is not a square".into()));
    }
    let w = window_for(first, dim)?;
    let order = w.indices().flat_map(|m| w.indices().map(move |n| (m, n)));
    if rows.iter().map(|r| (r.0, r.1)).ne(order) {
        return Err(LabError::Format(
            "entries out of serialization order".into(),
        ));
    }
    TruncOp::from_data(w, rows.into_iter().map(|r| r.2).collect()).map_err(tag("op"))
}

#[derive(Debug, Serialize, Deserialize)]
struct OpJson {
    #[serde(rename = "N")]
    n: usize,
    entries: Vec<(i32, i32, f64, f64)>,
}

/// `{"N": .., "entries": [[m, n, re, im], ..]}`.
pub fn write_op_json(a: &TruncOp, out: impl Write) -> Result<()> {
    let doc = OpJson {
        n: a.window().n(),
        entries: a.entries().map(|(m, n, z)| (m, n, z.re, z.im)).collect(),
    };
    serde_json::to_writer(out, &doc)?;
    Ok(())
}

pub fn read_op_json(input: impl Read) -> Result<TruncOp> {
    let doc: OpJson = serde_json::from_reader(input)?;
    let w = Window::new(doc.n).map_err(tag("op"))?;
    let mut a = TruncOp::zeros(w);
    for (m, n, re, im) in doc.entries {
        if !(w.contains(m) && w.contains(n)) {
            return Err(LabError::Format(format!("entry ({m},{n}) outside window")));
        }
        a.set(m, n, Complex64::new(re, im));
    }
    Ok(a)
}
