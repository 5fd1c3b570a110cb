//! Levi-Civita connection, curvature and truncated Ricci curvature of the
//! λ-metric, on formal combinations of the frame `{ξ_ab, iξ_ab}`.
//!
//! Two connection paths are kept side by side: the closed six-term
//! formulas ([`nabla`]) and the Koszul formula evaluated through sparse
//! commutators ([`nabla_oracle`]).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::sp::{labels, BasisLabel, Kind, LambdaSeq, Part};
use crate::{Complex64, Error, Result};

/// `Σ c·ξ_ab` (`Part::Re`) and `Σ c·iξ_ab` (`Part::Im`) with real `c`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct XiCombo {
    terms: BTreeMap<(i32, i32, Part), f64>,
}

impl XiCombo {
    pub fn zero() -> Self {
        XiCombo::default()
    }

    pub fn term(a: i32, b: i32, part: Part, c: f64) -> Self {
        let mut x = XiCombo::zero();
        x.add(a, b, part, c);
        x
    }

    /// The basis element of `label` in frame coordinates (λ-independent: ½ per entry).
    pub fn from_label(label: BasisLabel) -> Self {
        let mut x = XiCombo::zero();
        for (m, n, c) in label.pattern() {
            let (part, v) = if c.im != 0.0 {
                (Part::Im, c.im)
            } else {
                (Part::Re, c.re)
            };
            x.add(m, n, part, 0.5 * v);
        }
        x
    }

    pub fn add(&mut self, a: i32, b: i32, part: Part, c: f64) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry((a, b, part)).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&(a, b, part));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32, Part), f64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: i32, b: i32, part: Part) -> f64 {
        self.terms.get(&(a, b, part)).copied().unwrap_or(0.0)
    }

    pub fn scale(&self, c: f64) -> XiCombo {
        let mut out = XiCombo::zero();
        for (&(a, b, p), v) in &self.terms {
            out.add(a, b, p, v * c);
        }
        out
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &XiCombo) -> XiCombo {
        let mut out = self.clone();
        for (&(a, b, p), v) in &other.terms {
            out.add(a, b, p, c * v);
        }
        out
    }

    /// Orthonormal frame pairing.
    pub fn dot(&self, other: &XiCombo) -> f64 {
        let (s, b) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        s.terms
            .iter()
            .map(|(k, v)| v * b.terms.get(k).copied().unwrap_or(0.0))
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// All indices that appear, with their negations.
    pub fn index_closure(&self) -> BTreeSet<i32> {
        self.terms
            .keys()
            .flat_map(|(a, b, _)| [*a, -*a, *b, -*b])
            .collect()
    }

    /// Matrix entries: `ξ_ab ↦ 2λ_aλ_b e_ab`.
    pub fn to_matrix(&self, lambda: &LambdaSeq) -> BTreeMap<(i32, i32), Complex64> {
        let mut m: BTreeMap<(i32, i32), Complex64> = BTreeMap::new();
        for (&(a, b, p), c) in &self.terms {
            *m.entry((a, b)).or_default() += p.unit() * (2.0 * lambda.get(a) * lambda.get(b) * c);
        }
        m
    }

    /// Coefficient extraction: `Re/Im(entry_ab) / (2λ_aλ_b)`.
    pub fn from_matrix(m: &BTreeMap<(i32, i32), Complex64>, lambda: &LambdaSeq) -> XiCombo {
        let mut x = XiCombo::zero();
        for (&(a, b), v) in m {
            let s = 2.0 * lambda.get(a) * lambda.get(b);
            x.add(a, b, Part::Re, v.re / s);
            x.add(a, b, Part::Im, v.im / s);
        }
        x
    }
}

fn sparse_mul(
    x: &BTreeMap<(i32, i32), Complex64>,
    y: &BTreeMap<(i32, i32), Complex64>,
) -> BTreeMap<(i32, i32), Complex64> {
    let mut rows: BTreeMap<i32, Vec<(i32, Complex64)>> = BTreeMap::new();
    for (&(k, n), v) in y {
        rows.entry(k).or_default().push((n, *v));
    }
    let mut out: BTreeMap<(i32, i32), Complex64> = BTreeMap::new();
    for (&(m, k), a) in x {
        if let Some(r) = rows.get(&k) {
            for (n, b) in r {
                *out.entry((m, *n)).or_default() += a * b;
            }
        }
    }
    out
}

/// `[x, y]` through matrix commutators.
pub fn bracket(x: &XiCombo, y: &XiCombo, lambda: &LambdaSeq) -> XiCombo {
    let (mx, my) = (x.to_matrix(lambda), y.to_matrix(lambda));
    let mut c = sparse_mul(&mx, &my);
    for (k, v) in sparse_mul(&my, &mx) {
        *c.entry(k).or_default() -= v;
    }
    XiCombo::from_matrix(&c, lambda)
}

#[inline]
fn d(x: i32, y: i32) -> f64 {
    if x == y {
        1.0
    } else {
        0.0
    }
}

/// Connection on frame elements, six terms per case.
#[allow(clippy::too_many_arguments)]
fn nabla_frame(
    p1: Part,
    a: i32,
    b: i32,
    p2: Part,
    c: i32,
    dd: i32,
    l: &LambdaSeq,
    out: &mut XiCombo,
    w: f64,
) {
    let sq = |i: i32| l.sq(i);
    use Part::{Im, Re};
    let terms: [(f64, i32, i32); 6];
    let part;
    match (p1, p2) {
        (Re, Re) => {
            part = Re;
            terms = [
                (d(b, c) * sq(c), a, dd),
                (-d(dd, a) * sq(a), c, b),
                (-d(c, a) * sq(dd), dd, b),
                (d(dd, b) * sq(c), a, c),
                (d(b, dd) * sq(a), c, a),
                (-d(a, c) * sq(b), b, dd),
            ];
        }
        (Im, Im) => {
            part = Re;
            terms = [
                (-d(b, c) * sq(c), a, dd),
                (d(dd, a) * sq(a), c, b),
                (-d(c, a) * sq(dd), dd, b),
                (d(dd, b) * sq(c), a, c),
                (d(b, dd) * sq(a), c, a),
                (-d(a, c) * sq(b), b, dd),
            ];
        }
        (Re, Im) => {
            part = Im;
            terms = [
                (d(b, c) * sq(c), a, dd),
                (-d(dd, a) * sq(a), c, b),
                (d(c, a) * sq(dd), dd, b),
                (-d(dd, b) * sq(c), a, c),
                (d(b, dd) * sq(a), c, a),
                (-d(a, c) * sq(b), b, dd),
            ];
        }
        (Im, Re) => {
            part = Im;
            terms = [
                (d(b, c) * sq(c), a, dd),
                (-d(dd, a) * sq(a), c, b),
                (-d(c, a) * sq(dd), dd, b),
                (d(dd, b) * sq(c), a, c),
                (-d(b, dd) * sq(a), c, a),
                (d(a, c) * sq(b), b, dd),
            ];
        }
    }
    for (co, i, j) in terms {
        if co != 0.0 {
            out.add(i, j, part, w * co);
        }
    }
}

/// `∇_x y` by bilinear extension of the frame formulas.
pub fn nabla(x: &XiCombo, y: &XiCombo, lambda: &LambdaSeq) -> XiCombo {
    let mut out = XiCombo::zero();
    for (&(a, b, p1), cx) in &x.terms {
        for (&(c, dd, p2), cy) in &y.terms {
            nabla_frame(p1, a, b, p2, c, dd, lambda, &mut out, cx * cy);
        }
    }
    out
}

/// `∇_x y` from `⟨∇_x y, z⟩ = ½(⟨[x,y],z⟩ − ⟨[y,z],x⟩ + ⟨[z,x],y⟩)`,
/// pairing against every `ξ_cd`, `iξ_cd` with `c, d ∈ index_set`.
pub fn nabla_oracle(
    x: &XiCombo,
    y: &XiCombo,
    lambda: &LambdaSeq,
    index_set: &BTreeSet<i32>,
) -> Result<XiCombo> {
    let need: BTreeSet<i32> = x
        .index_closure()
        .union(&y.index_closure())
        .copied()
        .collect();
    if !need.is_subset(index_set) {
        return Err(Error::InvalidArgument(
            "index set misses indices of the inputs",
        ));
    }
    if index_set.contains(&0) {
        return Err(Error::InvalidArgument("index set contains 0"));
    }
    let xy = bracket(x, y, lambda);
    let mut out = XiCombo::zero();
    for &c in index_set {
        for &dd in index_set {
            for part in [Part::Re, Part::Im] {
                let z = XiCombo::term(c, dd, part, 1.0);
                let v = 0.5
                    * (xy.dot(&z) - bracket(y, &z, lambda).dot(x) + bracket(&z, x, lambda).dot(y));
                if v.abs() > 1e-300 {
                    out.add(c, dd, part, v);
                }
            }
        }
    }
    Ok(out)
}

/// Default index set for the oracle: the closure of the inputs.
pub fn oracle_index_set(x: &XiCombo, y: &XiCombo) -> BTreeSet<i32> {
    x.index_closure()
        .union(&y.index_closure())
        .copied()
        .collect()
}

/// `R_{xy}(z) = ∇_{[x,y]}z − ∇_x∇_y z + ∇_y∇_x z`.
pub fn riemann(x: &XiCombo, y: &XiCombo, z: &XiCombo, lambda: &LambdaSeq) -> XiCombo {
    let a = nabla(&bracket(x, y, lambda), z, lambda);
    let b = nabla(x, &nabla(y, z, lambda), lambda);
    let c = nabla(y, &nabla(x, z, lambda), lambda);
    a.axpy(-1.0, &b).axpy(1.0, &c)
}

/// [`riemann`] with every connection evaluated by the oracle.
pub fn riemann_oracle(
    x: &XiCombo,
    y: &XiCombo,
    z: &XiCombo,
    lambda: &LambdaSeq,
) -> Result<XiCombo> {
    let nab = |u: &XiCombo, v: &XiCombo| nabla_oracle(u, v, lambda, &oracle_index_set(u, v));
    let a = nab(&bracket(x, y, lambda), z)?;
    let b = nab(x, &nab(y, z)?)?;
    let c = nab(y, &nab(x, z)?)?;
    Ok(a.axpy(-1.0, &b).axpy(1.0, &c))
}

/// `K(x, y) = ⟨R_{xy}(x), y⟩`.
pub fn sectional(x: &XiCombo, y: &XiCombo, lambda: &LambdaSeq) -> f64 {
    riemann(x, y, x, lambda).dot(y)
}

pub fn sectional_oracle(x: &XiCombo, y: &XiCombo, lambda: &LambdaSeq) -> Result<f64> {
    Ok(riemann_oracle(x, y, x, lambda)?.dot(y))
}

fn check_range(label: BasisLabel, lambda: &LambdaSeq, n: usize) -> Result<()> {
    if label.extent() > n {
        return Err(Error::InvalidArgument("label index exceeds N"));
    }
    if lambda.len() < n {
        return Err(Error::InvalidArgument("lambda sequence shorter than N"));
    }
    Ok(())
}

/// `Ric^N(x) = Σ_ξ K(x, ξ)/|ξ|²` over the canonical labels with indices `≤ N`.
///
/// The division makes the sum run over a unit-normalized frame; it only
/// matters for the diagonal labels, whose elements have norm `√2`.
pub fn ricci_truncated(label: BasisLabel, lambda: &LambdaSeq, n: usize) -> Result<f64> {
    check_range(label, lambda, n)?;
    let x = XiCombo::from_label(label);
    Ok(ricci_terms(&x, lambda, n).into_iter().map(|(_, k)| k).sum())
}

/// Per-label contributions `K(x, ξ)/|ξ|²` in label order.
pub fn ricci_terms(x: &XiCombo, lambda: &LambdaSeq, n: usize) -> Vec<(BasisLabel, f64)> {
    labels(n)
        .into_iter()
        .map(|l| {
            let y = XiCombo::from_label(l);
            (l, sectional(x, &y, lambda) / y.norm_sq())
        })
        .collect()
}

struct Sums<'a> {
    l: &'a LambdaSeq,
    n: i32,
}

impl Sums<'_> {
    /// `Σ_{d=1}^{x-1} λ_d^p`
    fn below(&self, x: i32, p: i32) -> f64 {
        (1..x).map(|d| self.l.get(d).powi(p)).sum()
    }

    /// `Σ_{c=x+1}^{N} λ_c^p`
    fn above(&self, x: i32, p: i32) -> f64 {
        (x + 1..=self.n).map(|c| self.l.get(c).powi(p)).sum()
    }
}

/// The closed-form `Ric^N` of the published theorem, evaluated as printed.
///
/// For `ν` labels the partial sums run up to `|b|`.
pub fn ricci_closed_form(label: BasisLabel, lambda: &LambdaSeq, n: usize) -> Result<f64> {
    check_range(label, lambda, n)?;
    let s = Sums {
        l: lambda,
        n: n as i32,
    };
    let a = label.a();
    let b = label.b().abs();
    let nf = n as f64;
    let (la2, lb2) = (lambda.sq(a), lambda.sq(b));
    let (la4, lb4) = (la2 * la2, lb2 * lb2);
    let diag = label.is_diagonal();

    // Shared skeleton; `mixed` is the λa²λb² coefficient, `cross` the sign
    // of the 8λ²Σλ² cross terms.
    let generic = |mixed: f64, outer: f64, cross: f64| {
        outer * la4 + outer * lb4 + mixed * la2 * lb2 - 12.0 * la2 * s.below(a, 2)
            + cross * 8.0 * la2 * s.below(b, 2)
            + cross * 8.0 * lb2 * s.below(a, 2)
            - 12.0 * lb2 * s.below(b, 2)
            + 8.0 * s.below(a, 4)
            + 8.0 * s.below(b, 4)
            - 16.0 * nf * la4
            - 16.0 * nf * lb4
            - 12.0 * la2 * s.above(a, 2)
            + cross * 8.0 * la2 * s.above(b, 2)
            + cross * 8.0 * lb2 * s.above(a, 2)
            - 12.0 * lb2 * s.above(b, 2)
            + 8.0 * s.above(a, 4)
            + 8.0 * s.above(b, 4)
    };

    let bracket = match (label.kind(), diag) {
        (Kind::MuRe, _) => generic(48.0, -24.0, 1.0),
        (Kind::MuIm, false) | (Kind::NuIm, false) => generic(-32.0, -40.0, -1.0),
        (Kind::NuRe, false) => generic(-48.0, -40.0, -1.0),
        (Kind::NuRe, true) => {
            -192.0 * la4 - 32.0 * s.below(a, 4) - 192.0 * nf * la4 - 32.0 * s.above(a, 4)
        }
        (Kind::MuIm, true) | (Kind::NuIm, true) => 0.0,
    };
    Ok(bracket / 16.0)
}

/// The corollary's values at `λ ≡ 1/√2`.
pub fn corollary_value(label: BasisLabel, n: usize) -> f64 {
    let nf = n as f64;
    match (label.kind(), label.is_diagonal()) {
        (Kind::MuRe, _) => -3.0 / 8.0 * nf - 1.0 / 8.0,
        (Kind::MuIm, false) | (Kind::NuIm, false) => -7.0 / 8.0 * nf - 11.0 / 8.0,
        (Kind::NuRe, false) => -7.0 / 8.0 * nf - 13.0 / 8.0,
        (Kind::NuRe, true) => -3.5 * nf - 2.5,
        (Kind::MuIm, true) | (Kind::NuIm, true) => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    pub label: BasisLabel,
    pub n: usize,
    pub brute: f64,
    pub closed_form: f64,
    pub abs_diff: f64,
}

impl CurvatureReport {
    pub fn compute(label: BasisLabel, lambda: &LambdaSeq, n: usize) -> Result<Self> {
        let brute = ricci_truncated(label, lambda, n)?;
        let closed_form = ricci_closed_form(label, lambda, n)?;
        Ok(CurvatureReport {
            label,
            n,
            brute,
            closed_form,
            abs_diff: (brute - closed_form).abs(),
        })
    }

    /// `abs_diff ≤ tol·max(1, |closed_form|)`.
    pub fn agrees(&self, tol: f64) -> bool {
        self.abs_diff <= tol * self.closed_form.abs().max(1.0)
    }
}

pub fn curvature_report(
    labels: &[BasisLabel],
    lambda: &LambdaSeq,
    n: usize,
) -> Result<Vec<CurvatureReport>> {
    labels
        .iter()
        .map(|l| CurvatureReport::compute(*l, lambda, n))
        .collect()
}
