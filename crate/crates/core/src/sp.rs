//! The Lie algebra sp(∞) on a window: the μ/ν basis, projection, the
//! λ-weighted metric, covariance specifications and the Itô drift.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::op::TruncOp;
use crate::{sgn, Complex64, Error, Result, Window, I};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Metric parameters `λ_1..λ_N`, extended by `λ_{-i} = λ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeq {
    vals: Vec<f64>,
}

impl LambdaSeq {
    pub fn new(vals: Vec<f64>) -> Result<Self> {
        if vals.is_empty() {
            return Err(Error::InvalidArgument("lambda sequence is empty"));
        }
        if vals.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidArgument(
                "lambda values must be positive and finite",
            ));
        }
        Ok(LambdaSeq { vals })
    }

    pub fn uniform(n: usize, x: f64) -> Result<Self> {
        Self::new(alloc::vec![x; n])
    }

    /// `λ ≡ 1/√2`, the canonical Hilbert–Schmidt metric.
    pub fn canonical(n: usize) -> Self {
        Self::uniform(n, core::f64::consts::FRAC_1_SQRT_2).expect("positive")
    }

    /// `λ_i = i^{-p/2}`.
    pub fn power(n: usize, p: f64) -> Result<Self> {
        Self::new((1..=n).map(|i| (i as f64).powf(-p / 2.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    #[inline]
    pub fn get(&self, i: i32) -> f64 {
        self.vals[i.unsigned_abs() as usize - 1]
    }

    #[inline]
    pub fn sq(&self, i: i32) -> f64 {
        let l = self.get(i);
        l * l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    MuRe,
    MuIm,
    NuRe,
    NuIm,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::MuRe, Kind::MuIm, Kind::NuRe, Kind::NuIm];

    pub fn name(self) -> &'static str {
        match self {
            Kind::MuRe => "mu_re",
            Kind::MuIm => "mu_im",
            Kind::NuRe => "nu_re",
            Kind::NuIm => "nu_im",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A canonical basis label `(kind, a, b)`.
///
/// `MuRe` needs `a > b > 0`, `MuIm` needs `a ≥ b > 0`, `NuRe`/`NuIm` need
/// `a ≥ -b > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    kind: Kind,
    a: i32,
    b: i32,
}

impl BasisLabel {
    pub fn new(kind: Kind, a: i32, b: i32) -> Result<Self> {
        let ok = match kind {
            Kind::MuRe => a > b && b > 0,
            Kind::MuIm => a >= b && b > 0,
            Kind::NuRe | Kind::NuIm => b < 0 && a >= -b,
        };
        if ok {
            Ok(BasisLabel { kind, a, b })
        } else {
            Err(Error::InvalidLabel {
                kind: kind.name(),
                a,
                b,
            })
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn a(&self) -> i32 {
        self.a
    }

    pub fn b(&self) -> i32 {
        self.b
    }

    /// `|a| = |b|`: the labels whose basis element has norm `√2`.
    pub fn is_diagonal(&self) -> bool {
        self.a == self.b.abs()
    }

    /// Largest index magnitude.
    pub fn extent(&self) -> usize {
        self.a.unsigned_abs().max(self.b.unsigned_abs()) as usize
    }

    /// Pattern of the element as `(m, n, coefficient)` in units of `λ_aλ_b`.
    pub fn pattern(&self) -> [(i32, i32, Complex64); 4] {
        let (a, b) = (self.a, self.b);
        let one = Complex64::new(1.0, 0.0);
        match self.kind {
            Kind::MuRe => [(a, b, one), (b, a, -one), (-a, -b, one), (-b, -a, -one)],
            Kind::MuIm => [(a, b, I), (b, a, I), (-a, -b, -I), (-b, -a, -I)],
            Kind::NuRe => [(a, b, one), (-b, -a, one), (-a, -b, one), (b, a, one)],
            Kind::NuIm => [(a, b, I), (-b, -a, I), (-a, -b, -I), (b, a, -I)],
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind, self.a, self.b)
    }
}

/// All canonical labels with indices `≤ n`, family by family, `a` then `|b|` ascending.
pub fn labels(n: usize) -> Vec<BasisLabel> {
    labels_where(n, |_| true)
}

pub fn labels_where(n: usize, mut keep: impl FnMut(&BasisLabel) -> bool) -> Vec<BasisLabel> {
    let n = n as i32;
    let mut out = Vec::new();
    for kind in Kind::ALL {
        for a in 1..=n {
            for c in 1..=a {
                let b = match kind {
                    Kind::MuRe if c == a => continue,
                    Kind::MuRe | Kind::MuIm => c,
                    Kind::NuRe | Kind::NuIm => -c,
                };
                let l = BasisLabel { kind, a, b };
                if keep(&l) {
                    out.push(l);
                }
            }
        }
    }
    out
}

/// Real (`Re`) or imaginary (`Im`) unit placed at a matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    Re,
    Im,
}

impl Part {
    pub fn unit(self) -> Complex64 {
        match self {
            Part::Re => Complex64::new(1.0, 0.0),
            Part::Im => I,
        }
    }
}

/// Canonical label whose element carries entry `(m, k)` with the given part.
///
/// `None` for the real diagonal of the `a`/`d` blocks, which sp(∞) forces to zero.
pub fn canonical_label(m: i32, k: i32, part: Part) -> Option<BasisLabel> {
    let (p, q) = (m.unsigned_abs() as i32, k.unsigned_abs() as i32);
    let (hi, lo) = (p.max(q), p.min(q));
    let kind = match (sgn(m) * sgn(k) > 0, part) {
        (true, Part::Re) if hi == lo => return None,
        (true, Part::Re) => Kind::MuRe,
        (true, Part::Im) => Kind::MuIm,
        (false, Part::Re) => Kind::NuRe,
        (false, Part::Im) => Kind::NuIm,
    };
    let b = if kind == Kind::NuRe || kind == Kind::NuIm {
        -lo
    } else {
        lo
    };
    Some(BasisLabel { kind, a: hi, b })
}

/// Sparse element of the window's matrix space, usually in sp(∞).
#[derive(Debug, Clone, PartialEq)]
pub struct SpElem {
    window: Window,
    entries: BTreeMap<(i32, i32), Complex64>,
}

impl SpElem {
    pub fn zero(window: Window) -> Self {
        SpElem {
            window,
            entries: BTreeMap::new(),
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn get(&self, m: i32, n: i32) -> Complex64 {
        self.entries.get(&(m, n)).copied().unwrap_or(ZERO)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((i32, i32), Complex64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn add_at(&mut self, m: i32, n: i32, v: Complex64) -> Result<()> {
        self.window.try_slot(m)?;
        self.window.try_slot(n)?;
        let e = self.entries.entry((m, n)).or_insert(ZERO);
        *e += v;
        if *e == ZERO {
            self.entries.remove(&(m, n));
        }
        Ok(())
    }

    pub fn to_dense(&self) -> TruncOp {
        let mut a = TruncOp::zeros(self.window);
        for (&(m, n), v) in &self.entries {
            a.set(m, n, *v);
        }
        a
    }

    pub fn from_dense(a: &TruncOp) -> Self {
        SpElem {
            window: a.window(),
            entries: a
                .entries()
                .filter(|(_, _, v)| *v != ZERO)
                .map(|(m, n, v)| ((m, n), v))
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> SpElem {
        SpElem {
            window: self.window,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (*k, v * c))
                .filter(|(_, v)| *v != ZERO)
                .collect(),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &SpElem) -> Result<SpElem> {
        self.window.check_same(&other.window)?;
        let mut out = self.clone();
        for (&(m, n), v) in &other.entries {
            out.add_at(m, n, v * c)?;
        }
        Ok(out)
    }

    /// `max(max|x_{mn} − conj x_{-m,-n}|, max|x_{mn} + sgn(mn) x_{-n,-m}|)`.
    pub fn sp_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (&(m, n), v) in &self.entries {
            let real = (v - self.get(-m, -n).conj()).norm();
            let skew = (v + f64::from(sgn(m) * sgn(n)) * self.get(-n, -m)).norm();
            worst = worst.max(real).max(skew);
        }
        worst
    }

    pub fn sp_check(&self, tol: f64) -> bool {
        self.sp_residual() <= tol
    }

    /// Sparse product.
    pub fn mul(&self, rhs: &SpElem) -> Result<SpElem> {
        self.window.check_same(&rhs.window)?;
        let mut rows: BTreeMap<i32, Vec<(i32, Complex64)>> = BTreeMap::new();
        for (&(k, n), v) in &rhs.entries {
            rows.entry(k).or_default().push((n, *v));
        }
        let mut out = SpElem::zero(self.window);
        for (&(m, k), a) in &self.entries {
            if let Some(r) = rows.get(&k) {
                for (n, b) in r {
                    out.add_at(m, *n, a * b)?;
                }
            }
        }
        Ok(out)
    }

    /// `(x#)_{m,n} = sgn(mn)·x_{-n,-m}`.
    pub fn sharp(&self) -> SpElem {
        SpElem {
            window: self.window,
            entries: self
                .entries
                .iter()
                .map(|(&(m, n), v)| ((-n, -m), v * f64::from(sgn(m) * sgn(n))))
                .collect(),
        }
    }
}

/// The basis element of `label` at metric `λ`: `λ_aλ_b` times its four-term pattern.
pub fn basis_element(label: BasisLabel, lambda: &LambdaSeq, window: Window) -> Result<SpElem> {
    if label.extent() > window.n() {
        return Err(Error::OutOfWindow {
            index: label.a.max(-label.b),
            n: window.n(),
        });
    }
    if label.extent() > lambda.len() {
        return Err(Error::InvalidArgument("lambda sequence shorter than label"));
    }
    let s = lambda.get(label.a) * lambda.get(label.b);
    let mut x = SpElem::zero(window);
    for (m, n, c) in label.pattern() {
        x.add_at(m, n, c * s)?;
    }
    Ok(x)
}

/// The displayed image of a single Hilbert–Schmidt basis matrix
/// (`e_mn` for `Re`, `i·e_mn` for `Im`): half the signed sum over its
/// symmetry orbit. These are unit vectors of sp(∞) off the diagonal.
pub fn pi_basis(m: i32, n: i32, part: Part, window: Window) -> Result<SpElem> {
    let mut x = SpElem::zero(window);
    let u = part.unit();
    let terms = if sgn(m) * sgn(n) > 0 {
        match part {
            Part::Re => [(m, n, 1.0), (n, m, -1.0), (-m, -n, 1.0), (-n, -m, -1.0)],
            Part::Im => [(m, n, 1.0), (n, m, 1.0), (-m, -n, -1.0), (-n, -m, -1.0)],
        }
    } else {
        match part {
            Part::Re => [(m, n, 1.0), (-n, -m, 1.0), (-m, -n, 1.0), (n, m, 1.0)],
            Part::Im => [(m, n, 1.0), (-n, -m, 1.0), (-m, -n, -1.0), (n, m, -1.0)],
        }
    };
    for (i, j, c) in terms {
        x.add_at(i, j, u * (0.5 * c))?;
    }
    Ok(x)
}

/// Orthogonal projection onto sp(∞): `¼(M − M# + M̄ − M̄#)`.
///
/// Orthogonal for every symmetric `λ` since both reflections permute
/// entries within `λ`-weight classes.
pub fn project_sp(m: &TruncOp) -> SpElem {
    let c = m.conj_op();
    let p = TruncOp::from_fn(m.window(), |i, j| {
        let s = f64::from(sgn(i) * sgn(j));
        0.25 * (m.get(i, j) - s * m.get(-j, -i) + c.get(i, j) - s * c.get(-j, -i))
    });
    SpElem::from_dense(&p)
}

/// Commutator `xy − yx`.
pub fn bracket(x: &SpElem, y: &SpElem) -> Result<SpElem> {
    let xy = x.mul(y)?;
    let yx = y.mul(x)?;
    xy.axpy(-1.0, &yx)
}

/// `Σ (Re x·Re y + Im x·Im y) / (4λ_m²λ_n²)`.
pub fn inner_lambda(x: &SpElem, y: &SpElem, lambda: &LambdaSeq) -> Result<f64> {
    x.window.check_same(&y.window)?;
    let (small, big) = if x.nnz() <= y.nnz() { (x, y) } else { (y, x) };
    Ok(small
        .entries
        .iter()
        .map(|(&(m, n), a)| {
            let b = big.get(m, n);
            (a.re * b.re + a.im * b.im) / (4.0 * lambda.sq(m) * lambda.sq(n))
        })
        .sum())
}

/// Dense version of [`inner_lambda`].
pub fn inner_lambda_dense(x: &TruncOp, y: &TruncOp, lambda: &LambdaSeq) -> Result<f64> {
    x.window().check_same(&y.window())?;
    Ok(x.entries()
        .map(|(m, n, a)| {
            let b = y.get(m, n);
            (a.re * b.re + a.im * b.im) / (4.0 * lambda.sq(m) * lambda.sq(n))
        })
        .sum())
}

/// `ξ_ab = 2λ_aλ_b e_ab` times the unit of `part`.
pub fn xi(a: i32, b: i32, part: Part, lambda: &LambdaSeq, window: Window) -> Result<SpElem> {
    let mut x = SpElem::zero(window);
    x.add_at(a, b, part.unit() * (2.0 * lambda.get(a) * lambda.get(b)))?;
    Ok(x)
}

/// Nonnegative weights `Q` on canonical labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CovSpec {
    weights: BTreeMap<BasisLabel, f64>,
}

impl CovSpec {
    pub fn zero() -> Self {
        CovSpec::default()
    }

    /// `q` on every label with `max(|a|,|b|) ≤ k`, restricted to the window.
    pub fn uniform(q: f64, k: usize, window: Window) -> Result<Self> {
        let mut c = CovSpec::zero();
        for l in labels(k.min(window.n())) {
            c.set(l, q)?;
        }
        Ok(c)
    }

    /// `Q = (|a||b|)^{-p}` on every label in the window, `p > 1`.
    pub fn power(p: f64, window: Window) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::InvalidArgument("power covariance needs p > 1"));
        }
        let mut c = CovSpec::zero();
        for l in labels(window.n()) {
            let ab = f64::from(l.a.unsigned_abs()) * f64::from(l.b.unsigned_abs());
            c.set(l, ab.powf(-p))?;
        }
        Ok(c)
    }

    pub fn set(&mut self, label: BasisLabel, q: f64) -> Result<()> {
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::InvalidArgument(
                "covariance weights must be finite and >= 0",
            ));
        }
        if q == 0.0 {
            self.weights.remove(&label);
        } else {
            self.weights.insert(label, q);
        }
        Ok(())
    }

    pub fn get(&self, label: &BasisLabel) -> f64 {
        self.weights.get(label).copied().unwrap_or(0.0)
    }

    /// `Q^{Re}_{mk}` or `Q^{Im}_{mk}`: the weight of the label carrying `(m, k)`.
    pub fn entry_weight(&self, m: i32, k: i32, part: Part) -> f64 {
        canonical_label(m, k, part).map_or(0.0, |l| self.get(&l))
    }

    /// Nonzero weights in label order.
    pub fn iter(&self) -> impl Iterator<Item = (BasisLabel, f64)> + '_ {
        self.weights.iter().map(|(l, q)| (*l, *q))
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.weights.values().sum()
    }

    /// Drops labels reaching outside the window.
    pub fn restrict(&self, window: Window) -> CovSpec {
        CovSpec {
            weights: self
                .weights
                .iter()
                .filter(|(l, _)| l.extent() <= window.n())
                .map(|(l, q)| (*l, *q))
                .collect(),
        }
    }
}

/// Noise direction paired with a label's weight.
///
/// The canonical element divided by its squared norm. Off the diagonal this
/// is the element itself; for the two diagonal families it is half of it.
/// With this pairing `⟨frame, element⟩ = 1` and the drift below is exact.
pub fn noise_frame(label: BasisLabel, window: Window) -> Result<SpElem> {
    let e = basis_element(label, &LambdaSeq::canonical(window.n()), window)?;
    Ok(if label.is_diagonal() { e.scale(0.5) } else { e })
}

/// Diagonal Itô drift `D_m = −¼·sgn(m)·Σ_k sgn(k)[Q^{Re}_{mk} + Q^{Im}_{mk}]`, by slot.
pub fn drift_matrix(q: &CovSpec, window: Window) -> Vec<f64> {
    window
        .indices()
        .map(|m| {
            let s: f64 = window
                .indices()
                .map(|k| {
                    f64::from(sgn(k))
                        * (q.entry_weight(m, k, Part::Re) + q.entry_weight(m, k, Part::Im))
                })
                .sum();
            -0.25 * f64::from(sgn(m)) * s
        })
        .collect()
}

/// `Σ_ℓ Q(ℓ)·f_ℓ·f_ℓ#` over the noise frames.
pub fn sum_xi(q: &CovSpec, window: Window) -> Result<SpElem> {
    let mut acc = SpElem::zero(window);
    for (label, w) in q.restrict(window).iter() {
        let f = noise_frame(label, window)?;
        acc = acc.axpy(w, &f.mul(&f.sharp())?)?;
    }
    Ok(acc)
}

/// Max-entry deviation of [`sum_xi`] from `−D`.
pub fn sum_xi_residual(q: &CovSpec, window: Window) -> Result<f64> {
    let s = sum_xi(q, window)?;
    let d = drift_matrix(&q.restrict(window), window);
    let mut target = SpElem::zero(window);
    for (slot, dm) in d.iter().enumerate() {
        let m = window.index(slot);
        target.add_at(m, m, Complex64::new(-dm, 0.0))?;
    }
    let diff = s.axpy(-1.0, &target)?;
    Ok(diff.entries().map(|(_, v)| v.norm()).fold(0.0, f64::max))
}
