mod common;

use common::{random_op, random_sp, rng, win};
use proptest::prelude::*;
use rand::Rng;
use splab_core::op::TruncOp;
use splab_core::sp::{
    basis_element, bracket, drift_matrix, inner_lambda, inner_lambda_dense, labels, pi_basis,
    project_sp, sum_xi, sum_xi_residual, xi, BasisLabel, CovSpec, Kind, LambdaSeq, Part, SpElem,
};
use splab_core::{Complex64, Window};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn elem(w: Window, terms: &[(i32, i32, Complex64)]) -> SpElem {
    let mut x = SpElem::zero(w);
    for (m, n, v) in terms {
        x.add_at(*m, *n, *v).unwrap();
    }
    x
}

fn max_diff(a: &SpElem, b: &SpElem) -> f64 {
    a.to_dense().max_abs_diff(&b.to_dense())
}

fn random_lambda(n: usize, seed: u64) -> LambdaSeq {
    let mut r = rng(seed);
    LambdaSeq::new((0..n).map(|_| r.random_range(0.5..2.0)).collect()).unwrap()
}

#[test]
fn mu_re_21_is_projected_unit() {
    let w = win(3);
    let l = BasisLabel::new(Kind::MuRe, 2, 1).unwrap();
    let got = basis_element(l, &LambdaSeq::canonical(3), w).unwrap();
    let expect = elem(
        w,
        &[
            (2, 1, c(0.5, 0.0)),
            (1, 2, c(-0.5, 0.0)),
            (-2, -1, c(0.5, 0.0)),
            (-1, -2, c(-0.5, 0.0)),
        ],
    );
    assert!(max_diff(&got, &expect) < 1e-15);
    assert!(max_diff(&got, &pi_basis(2, 1, Part::Re, w).unwrap()) < 1e-15);
}

#[test]
fn nu_re_diagonal_expansion() {
    let w = win(2);
    let l = BasisLabel::new(Kind::NuRe, 1, -1).unwrap();
    let got = basis_element(l, &LambdaSeq::canonical(2), w).unwrap();
    let expect = elem(w, &[(1, -1, c(1.0, 0.0)), (-1, 1, c(1.0, 0.0))]);
    assert!(max_diff(&got, &expect) < 1e-15);
}

#[test]
fn every_label_is_in_sp() {
    let w = win(6);
    for lam in [LambdaSeq::canonical(6), random_lambda(6, 9)] {
        for l in labels(6) {
            assert!(basis_element(l, &lam, w).unwrap().sp_check(1e-14), "{l}");
        }
    }
}

#[test]
fn label_outside_window_rejected() {
    let l = BasisLabel::new(Kind::MuRe, 5, 1).unwrap();
    assert!(basis_element(l, &LambdaSeq::canonical(5), win(4)).is_err());
}

#[test]
fn projection_of_single_entry() {
    let w = win(3);
    let mut e21 = TruncOp::zeros(w);
    e21.set(2, 1, c(1.0, 0.0));
    let p = project_sp(&e21);
    // The orthogonal projection is half the displayed unit image.
    let unit = pi_basis(2, 1, Part::Re, w).unwrap();
    assert!(max_diff(&p, &unit.scale(0.5)) < 1e-16);
    assert!((inner_lambda(&unit, &unit, &LambdaSeq::canonical(3)).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn pi_images_of_all_entries_are_in_sp() {
    let w = win(4);
    for m in w.indices() {
        for n in w.indices() {
            for part in [Part::Re, Part::Im] {
                assert!(pi_basis(m, n, part, w).unwrap().sp_check(1e-15));
            }
        }
    }
}

#[test]
fn projection_fixes_sp() {
    let w = win(4);
    let x = random_sp(w, &mut rng(1));
    assert!(max_diff(&project_sp(&x.to_dense()), &x) < 1e-15);
}

#[test]
fn projection_is_orthogonal() {
    let n = 4;
    let w = win(n);
    for lam in [LambdaSeq::canonical(n), random_lambda(n, 4)] {
        let m = random_op(w, &mut rng(2));
        let resid = &m - &project_sp(&m).to_dense();
        for l in labels(n) {
            let s = basis_element(l, &lam, w).unwrap().to_dense();
            assert!(
                inner_lambda_dense(&resid, &s, &lam).unwrap().abs() < 1e-12,
                "{l}"
            );
        }
    }
}

#[test]
fn xi_bracket_rule() {
    let lam = random_lambda(3, 17);
    let w = win(3);
    let x12 = xi(1, 2, Part::Re, &lam, w).unwrap();
    let x23 = xi(2, 3, Part::Re, &lam, w).unwrap();
    let x13 = xi(1, 3, Part::Re, &lam, w).unwrap();
    let got = bracket(&x12, &x23).unwrap();
    assert!(max_diff(&got, &x13.scale(2.0 * lam.sq(2))) < 1e-14);
}

#[test]
fn bracket_matches_dense_commutator() {
    let w = win(3);
    let lam = LambdaSeq::canonical(3);
    let a = basis_element(BasisLabel::new(Kind::MuRe, 2, 1).unwrap(), &lam, w).unwrap();
    let b = basis_element(BasisLabel::new(Kind::MuIm, 2, 1).unwrap(), &lam, w).unwrap();
    let sparse = bracket(&a, &b).unwrap().to_dense();
    let (da, db) = (a.to_dense(), b.to_dense());
    let dense = &(&da * &db) - &(&db * &da);
    assert!(sparse.max_abs_diff(&dense) < 1e-15);
    assert!(bracket(&a, &a).unwrap().nnz() == 0);
}

#[test]
fn brackets_close_in_sp() {
    let n = 4;
    let w = win(n);
    let lam = random_lambda(n, 5);
    let basis: Vec<SpElem> = labels(n)
        .into_iter()
        .map(|l| basis_element(l, &lam, w).unwrap())
        .collect();
    for x in &basis {
        for y in &basis {
            assert!(bracket(x, y).unwrap().sp_check(1e-12));
        }
    }
}

#[test]
fn xi_frame_is_orthonormal() {
    let lam = random_lambda(4, 3);
    let w = win(4);
    let x = xi(3, 2, Part::Re, &lam, w).unwrap();
    let y = xi(3, 2, Part::Im, &lam, w).unwrap();
    assert!((inner_lambda(&x, &x, &lam).unwrap() - 1.0).abs() < 1e-15);
    assert!((inner_lambda(&y, &y, &lam).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(inner_lambda(&x, &y, &lam).unwrap(), 0.0);
}

#[test]
fn canonical_metric_is_plain_real_inner_product() {
    let w = win(3);
    let mut r = rng(8);
    let (a, b) = (random_sp(w, &mut r), random_sp(w, &mut r));
    let plain: f64 = a
        .to_dense()
        .entries()
        .map(|(m, n, v)| {
            let u = b.get(m, n);
            v.re * u.re + v.im * u.im
        })
        .sum();
    let lam = LambdaSeq::canonical(3);
    assert!((inner_lambda(&a, &b, &lam).unwrap() - plain).abs() < 1e-14);
}

#[test]
fn basis_orthogonality_and_norms() {
    // Off-diagonal labels are unit vectors; mu_im(a,a) and nu(a,-a) have squared norm 2.
    let n = 5;
    let w = win(n);
    let lam = random_lambda(n, 21);
    let ls = labels(n);
    let basis: Vec<SpElem> = ls
        .iter()
        .map(|l| basis_element(*l, &lam, w).unwrap())
        .collect();
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let v = inner_lambda(x, y, &lam).unwrap();
            let expect = match (i == j, ls[i].is_diagonal()) {
                (false, _) => 0.0,
                (true, false) => 1.0,
                (true, true) => 2.0,
            };
            assert!((v - expect).abs() < 1e-14, "{} {}: {v}", ls[i], ls[j]);
        }
    }
}

#[test]
fn drift_of_zero_covariance() {
    assert!(drift_matrix(&CovSpec::zero(), win(5))
        .iter()
        .all(|d| *d == 0.0));
    assert_eq!(sum_xi_residual(&CovSpec::zero(), win(5)).unwrap(), 0.0);
}

/// Literal evaluation of the drift sum, label lookup spelled out by hand.
fn drift_by_hand(q: &CovSpec, w: Window) -> Vec<f64> {
    let lookup =
        |kind: Kind, a: i32, b: i32| BasisLabel::new(kind, a, b).map_or(0.0, |l| q.get(&l));
    w.indices()
        .map(|m| {
            let mut s = 0.0;
            for k in w.indices() {
                let (hi, lo) = (m.abs().max(k.abs()), m.abs().min(k.abs()));
                let both = if (m > 0) == (k > 0) {
                    lookup(Kind::MuRe, hi, lo) + lookup(Kind::MuIm, hi, lo)
                } else {
                    lookup(Kind::NuRe, hi, -lo) + lookup(Kind::NuIm, hi, -lo)
                };
                s += f64::from(k.signum()) * both;
            }
            -0.25 * f64::from(m.signum()) * s
        })
        .collect()
}

#[test]
fn one_sided_uniform_drift() {
    let n = 6;
    let k = 4;
    let w = win(n);
    let mut q = CovSpec::zero();
    for l in labels(k) {
        if matches!(l.kind(), Kind::MuRe | Kind::MuIm) {
            q.set(l, 1.0).unwrap();
        }
    }
    let d = drift_matrix(&q, w);
    assert_eq!(d, drift_by_hand(&q, w));
    for m in w.indices() {
        let expect = if m.unsigned_abs() as usize <= k {
            -(2.0 * k as f64 - 1.0) / 4.0
        } else {
            0.0
        };
        assert_eq!(d[w.slot(m)], expect, "m={m}");
    }
}

#[test]
fn balanced_covariance_has_no_drift() {
    let n = 5;
    let w = win(n);
    let mut q = CovSpec::uniform(0.3, n, w).unwrap();
    for a in 1..=n as i32 {
        q.set(BasisLabel::new(Kind::MuIm, a, a).unwrap(), 0.6)
            .unwrap();
    }
    assert!(drift_matrix(&q, w).iter().all(|d| d.abs() < 1e-15));
    assert!(sum_xi_residual(&q, w).unwrap() < 1e-15);
}

#[test]
fn sum_xi_single_label() {
    let w = win(3);
    let mut q = CovSpec::zero();
    q.set(BasisLabel::new(Kind::MuRe, 2, 1).unwrap(), 1.0)
        .unwrap();
    let s = sum_xi(&q, w).unwrap();
    let expect = elem(
        w,
        &[
            (1, 1, c(0.25, 0.0)),
            (2, 2, c(0.25, 0.0)),
            (-1, -1, c(0.25, 0.0)),
            (-2, -2, c(0.25, 0.0)),
        ],
    );
    assert!(max_diff(&s, &expect) < 1e-15);
}

#[test]
fn sum_xi_presets() {
    let w = win(8);
    for q in [
        CovSpec::zero(),
        CovSpec::uniform(1.0, 4, w).unwrap(),
        CovSpec::power(2.0, w).unwrap(),
    ] {
        assert!(sum_xi_residual(&q, w).unwrap() <= 1e-12);
    }
    assert!(CovSpec::power(1.0, w).is_err());
}

#[test]
fn presets_have_expected_support() {
    let w = win(6);
    let u = CovSpec::uniform(2.0, 3, w).unwrap();
    assert!(u.iter().all(|(l, q)| l.extent() <= 3 && q == 2.0));
    assert_eq!(u.iter().count(), labels(3).len());
    let p = CovSpec::power(2.0, w).unwrap();
    let l = BasisLabel::new(Kind::NuIm, 3, -2).unwrap();
    assert!((p.get(&l) - 1.0 / 36.0).abs() < 1e-16);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_idempotent(seed in any::<u64>(), n in 1usize..6) {
        let w = win(n);
        let m = random_op(w, &mut rng(seed));
        let p = project_sp(&m);
        prop_assert!(p.sp_check(1e-15));
        prop_assert!(max_diff(&project_sp(&p.to_dense()), &p) <= 1e-14);
    }

    #[test]
    fn random_explicit_covariance_cancels(seed in any::<u64>(), n in 1usize..7) {
        let w = win(n);
        let mut r = rng(seed);
        let mut q = CovSpec::zero();
        for l in labels(n) {
            if r.random_bool(0.6) {
                q.set(l, r.random_range(0.0..3.0)).unwrap();
            }
        }
        prop_assert!(sum_xi_residual(&q, w).unwrap() <= 1e-12);
        let d = drift_matrix(&q, w);
        prop_assert_eq!(d.clone(), drift_by_hand(&q, w));
        for m in w.indices() {
            prop_assert!((d[w.slot(m)] - d[w.slot(-m)]).abs() <= 1e-14);
        }
    }
}
