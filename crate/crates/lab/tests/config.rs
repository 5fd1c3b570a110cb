use std::io::Write;

use splab::config::{parse_labels, parse_lambda, CovFile, DiffeoSpec, Family, Preset};
use splab::LabError;
use splab_core::sp::{labels, BasisLabel, CovSpec, Kind, LambdaSeq};
use splab_core::Window;

fn cov(json: &str) -> Result<CovFile, serde_json::Error> {
    serde_json::from_str(json)
}

#[test]
fn presets_match_core() {
    let w = Window::new(6).unwrap();
    let z = cov(r#"{"preset": "zero"}"#).unwrap().build(w).unwrap();
    assert!(z.is_zero());
    let u = cov(r#"{"preset": "uniform", "q": 1.0, "k": 4}"#)
        .unwrap()
        .build(w)
        .unwrap();
    assert_eq!(u, CovSpec::uniform(1.0, 4, w).unwrap());
    let p = cov(r#"{"preset": "power", "p": 2.0}"#)
        .unwrap()
        .build(w)
        .unwrap();
    assert_eq!(p, CovSpec::power(2.0, w).unwrap());
}

#[test]
fn explicit_rows_and_overrides() {
    let w = Window::new(4).unwrap();
    let f = cov(r#"{"preset": "explicit", "rows": [{"kind": "mu_re", "a": 2, "b": 1, "value": 0.5},
                                                   {"kind": "nu_im", "a": 3, "b": -3, "value": 2.0}]}"#)
    .unwrap();
    let c = f.build(w).unwrap();
    assert_eq!(c.get(&BasisLabel::new(Kind::MuRe, 2, 1).unwrap()), 0.5);
    assert_eq!(c.get(&BasisLabel::new(Kind::NuIm, 3, -3).unwrap()), 2.0);
    assert_eq!(c.iter().count(), 2);
    let f = cov(r#"{"preset": "uniform", "q": 1.0, "k": 2, "rows": [{"kind": "mu_im", "a": 1, "b": 1, "value": 0.0}]}"#)
        .unwrap();
    let c = f.build(w).unwrap();
    assert_eq!(c.iter().count(), labels(2).len() - 1);
}

#[test]
fn bad_cov_files_rejected() {
    let w = Window::new(4).unwrap();
    assert!(cov(r#"{"preset": "gaussian"}"#).is_err());
    assert!(cov(r#"{"preset": "zero", "extra": 1}"#).is_err());
    let needs_config_error = [
        r#"{"preset": "uniform", "q": 1.0}"#,
        r#"{"preset": "power", "p": 1.0}"#,
        r#"{"preset": "explicit", "rows": [{"kind": "mu_re", "a": 1, "b": 2, "value": 1.0}]}"#,
        r#"{"preset": "explicit", "rows": [{"kind": "mu_re", "a": 9, "b": 1, "value": 1.0}]}"#,
        r#"{"preset": "explicit", "rows": [{"kind": "mu_re", "a": 2, "b": 1, "value": -1.0}]}"#,
        r#"{"preset": "explicit", "rows": [{"kind": "xi", "a": 2, "b": 1, "value": 1.0}]}"#,
    ];
    for j in needs_config_error {
        let e = cov(j).unwrap().build(w).unwrap_err();
        assert!(matches!(e, LabError::Config(_)), "{j}: {e}");
        assert_eq!(e.exit_code(), 2);
    }
}

#[test]
fn cov_file_roundtrip_and_load() {
    let f = CovFile {
        preset: Preset::Power,
        q: None,
        k: None,
        p: Some(3.0),
        rows: Vec::new(),
    };
    let mut tmp = tempfile::NamedTempFile::new().unwrap();
    write!(tmp, "{}", serde_json::to_string(&f).unwrap()).unwrap();
    assert_eq!(CovFile::load(tmp.path()).unwrap(), f);
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, "{{\"preset\": ").unwrap();
    assert!(matches!(
        CovFile::load(bad.path()),
        Err(LabError::Config(_))
    ));
}

#[test]
fn lambda_grammar() {
    assert_eq!(
        parse_lambda("uniform:0.5", 3).unwrap(),
        LambdaSeq::uniform(3, 0.5).unwrap()
    );
    let p = parse_lambda("power:2", 4).unwrap();
    assert_eq!(p.values(), &[1.0, 0.5, 1.0 / 3.0, 0.25]);
    let mut tmp = tempfile::NamedTempFile::new().unwrap();
    writeln!(tmp, "# metric\n1.0\n\n2.0\n0.5\n9.0").unwrap();
    let spec = format!("file:{}", tmp.path().display());
    assert_eq!(parse_lambda(&spec, 3).unwrap().values(), &[1.0, 2.0, 0.5]);
    assert!(parse_lambda(&spec, 5).is_err());
    for bad in [
        "uniform",
        "uniform:-1",
        "uniform:x",
        "gauss:1",
        "file:/nonexistent/lambda",
    ] {
        assert!(parse_lambda(bad, 3).is_err(), "{bad}");
    }
}

#[test]
fn label_grammar() {
    assert_eq!(parse_labels("all:3").unwrap(), labels(3));
    let l = parse_labels("mu_re:2,1; nu_im:3,-2").unwrap();
    assert_eq!(
        l,
        vec![
            BasisLabel::new(Kind::MuRe, 2, 1).unwrap(),
            BasisLabel::new(Kind::NuIm, 3, -2).unwrap()
        ]
    );
    for bad in ["all:x", "mu_re:1,2", "mu_re:2", "xi:2,1", "mu_re"] {
        assert!(parse_labels(bad).is_err(), "{bad}");
    }
}

#[test]
fn diffeo_specs() {
    let spec = |family, k, eps| DiffeoSpec {
        family,
        k,
        eps,
        angle: 0.3,
        t: 0.1,
    };
    assert!(spec(Family::Sine, 2, 0.2).build().is_ok());
    assert!(spec(Family::Sine, 2, 0.6).build().is_err());
    assert!(spec(Family::Cosine, 3, 0.0).build().is_ok());
    assert_eq!(
        spec(Family::Rotation, 0, 0.0).build().unwrap().eval(0.0),
        0.3
    );
}
