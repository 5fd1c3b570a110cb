use splab::io::{
    fmt_f64, parse_f64, read_coeffs, read_op, read_op_json, write_coeffs, write_op, write_op_json,
};
use splab_core::fourier::{Basis, CoeffVec};
use splab_core::op::TruncOp;
use splab_core::{Complex64, Window};

const AWKWARD: [f64; 10] = [
    0.1,
    -0.0,
    1.0 / 3.0,
    f64::MIN_POSITIVE,
    5e-324,
    f64::MAX,
    -std::f64::consts::E,
    1e300,
    std::f64::consts::PI,
    0.30000000000000004,
];

fn bits(z: Complex64) -> (u64, u64) {
    (z.re.to_bits(), z.im.to_bits())
}

#[test]
fn floats_roundtrip_bit_exact() {
    for x in AWKWARD {
        assert_eq!(
            parse_f64(&fmt_f64(x)).unwrap().to_bits(),
            x.to_bits(),
            "{x}"
        );
    }
    assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
}

#[test]
fn coeff_csv_roundtrip() {
    let w = Window::new(5).unwrap();
    let v = CoeffVec::from_fn(w, Basis::Tilde, |n| {
        let k = (n + 5) as usize;
        Complex64::new(AWKWARD[k % 10], AWKWARD[(k + 3) % 10])
    });
    let mut buf = Vec::new();
    write_coeffs(&v, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("n,re,im\n-5,"));
    let back = read_coeffs(buf.as_slice(), Basis::Tilde).unwrap();
    assert_eq!(back.window(), w);
    for (n, z) in v.iter() {
        assert_eq!(bits(back.get(n)), bits(z));
    }
}

#[test]
fn op_csv_and_json_roundtrip() {
    let w = Window::new(3).unwrap();
    let a = TruncOp::from_fn(w, |m, n| {
        let k = (3 * (m + 3) + n + 3) as usize;
        Complex64::new(AWKWARD[k % 10], -AWKWARD[(k + 7) % 10])
    });
    let mut buf = Vec::new();
    write_op(&a, &mut buf).unwrap();
    let back = read_op(buf.as_slice()).unwrap();
    assert!(a
        .entries()
        .zip(back.entries())
        .all(|(x, y)| x.0 == y.0 && x.1 == y.1 && bits(x.2) == bits(y.2)));
    let mut buf = Vec::new();
    write_op_json(&a, &mut buf).unwrap();
    let back = read_op_json(buf.as_slice()).unwrap();
    assert!(a
        .entries()
        .zip(back.entries())
        .all(|(x, y)| bits(x.2) == bits(y.2)));
}

#[test]
fn malformed_dumps_rejected() {
    assert!(read_coeffs("m,re,im\n-1,0,0\n1,0,0\n".as_bytes(), Basis::Hat).is_err());
    assert!(read_coeffs("n,re,im\n1,0,0\n-1,0,0\n".as_bytes(), Basis::Hat).is_err());
    assert!(read_coeffs("n,re,im\n-1,0,x\n1,0,0\n".as_bytes(), Basis::Hat).is_err());
    assert!(read_coeffs("n,re,im\n".as_bytes(), Basis::Hat).is_err());
    assert!(read_op("m,n,re,im\n-1,-1,1,0\n-1,1,0,0\n1,-1,0,0\n".as_bytes()).is_err());
    assert!(read_op("m,n,re,im\n-1,1,1,0\n-1,-1,0,0\n1,-1,0,0\n1,1,1,0\n".as_bytes()).is_err());
}

#[test]
fn minimal_op_dump() {
    let a = read_op("m,n,re,im\n-1,-1,1,0\n-1,1,0,0\n1,-1,0,0\n1,1,1,0\n".as_bytes()).unwrap();
    assert_eq!(a, TruncOp::identity(Window::new(1).unwrap()));
}
