use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} basis, got {found}")]
    BasisMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("window mismatch: N={left} vs N={right}")]
    WindowMismatch { left: usize, right: usize },
    #[error("index {index} outside window N={n}")]
    OutOfWindow { index: i32, n: usize },
    #[error("invalid quadrant {0:?}, expected one of a, b, c, d")]
    InvalidQuadrant(char),
    #[error("invalid label {kind} ({a}, {b})")]
    InvalidLabel { kind: &'static str, a: i32, b: i32 },
    #[error("invalid diffeomorphism: {0}")]
    InvalidDiffeo(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("numerical failure: {0}")]
    Numerical(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
