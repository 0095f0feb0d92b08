//! Output documents. Every document carries `schema_version`; rationals are
//! `"p/q"` strings and residues carry their modulus.

use serde::Serialize;
use strata_core::cp2::{parts, Gaussian, ProjectivePoint};
use strata_core::{Error, Rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: u32,
    pub command: &'static str,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Serialize)]
pub struct ErrorDocument {
    pub schema_version: u32,
    pub command: &'static str,
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

impl ErrorBody {
    pub fn from_core(e: &Error) -> Self {
        let kind = match e {
            Error::Validation(_) => "validation",
            Error::NotRealizable(_) => "not_realizable",
            Error::PreconditionFailed(_) => "precondition_failed",
            Error::ResourceLimit(_) => "resource_limit",
            Error::InvalidAlpha(_) => "invalid_alpha",
            Error::DegeneratePair => "degenerate_pair",
        };
        ErrorBody { kind, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Residue {
    pub residue: u64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Self {
        Residue { residue: value.rem_euclid(modulus.max(1) as i64) as u64, modulus }
    }
}

#[derive(Serialize)]
pub struct Complex {
    pub re: Rational,
    pub im: Rational,
}

impl From<&Gaussian> for Complex {
    fn from(z: &Gaussian) -> Self {
        let (re, im) = parts(z);
        Complex { re, im }
    }
}

pub fn point(p: &ProjectivePoint<Gaussian>) -> Vec<Complex> {
    p.coords().iter().map(Complex::from).collect()
}
