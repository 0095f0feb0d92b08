//! Stable rank two bundles on `CP^2` with `c_1 = -1`, `c_2 = 2`.
//!
//! Such a bundle is the orbit of a `2 x 3` complex matrix `alpha` of rank 2
//! under the symmetry group `G`; the orbit is determined by the symmetric
//! matrix `alpha^T alpha` up to scale. From `alpha` one reads off
//!
//! * the jump line `z` with `alpha z = 0`, the cross product of the rows;
//! * the conic of jump lines of the second kind, which splits as two lines
//!   `z' = r_1 + i r_2` and `z'' = r_1 - i r_2` meeting at `z`.
//!
//! Conversely an unordered pair `{u, v}` of distinct points gives back the
//! matrix with rows `(u + v) / 2` and `(u - v) / 2i`.
//!
//! Everything is generic over [`Scalar`]. [`Gaussian`] (complex numbers
//! with rational parts) is exact; `Complex64` compares with absolute
//! tolerance [`FLOAT_EPSILON`] scaled by the magnitudes involved and exists
//! for randomised sweeps only.
//!
//! Projective points are normalised by dividing by the first coordinate that
//! is nonzero (in float mode: larger than the tolerance times the largest
//! coordinate).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::index::{dim_manifold_moduli, ManifoldData};
use crate::{Error, Group, Rational, Result};

pub const FLOAT_EPSILON: f64 = 1e-9;

pub type Gaussian = Complex<BigRational>;

pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_parts(re: i64, im: i64) -> Self;
    /// Whether the value vanishes relative to `scale`.
    fn negligible(&self, scale: f64) -> bool;
    fn magnitude(&self) -> f64;

    fn zero() -> Self {
        Self::from_parts(0, 0)
    }
    fn one() -> Self {
        Self::from_parts(1, 0)
    }
    fn i() -> Self {
        Self::from_parts(0, 1)
    }
}

impl Scalar for Gaussian {
    fn from_parts(re: i64, im: i64) -> Self {
        Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn magnitude(&self) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::MAX);
        f(&self.re).hypot(f(&self.im))
    }
}

impl Scalar for Complex64 {
    fn from_parts(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }

    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_EPSILON * scale.max(1.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Exact Gaussian rational from two rational parts.
pub fn gaussian(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re.inner().clone(), im.inner().clone())
}

fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn scale_of<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

fn all_negligible<S: Scalar>(v: &[S], scale: f64) -> bool {
    v.iter().all(|x| x.negligible(scale))
}

/// A point of `CP^2` in normalised homogeneous coordinates.
#[derive(Debug, Clone)]
pub struct ProjectivePoint<S>(pub [S; 3]);

impl<S: Scalar> ProjectivePoint<S> {
    /// Normalises `v`; fails on the zero vector.
    pub fn new(v: [S; 3]) -> Result<Self> {
        let scale = scale_of(&v);
        let pivot = v
            .iter()
            .position(|x| !x.negligible(scale))
            .ok_or_else(|| Error::validation("zero vector is not a projective point"))?;
        let p = v[pivot].clone();
        let mut out = v.map(|x| x / p.clone());
        out[pivot] = S::one();
        Ok(ProjectivePoint(out))
    }

    pub fn from_integers(v: [(i64, i64); 3]) -> Result<Self> {
        Self::new(v.map(|(re, im)| S::from_parts(re, im)))
    }

    pub fn coords(&self) -> &[S; 3] {
        &self.0
    }

    /// Projective equality: all `2 x 2` minors of the two vectors vanish.
    pub fn same_as(&self, other: &Self) -> bool {
        let minors = cross(&self.0, &other.0);
        all_negligible(&minors, scale_of(&self.0) * scale_of(&other.0))
    }
}

/// Unordered pair of distinct points, kept in the order given.
#[derive(Debug, Clone)]
pub struct LinePair<S> {
    pub u: ProjectivePoint<S>,
    pub v: ProjectivePoint<S>,
}

impl<S: Scalar> LinePair<S> {
    pub fn new(u: ProjectivePoint<S>, v: ProjectivePoint<S>) -> Result<Self> {
        if u.same_as(&v) {
            return Err(Error::DegeneratePair);
        }
        Ok(LinePair { u, v })
    }

    pub fn same_as(&self, other: &Self) -> bool {
        (self.u.same_as(&other.u) && self.v.same_as(&other.v))
            || (self.u.same_as(&other.v) && self.v.same_as(&other.u))
    }

    /// The common point `u x v` of the two lines `L_u`, `L_v`.
    pub fn intersection(&self) -> ProjectivePoint<S> {
        ProjectivePoint::new(cross(&self.u.0, &self.v.0)).expect("distinct points")
    }
}

/// A rank two `2 x 3` matrix.
#[derive(Debug, Clone)]
pub struct AlphaMatrix<S> {
    pub rows: [[S; 3]; 2],
}

impl<S: Scalar> AlphaMatrix<S> {
    pub fn new(rows: [[S; 3]; 2]) -> Result<Self> {
        let m = AlphaMatrix { rows };
        match m.rank() {
            2 => Ok(m),
            r => Err(Error::InvalidAlpha(format!("rank {r}, expected 2"))),
        }
    }

    pub fn from_integers(rows: [[(i64, i64); 3]; 2]) -> Result<Self> {
        Self::new(rows.map(|r| r.map(|(re, im)| S::from_parts(re, im))))
    }

    pub fn rank(&self) -> usize {
        let scale = scale_of(&self.rows[0]).max(scale_of(&self.rows[1]));
        if !all_negligible(&cross(&self.rows[0], &self.rows[1]), scale * scale) {
            2
        } else if all_negligible(&self.rows[0], scale) && all_negligible(&self.rows[1], scale) {
            0
        } else {
            1
        }
    }

    /// `alpha z` for a column vector `z`.
    pub fn apply(&self, z: &[S; 3]) -> [S; 2] {
        self.rows.clone().map(|r| {
            r.iter().zip(z).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
    }

    /// `alpha^T alpha`, flattened row-major. Its class up to scale is the
    /// orbit invariant.
    pub fn symmetric_invariant(&self) -> [S; 9] {
        std::array::from_fn(|k| {
            let (i, j) = (k / 3, k % 3);
            self.rows.iter().fold(S::zero(), |acc, r| acc + r[i].clone() * r[j].clone())
        })
    }

    /// Same orbit: the symmetric invariants are proportional.
    pub fn same_orbit(&self, other: &Self) -> bool {
        let a = self.symmetric_invariant();
        let b = other.symmetric_invariant();
        let scale = scale_of(&a) * scale_of(&b);
        (0..9).all(|i| {
            (i + 1..9).all(|j| {
                (a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone()).negligible(scale)
            })
        })
    }
}

pub fn jump_line<S: Scalar>(alpha: &AlphaMatrix<S>) -> Result<ProjectivePoint<S>> {
    ProjectivePoint::new(cross(&alpha.rows[0], &alpha.rows[1]))
        .map_err(|_| Error::InvalidAlpha("rank below 2".into()))
}

/// The two lines making up the conic of jump lines of the second kind.
pub fn second_kind_pair<S: Scalar>(alpha: &AlphaMatrix<S>) -> Result<LinePair<S>> {
    if alpha.rank() < 2 {
        return Err(Error::InvalidAlpha("rank below 2".into()));
    }
    let [r1, r2] = &alpha.rows;
    let plus: [S; 3] = std::array::from_fn(|k| r1[k].clone() + S::i() * r2[k].clone());
    let minus: [S; 3] = std::array::from_fn(|k| r1[k].clone() - S::i() * r2[k].clone());
    LinePair::new(ProjectivePoint::new(plus)?, ProjectivePoint::new(minus)?)
}

pub fn phi<S: Scalar>(pair: &LinePair<S>) -> Result<AlphaMatrix<S>> {
    if pair.u.same_as(&pair.v) {
        return Err(Error::DegeneratePair);
    }
    let two = S::from_parts(2, 0);
    let two_i = S::from_parts(0, 2);
    let (u, v) = (&pair.u.0, &pair.v.0);
    let r1: [S; 3] = std::array::from_fn(|k| (u[k].clone() + v[k].clone()) / two.clone());
    let r2: [S; 3] = std::array::from_fn(|k| (u[k].clone() - v[k].clone()) / two_i.clone());
    AlphaMatrix::new([r1, r2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZaFixed {
    FixedPointwise,
    FixedSwapped,
    NotFixed,
}

/// How `g: [z0, z1, z2] -> [zeta_a z0, z1, z2]` acts on a pair.
///
/// `g` fixes a point exactly when `z0 = 0` or `z1 = z2 = 0`. It can swap
/// two points only if `g^2` fixes them, which for non-fixed points forces
/// `a = 2`; then `g` is `z0 -> -z0` and the test is exact.
pub fn za_fixed<S: Scalar>(pair: &LinePair<S>, a: u64) -> Result<ZaFixed> {
    if a < 2 {
        return Err(Error::validation("a must be at least 2"));
    }
    let fixed = |p: &ProjectivePoint<S>| {
        let s = scale_of(&p.0);
        p.0[0].negligible(s) || (p.0[1].negligible(s) && p.0[2].negligible(s))
    };
    if fixed(&pair.u) && fixed(&pair.v) {
        return Ok(ZaFixed::FixedPointwise);
    }
    if a == 2 {
        let [u0, u1, u2] = pair.u.0.clone();
        let gu = ProjectivePoint::new([-u0, u1, u2])?;
        if gu.same_as(&pair.v) {
            return Ok(ZaFixed::FixedSwapped);
        }
    }
    Ok(ZaFixed::NotFixed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cp2DimCheck {
    pub p1: i64,
    pub dimension: i64,
    /// `(base, fibre)` real dimensions where the moduli space fibres over
    /// `CP^2` with fibre `CP^2 - CP^1`.
    pub fibration: Option<(i64, i64)>,
    pub expected: i64,
    pub ok: bool,
}

/// Dimension bookkeeping on `CP^2` (`b+ = 1`, SO(3)) for `p_1 = -3, -7, -11`.
pub fn dim_checks() -> Vec<Cp2DimCheck> {
    [(-3, 0, None), (-7, 8, Some((4, 4))), (-11, 16, None)]
        .into_iter()
        .map(|(p1, expected, fibration)| {
            let dimension =
                dim_manifold_moduli(&ManifoldData { b2_plus: 1, group: Group::So3, charge: p1 });
            let split_ok = fibration.is_none_or(|(b, f): (i64, i64)| b + f == dimension);
            Cp2DimCheck { p1, dimension, fibration, expected, ok: dimension == expected && split_ok }
        })
        .collect()
}

/// Rational parts of an exact scalar.
pub fn parts(z: &Gaussian) -> (Rational, Rational) {
    (Rational::from(z.re.clone()), Rational::from(z.im.clone()))
}

/// Integer Gaussian scalar.
pub fn gaussian_int(re: i64, im: i64) -> Gaussian {
    Complex::new(BigRational::from_integer(BigInt::from(re)), BigRational::from_integer(BigInt::from(im)))
}
