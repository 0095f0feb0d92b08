//! Exact bookkeeping for bubble-tree compactified instanton moduli spaces on
//! closed 4-manifolds and on cyclic quotients `M / Z_alpha` with isolated
//! lens-space singularities.
//!
//! Nothing in this crate solves a PDE. Every quantity is combinatorial or
//! algebraic: expected dimensions from index formulas, the cotangent
//! character sums those formulas contain (evaluated exactly in cyclotomic
//! fields), bubble trees and their contractions, existence criteria for
//! `Z_p`-invariant instantons on `S^4`, and the explicit matrix model of
//! stable bundles on `CP^2` with `c_1 = -1`, `c_2 = 2`.
//!
//! Module map:
//!
//! * [`cyclotomic`]: exact arithmetic in `Q(zeta_n)` and the cotangent sums.
//! * [`index`]: expected dimensions of (invariant) ASD moduli spaces.
//! * [`bubble_tree`]: weighted rooted trees, canonical forms, enumeration,
//!   contraction and the induced partial order.
//! * [`equivariant_s4`]: congruence and chain criteria for invariant
//!   instantons on `S^4`.
//! * [`signature`]: orbifold signatures, equivariant bundle types and
//!   invariant gluing groups.
//! * [`strata`]: orbifold bubble trees, stratum dimensions and the gluing
//!   dimension checks.
//! * [`cp2`]: the `2 x 3` matrix model on `CP^2`, jump lines and their
//!   second-kind refinement.

pub mod bubble_tree;
pub mod cp2;
pub mod cyclotomic;
pub mod equivariant_s4;
mod error;
pub mod index;
mod rational;
pub mod signature;
pub mod strata;

pub use error::{Error, Result};
pub use rational::Rational;

/// Structure group of the bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Group {
    #[serde(rename = "SU2")]
    Su2,
    #[serde(rename = "SO3")]
    So3,
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Group::Su2 => f.write_str("SU2"),
            Group::So3 => f.write_str("SO3"),
        }
    }
}
