//! Orbifold signatures `X = M / Z_alpha`, equivariant bundle types and the
//! groups of invariant gluing parameters.
//!
//! A signature lists the isolated singular points of `X`; each has a cone
//! neighbourhood `cL(a, b)` over a lens space with `a | alpha` and
//! `gcd(a, b) = 1`. A bundle type fixes the charge (`c_2` for `SU(2)`, `p_1`
//! for `SO(3)`) and one isotropy weight `m_i mod a_i` per singular point.
//!
//! ## SU(2) weight convention
//!
//! For `SU(2)` the group acting on the bundle is `Z_{2 alpha}`, so isotropy
//! weights really live modulo `2 a_i`, and since `-1` acts as `+1` or `-1`
//! on every fibre, all lifted weights share one parity. Weights are stored
//! modulo `a_i` (that is all the index formula sees); a tuple is admissible
//! when some choice of lifts `m_i` or `m_i + a_i` has a common parity.
//! Only singular points with even `a_i` constrain the choice.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Group, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Singularity {
    /// Order of the local isotropy group.
    pub a: u64,
    /// Lens space parameter, coprime to `a`.
    pub b: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbifoldSignature {
    pub alpha: u64,
    /// `b_2^+` of the quotient; always user supplied.
    pub b2_plus: u64,
    pub group: Group,
    #[serde(default)]
    pub singularities: Vec<Singularity>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureDefect {
    ZeroAlpha,
    ZeroOrder { index: usize },
    OrderDoesNotDivideAlpha { index: usize, a: u64, alpha: u64 },
    NotCoprime { index: usize, a: u64, b: i64 },
}

impl fmt::Display for SignatureDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureDefect::ZeroAlpha => f.write_str("alpha must be positive"),
            SignatureDefect::ZeroOrder { index } => {
                write!(f, "singularity {index}: order a must be positive")
            }
            SignatureDefect::OrderDoesNotDivideAlpha { index, a, alpha } => {
                write!(f, "singularity {index}: a = {a} does not divide alpha = {alpha}")
            }
            SignatureDefect::NotCoprime { index, a, b } => {
                write!(f, "singularity {index}: gcd(a, b) != 1 for a = {a}, b = {b}")
            }
        }
    }
}

impl OrbifoldSignature {
    /// A closed manifold: trivial group, no singular points.
    pub fn manifold(b2_plus: u64, group: Group) -> Self {
        OrbifoldSignature { alpha: 1, b2_plus, group, singularities: Vec::new() }
    }

    /// Checks divisibility `a_i | alpha` and coprimality `gcd(a_i, b_i) = 1`.
    pub fn validate(&self) -> std::result::Result<(), Vec<SignatureDefect>> {
        let mut defects = Vec::new();
        if self.alpha == 0 {
            defects.push(SignatureDefect::ZeroAlpha);
        }
        for (index, s) in self.singularities.iter().enumerate() {
            if s.a == 0 {
                defects.push(SignatureDefect::ZeroOrder { index });
                continue;
            }
            if self.alpha != 0 && self.alpha % s.a != 0 {
                defects.push(SignatureDefect::OrderDoesNotDivideAlpha {
                    index,
                    a: s.a,
                    alpha: self.alpha,
                });
            }
            if (s.a as i64).gcd(&s.b) != 1 {
                defects.push(SignatureDefect::NotCoprime { index, a: s.a, b: s.b });
            }
        }
        if defects.is_empty() {
            Ok(())
        } else {
            Err(defects)
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        self.validate().map_err(|defects| {
            Error::Validation(
                defects.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
            )
        })
    }
}

/// A bundle of type `O`: charge plus isotropy weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleType {
    /// `c_2` for `SU(2)`, `p_1` for `SO(3)`.
    pub charge: i64,
    /// `SO(3)` only: whether `w_2` is held fixed. The class itself is opaque.
    #[serde(default)]
    pub w2_fixed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w2_label: Option<String>,
    /// `m_i mod a_i`, one per singular point.
    #[serde(default)]
    pub weights: Vec<u64>,
}

impl BundleType {
    pub fn new(charge: i64, weights: Vec<u64>) -> Self {
        BundleType { charge, w2_fixed: false, w2_label: None, weights }
    }

    /// `n'`: the number of weights that are nonzero modulo their `a_i`.
    pub fn nontrivial_weight_count(&self, sig: &OrbifoldSignature) -> usize {
        self.weights
            .iter()
            .zip(&sig.singularities)
            .filter(|(m, s)| *m % s.a != 0)
            .count()
    }
}

/// Validates a bundle type against its signature: length, residue ranges and
/// the SU(2) parity rule.
pub fn validate_bundle(sig: &OrbifoldSignature, bundle: &BundleType) -> Result<()> {
    sig.require_valid()?;
    if bundle.weights.len() != sig.singularities.len() {
        return Err(Error::validation(format!(
            "bundle has {} weights but the signature has {} singular points",
            bundle.weights.len(),
            sig.singularities.len()
        )));
    }
    for (i, (m, s)) in bundle.weights.iter().zip(&sig.singularities).enumerate() {
        if *m >= s.a {
            return Err(Error::validation(format!(
                "weight {i}: m = {m} is not a residue modulo a = {}",
                s.a
            )));
        }
    }
    if sig.group == Group::Su2 && su2_lifts(sig, &bundle.weights).is_none() {
        return Err(Error::validation(
            "SU2 weights admit no lift modulo 2a_i with a common parity",
        ));
    }
    if sig.group == Group::Su2 && bundle.w2_fixed {
        return Err(Error::validation("w2 applies to SO3 bundles only"));
    }
    Ok(())
}

/// Lifts of SU(2) weights to residues modulo `2 a_i` sharing one parity.
///
/// Returns the parity and the lifts, preferring even lifts when both work.
pub fn su2_lifts(sig: &OrbifoldSignature, weights: &[u64]) -> Option<(u64, Vec<u64>)> {
    [0u64, 1].into_iter().find_map(|parity| {
        weights
            .iter()
            .zip(&sig.singularities)
            .map(|(&m, s)| [m, m + s.a].into_iter().find(|l| l % 2 == parity))
            .collect::<Option<Vec<_>>>()
            .map(|lifts| (parity, lifts))
    })
}

/// All bundle types with the given charge: the product of `Z_{a_i}`, with
/// the parity filter applied for SU(2). Tuples come out in lexicographic
/// order.
pub fn enumerate_bundle_types(sig: &OrbifoldSignature, charge: i64) -> Result<Vec<BundleType>> {
    sig.require_valid()?;
    let mut out = Vec::new();
    let mut tuple = vec![0u64; sig.singularities.len()];
    loop {
        if sig.group == Group::So3 || su2_lifts(sig, &tuple).is_some() {
            out.push(BundleType::new(charge, tuple.clone()));
        }
        // odometer increment
        let mut i = tuple.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < sig.singularities[i].a {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// The group `Gl^Gamma` of invariant gluing parameters at a point with
/// isotropy `Z_a` acting with weight `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GluingGroup {
    /// Isotropy image is central: all of `G`.
    FullGroup,
    /// Isotropy image lies in a circle but not in the centre.
    CircleGroup,
    /// Isotropy image lies in no circle. Cyclic isotropy never gets here.
    CenterOnly,
}

impl GluingGroup {
    pub fn dimension(self) -> u32 {
        match self {
            GluingGroup::FullGroup => 3,
            GluingGroup::CircleGroup => 1,
            GluingGroup::CenterOnly => 0,
        }
    }

    /// Real dimension of the invariant gluing data (parameter plus scale):
    /// `R^4 / Z_2` or `R^2 / Z_2`.
    pub fn fibre_dimension(self) -> u32 {
        self.dimension() + 1
    }
}

/// Classifies `Gl^Gamma` for cyclic isotropy of order `a` and weight `m`.
///
/// For SO(3) the generator acts by rotation through `2 pi m / a`, central
/// exactly when `m = 0 mod a`. For SU(2) the double-cover generator acts by
/// `exp(pi i m / a)` with `m` taken mod `2a`; that lies in `{+1, -1}`
/// exactly when `m = 0 mod a`, so both groups reduce to the same test on
/// the residue mod `a`.
pub fn gluing_parameter_group(_group: Group, a: u64, m: i64) -> GluingGroup {
    if a <= 1 || m.rem_euclid(a as i64) == 0 {
        GluingGroup::FullGroup
    } else {
        GluingGroup::CircleGroup
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(alpha: u64, group: Group, sing: &[(u64, i64)]) -> OrbifoldSignature {
        OrbifoldSignature {
            alpha,
            b2_plus: 1,
            group,
            singularities: sing.iter().map(|&(a, b)| Singularity { a, b }).collect(),
        }
    }

    #[test]
    fn validate_signature_examples() {
        assert!(sig(6, Group::So3, &[(2, 1), (3, 1)]).is_valid());
        let bad = sig(6, Group::So3, &[(4, 1)]);
        assert_eq!(
            bad.validate().unwrap_err(),
            vec![SignatureDefect::OrderDoesNotDivideAlpha { index: 0, a: 4, alpha: 6 }]
        );
        assert!(sig(1, Group::Su2, &[]).is_valid());
        assert!(matches!(
            sig(6, Group::Su2, &[(3, 3)]).validate().unwrap_err()[0],
            SignatureDefect::NotCoprime { .. }
        ));
        assert!(!sig(0, Group::Su2, &[]).is_valid());
    }

    #[test]
    fn bundle_type_counts() {
        let s = sig(6, Group::So3, &[(2, 1), (3, 1)]);
        assert_eq!(enumerate_bundle_types(&s, -3).unwrap().len(), 6);
        assert_eq!(enumerate_bundle_types(&sig(1, Group::Su2, &[]), 2).unwrap().len(), 1);
        assert_eq!(enumerate_bundle_types(&sig(1, Group::So3, &[]), -3).unwrap().len(), 1);
        // a single weight always admits a lift of either parity
        assert_eq!(enumerate_bundle_types(&sig(2, Group::Su2, &[(2, 1)]), 1).unwrap().len(), 2);
        // two even orders: residues must agree in parity
        let two = sig(4, Group::Su2, &[(2, 1), (4, 1)]);
        let types = enumerate_bundle_types(&two, 1).unwrap();
        assert_eq!(types.len(), 4);
        assert!(types.iter().all(|t| t.weights[0] % 2 == t.weights[1] % 2));
    }

    #[test]
    fn bundle_validation_errors() {
        let s = sig(6, Group::Su2, &[(2, 1), (3, 1)]);
        assert!(validate_bundle(&s, &BundleType::new(1, vec![1])).is_err());
        assert!(validate_bundle(&s, &BundleType::new(1, vec![2, 0])).is_err());
        assert!(validate_bundle(&s, &BundleType::new(1, vec![1, 2])).is_ok());
        let t = sig(4, Group::Su2, &[(2, 1), (4, 1)]);
        assert!(validate_bundle(&t, &BundleType::new(1, vec![1, 2])).is_err());
        assert_eq!(su2_lifts(&t, &[1, 3]), Some((1, vec![1, 3])));
    }

    #[test]
    fn gluing_groups() {
        assert_eq!(gluing_parameter_group(Group::So3, 3, 0), GluingGroup::FullGroup);
        assert_eq!(gluing_parameter_group(Group::So3, 3, 0).dimension(), 3);
        assert_eq!(gluing_parameter_group(Group::So3, 3, 1), GluingGroup::CircleGroup);
        assert_eq!(gluing_parameter_group(Group::So3, 3, 1).dimension(), 1);
        assert_eq!(gluing_parameter_group(Group::Su2, 1, 5), GluingGroup::FullGroup);
        for a in 1..10u64 {
            for m in 0..a as i64 {
                assert_eq!(
                    gluing_parameter_group(Group::Su2, a, m),
                    gluing_parameter_group(Group::Su2, a, a as i64 - m)
                );
            }
        }
    }
}
