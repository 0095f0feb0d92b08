//! Expected dimensions of ASD moduli spaces from the index theorem.
//!
//! On a closed manifold:
//!
//! ```text
//! dim M = 8 c_2 - 3 (1 + b+)        (SU(2))
//! dim M = -2 p_1 - 3 (1 + b+)       (SO(3))
//! ```
//!
//! On a quotient `X = M / Z_alpha` the invariant moduli space has
//!
//! ```text
//! 8 c_2 / alpha - 3 (1 + b+) + n' + sum_i C(a_i, b_i, m_i)
//! ```
//!
//! with `n'` the number of nontrivial isotropy weights and `C` the cotangent
//! sum from [`crate::cyclotomic::cot_sum`]. On `S^4 / Z_p` with both poles
//! fixed the two correction terms enter with opposite signs.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::cot_sum;
use crate::equivariant_s4::{exists_invariant, S4Action, S4Triple};
use crate::signature::{validate_bundle, BundleType, OrbifoldSignature};
use crate::{Error, Group, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ManifoldData {
    pub b2_plus: u64,
    pub group: Group,
    /// `c_2` for SU(2), `p_1` for SO(3).
    pub charge: i64,
}

/// `8 c_2` or `-2 p_1`, the charge part of the index.
pub fn charge_term(group: Group, charge: i64) -> i64 {
    match group {
        Group::Su2 => 8 * charge,
        Group::So3 => -2 * charge,
    }
}

pub fn dim_manifold_moduli(data: &ManifoldData) -> i64 {
    charge_term(data.group, data.charge) - 3 * (1 + data.b2_plus as i64)
}

/// The exact (possibly non-integral) index of the invariant deformation
/// complex.
pub fn invariant_index(sig: &OrbifoldSignature, bundle: &BundleType) -> Result<Rational> {
    validate_bundle(sig, bundle)?;
    let mut total = Rational::new(charge_term(sig.group, bundle.charge), sig.alpha as i64)
        - Rational::from(3 * (1 + sig.b2_plus as i64))
        + Rational::from(bundle.nontrivial_weight_count(sig) as i64);
    for (s, &m) in sig.singularities.iter().zip(&bundle.weights) {
        total = total + cot_sum(s.a as i64, s.b, m as i64)?;
    }
    Ok(total)
}

pub fn dim_invariant_moduli(sig: &OrbifoldSignature, bundle: &BundleType) -> Result<i64> {
    require_integer(invariant_index(sig, bundle)?, "invariant index")
}

pub(crate) fn require_integer(value: Rational, what: &str) -> Result<i64> {
    value.to_i64().filter(|_| value.is_integer()).ok_or_else(|| {
        Error::NotRealizable(format!("{what} = {value} is not an integer"))
    })
}

/// `n`: how many of `m, m'` (as a multiset) are nonzero mod `p`.
pub fn s4_weight_count(action: &S4Action, triple: &S4Triple) -> u64 {
    [triple.m, triple.m_prime].iter().filter(|&&x| x % action.p != 0).count() as u64
}

/// The exact invariant index on `S^4 / Z_p`, with no existence check.
pub fn s4_index(action: &S4Action, triple: &S4Triple) -> Result<Rational> {
    let p = action.p;
    Ok(Rational::new(8 * triple.k as i64, p as i64) - Rational::from(3)
        + Rational::from(s4_weight_count(action, triple) as i64)
        + cot_sum(p as i64, action.q, triple.m_prime as i64)?
        - cot_sum(p as i64, action.q, triple.m as i64)?)
}

/// Dimension of the invariant charge `k` moduli space on `S^4`.
///
/// Fails with `PreconditionFailed` when no invariant instanton exists.
pub fn dim_s4_invariant(action: &S4Action, triple: &S4Triple) -> Result<i64> {
    if !exists_invariant(action, triple)? {
        return Err(Error::PreconditionFailed(format!(
            "no invariant instanton for (k, m, m') = ({}, {}, {}) with p = {}, q = {}",
            triple.k, triple.m, triple.m_prime, action.p, action.q
        )));
    }
    require_integer(s4_index(action, triple)?, "invariant S4 index")
}

/// Only dilations act on invariant connections, so balancing removes one
/// dimension.
pub fn dim_s4_invariant_balanced(action: &S4Action, triple: &S4Triple) -> Result<i64> {
    Ok(dim_s4_invariant(action, triple)? - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Singularity;

    #[test]
    fn manifold_examples() {
        let d = |b2_plus, group, charge| dim_manifold_moduli(&ManifoldData { b2_plus, group, charge });
        assert_eq!(d(0, Group::Su2, 1), 5);
        assert_eq!(d(1, Group::So3, -3), 0);
        assert_eq!(d(1, Group::So3, -7), 8);
    }

    #[test]
    fn trivial_quotient_matches_manifold() {
        for group in [Group::Su2, Group::So3] {
            for b in 0..4 {
                for c in -5..5 {
                    let sig = OrbifoldSignature::manifold(b, group);
                    let got = dim_invariant_moduli(&sig, &BundleType::new(c, vec![])).unwrap();
                    let want = dim_manifold_moduli(&ManifoldData { b2_plus: b, group, charge: c });
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn non_integral_is_not_realizable() {
        let sig = OrbifoldSignature {
            alpha: 3,
            b2_plus: 0,
            group: Group::Su2,
            singularities: vec![Singularity { a: 3, b: 1 }],
        };
        // 8/3 - 3 + 1 + 1/3 = 1
        assert_eq!(dim_invariant_moduli(&sig, &BundleType::new(1, vec![1])).unwrap(), 1);
        // 8/3 - 3 + 0 + 0 is not an integer
        assert!(matches!(
            dim_invariant_moduli(&sig, &BundleType::new(1, vec![0])),
            Err(Error::NotRealizable(_))
        ));
    }

    #[test]
    fn s4_examples() {
        let action = S4Action::new(7, 3).unwrap();
        let t = S4Triple::instanton(&action);
        assert_eq!(dim_s4_invariant(&action, &t).unwrap(), 1);
        assert_eq!(dim_s4_invariant_balanced(&action, &t).unwrap(), 0);

        let trivial = S4Action::new(1, 1).unwrap();
        for k in 1..=10 {
            let t = S4Triple::new(&trivial, k, 0, 0);
            assert_eq!(dim_s4_invariant(&trivial, &t).unwrap(), 8 * k as i64 - 3);
        }

        let two = S4Action::new(2, 1).unwrap();
        let t = S4Triple::new(&two, 1, 0, 2);
        assert_eq!(dim_s4_invariant(&two, &t).unwrap(), 1);
        assert_eq!(dim_s4_invariant_balanced(&two, &t).unwrap(), 0);
    }

    #[test]
    fn missing_instanton_is_precondition_failure() {
        let action = S4Action::new(3, 1).unwrap();
        let t = S4Triple::new(&action, 1, 0, 1);
        assert!(matches!(dim_s4_invariant(&action, &t), Err(Error::PreconditionFailed(_))));
    }
}
