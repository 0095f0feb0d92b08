mod common;

use common::gcd;
use proptest::prelude::*;
use strata_core::index::{dim_invariant_moduli, dim_manifold_moduli, invariant_index, ManifoldData};
use strata_core::signature::{
    enumerate_bundle_types, validate_bundle, BundleType, OrbifoldSignature, SignatureDefect,
    Singularity,
};
use strata_core::{Error, Group};

fn signature(alpha: u64, b2_plus: u64, group: Group, sing: &[(u64, i64)]) -> OrbifoldSignature {
    OrbifoldSignature {
        alpha,
        b2_plus,
        group,
        singularities: sing.iter().map(|&(a, b)| Singularity { a, b }).collect(),
    }
}

/// Every signature with `alpha <= max_alpha` and at most two singular points.
fn signature_grid(max_alpha: u64, group: Group) -> Vec<OrbifoldSignature> {
    let mut out = Vec::new();
    for alpha in 1..=max_alpha {
        let points: Vec<(u64, i64)> = (2..=alpha)
            .filter(|a| alpha % a == 0)
            .flat_map(|a| (1..a as i64).filter(move |&b| gcd(a as i64, b) == 1).map(move |b| (a, b)))
            .collect();
        out.push(signature(alpha, 0, group, &[]));
        for (i, &x) in points.iter().enumerate() {
            out.push(signature(alpha, 0, group, &[x]));
            for &y in &points[i..] {
                out.push(signature(alpha, 0, group, &[x, y]));
            }
        }
    }
    out
}

#[test]
fn trivial_quotient_is_the_manifold_formula() {
    for group in [Group::Su2, Group::So3] {
        for b2_plus in 0..=5 {
            for charge in -10..=10 {
                let sig = OrbifoldSignature::manifold(b2_plus, group);
                let got = dim_invariant_moduli(&sig, &BundleType::new(charge, vec![])).unwrap();
                let explicit = match group {
                    Group::Su2 => 8 * charge - 3 * (1 + b2_plus as i64),
                    Group::So3 => -2 * charge - 3 * (1 + b2_plus as i64),
                };
                assert_eq!(got, explicit);
                assert_eq!(got, dim_manifold_moduli(&ManifoldData { b2_plus, group, charge }));
            }
        }
    }
}

#[test]
fn bundle_types_are_integral_or_rejected() {
    let mut integral = 0;
    let mut rejected = 0;
    for group in [Group::Su2, Group::So3] {
        for sig in signature_grid(12, group) {
            for charge in -2..=2 {
                for bundle in enumerate_bundle_types(&sig, charge).unwrap() {
                    let exact = invariant_index(&sig, &bundle).unwrap();
                    match dim_invariant_moduli(&sig, &bundle) {
                        Ok(d) => {
                            assert!(exact.is_integer());
                            assert_eq!(exact.to_i64(), Some(d));
                            integral += 1;
                        }
                        Err(Error::NotRealizable(_)) => {
                            assert!(!exact.is_integer());
                            rejected += 1;
                        }
                        Err(e) => panic!("{sig:?} {bundle:?}: {e}"),
                    }
                }
            }
        }
    }
    assert!(integral > 0 && rejected > 0);
}

#[test]
fn bundle_type_counts() {
    for group in [Group::Su2, Group::So3] {
        for sig in signature_grid(12, group) {
            let all: u64 = sig.singularities.iter().map(|s| s.a).product();
            let types = enumerate_bundle_types(&sig, 1).unwrap();
            let even = sig.singularities.iter().filter(|s| s.a % 2 == 0).count();
            // SU(2) parity only binds when two or more orders are even
            if group == Group::So3 || even <= 1 {
                assert_eq!(types.len() as u64, all);
            } else {
                assert!((types.len() as u64) < all);
            }
            for t in &types {
                validate_bundle(&sig, t).unwrap();
            }
        }
    }
}

#[test]
fn malformed_bundles_are_rejected() {
    let sig = signature(6, 1, Group::So3, &[(2, 1), (3, 1)]);
    assert!(matches!(validate_bundle(&sig, &BundleType::new(-3, vec![0])), Err(Error::Validation(_))));
    assert!(matches!(validate_bundle(&sig, &BundleType::new(-3, vec![0, 3])), Err(Error::Validation(_))));
    let bad = signature(6, 1, Group::So3, &[(4, 1)]);
    assert!(matches!(invariant_index(&bad, &BundleType::new(-3, vec![0])), Err(Error::Validation(_))));
}

proptest! {
    #[test]
    fn defects_are_reported(alpha in 0u64..20, a in 0u64..10, b in -10i64..10) {
        let sig = signature(alpha, 0, Group::So3, &[(a, b)]);
        let defects = sig.validate().err().unwrap_or_default();
        prop_assert_eq!(defects.contains(&SignatureDefect::ZeroAlpha), alpha == 0);
        prop_assert_eq!(defects.iter().any(|d| matches!(d, SignatureDefect::ZeroOrder { .. })), a == 0);
        let divides = a != 0 && alpha != 0 && alpha % a == 0;
        prop_assert_eq!(
            defects.iter().any(|d| matches!(d, SignatureDefect::OrderDoesNotDivideAlpha { .. })),
            a != 0 && alpha != 0 && !divides
        );
        if a != 0 {
            prop_assert_eq!(
                defects.iter().any(|d| matches!(d, SignatureDefect::NotCoprime { .. })),
                gcd(a as i64, b) != 1
            );
        }
    }

    #[test]
    fn charge_shifts_by_alpha(alpha_idx in 0usize..4, charge in -5i64..5, m in 0u64..12) {
        // raising the charge by alpha adds exactly 8 (SU2) to the index
        let (alpha, a) = [(2u64, 2u64), (3, 3), (6, 3), (12, 4)][alpha_idx];
        let sig = signature(alpha, 0, Group::Su2, &[(a, 1)]);
        let w = m % a;
        let x = invariant_index(&sig, &BundleType::new(charge, vec![w])).unwrap();
        let y = invariant_index(&sig, &BundleType::new(charge + alpha as i64, vec![w])).unwrap();
        prop_assert_eq!((y - x).to_i64(), Some(8));
    }
}
