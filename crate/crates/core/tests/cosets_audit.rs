use num_bigint::BigInt;
use rslv_core::cosets::{
    bruhat_product_identity_check, classify, congruence_index, exhaustive_partition_audit,
    expected_classes, literal_nplus_wprime_identity, mirabolic_partition_audit,
    random_invariance_check, representative, stabilizer_audit, xi_t_valuation_check, CosetClass,
    Mat, Variant, DEFAULT_BUDGET,
};
use rslv_core::degenerate::index_formula;
use rslv_core::Error;

const CASES: [(usize, u64); 4] = [(2, 2), (2, 3), (2, 5), (3, 2)];

#[test]
fn bilateral_partition_is_exact() {
    for (n, p) in CASES {
        let r = exhaustive_partition_audit(n, p, DEFAULT_BUDGET).unwrap();
        assert!(r.passes(), "n = {n}, q = {p}: {r:?}");
        assert_eq!(r.orbit_count, 7 + (p as usize).saturating_sub(2));
        assert_eq!(r.orbit_sum(), r.group_order);
    }
}

#[test]
fn known_group_orders() {
    let orders: Vec<u64> = CASES
        .iter()
        .map(|&(n, p)| {
            exhaustive_partition_audit(n, p, DEFAULT_BUDGET)
                .unwrap()
                .group_order
        })
        .collect();
    assert_eq!(orders, vec![168, 5616, 372000, 20160]);
}

#[test]
fn stabilizers_match_orbit_sizes() {
    for (n, p) in CASES {
        let r = stabilizer_audit(n, p, DEFAULT_BUDGET).unwrap();
        assert!(r.passes(), "n = {n}, q = {p}");
        for c in &r.classes {
            if let Some(expected) = c.expected_stabilizer {
                assert_eq!(
                    c.stabilizer,
                    Some(expected),
                    "{} at n = {n}, q = {p}",
                    c.class
                );
            }
        }
    }
}

#[test]
fn mirabolic_partitions() {
    for (n, p) in CASES {
        for (variant, count) in [(Variant::PxG, 3), (Variant::GxP, 3), (Variant::PxP, 2)] {
            let r = mirabolic_partition_audit(n, p, variant, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.orbit_count, count, "{variant} at n = {n}, q = {p}");
            assert!(
                r.passes(),
                "{variant} at n = {n}, q = {p}: {:?}",
                r.identities
            );
        }
    }
}

#[test]
fn sign_of_nplus_wprime_folding_matters_in_odd_characteristic() {
    assert!(literal_nplus_wprime_identity(2, 2));
    assert!(literal_nplus_wprime_identity(3, 2));
    assert!(!literal_nplus_wprime_identity(2, 3));
    assert!(!literal_nplus_wprime_identity(2, 5));
}

#[test]
fn classification_is_bi_invariant() {
    for (n, p) in CASES {
        assert_eq!(
            random_invariance_check(n, p, 10_000, 17).unwrap(),
            0,
            "n = {n}, q = {p}"
        );
    }
}

#[test]
fn classify_lands_in_predicted_list() {
    let p = 3;
    for class in expected_classes(p) {
        let g = representative(class, 3, p);
        assert_eq!(classify(&g, p).unwrap(), class);
    }
    assert!(!expected_classes(p).contains(&CosetClass::Xi(1)));
}

#[test]
fn classify_rejects_singular_and_small_n() {
    let singular = Mat::from_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]], 3);
    assert!(matches!(classify(&singular, 3), Err(Error::Domain(_))));
    assert!(matches!(
        classify(&Mat::identity(2), 3),
        Err(Error::Domain(_))
    ));
}

#[test]
fn budget_is_enforced() {
    match exhaustive_partition_audit(3, 3, DEFAULT_BUDGET) {
        Err(Error::Budget { needed, budget }) => {
            assert_eq!(needed, 12_130_560);
            assert_eq!(budget, DEFAULT_BUDGET);
        }
        other => panic!("expected a budget refusal, got {other:?}"),
    }
    assert!(matches!(
        exhaustive_partition_audit(2, 3, 100),
        Err(Error::Budget { .. })
    ));
}

#[test]
fn congruence_index_matches_projective_count() {
    for (n, p, e) in [(2usize, 2u64, 1u32), (2, 2, 2), (2, 3, 1), (3, 2, 1)] {
        let r = congruence_index(n, p, e, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.gl_order % r.k0_order, 0);
        assert_eq!(
            BigInt::from(r.index()),
            index_formula(n as u32, p, e),
            "(n, p, e) = ({n}, {p}, {e})"
        );
    }
}

#[test]
fn congruence_index_orders() {
    let r = congruence_index(2, 2, 1, DEFAULT_BUDGET).unwrap();
    assert_eq!((r.gl_order, r.k0_order), (168, 24));
}

#[test]
fn xi_invariant_valuation() {
    for (p, e, samples) in [(2u64, 1u32, 1000), (3, 2, 500)] {
        let r = xi_t_valuation_check(2, p, e, samples, 2024).unwrap();
        assert_eq!(r.accepted, samples);
        assert!(r.passes(), "p = {p}, e = {e}: {r:?}");
        assert!(r.min_valuation.unwrap() >= e);
    }
    let r = xi_t_valuation_check(3, 2, 1, 200, 5).unwrap();
    assert!(r.passes(), "{r:?}");
}

#[test]
fn bruhat_product_formula() {
    for n in 2..=3 {
        let r = bruhat_product_identity_check(n).unwrap();
        assert!(r.passes(), "n = {n}: {r:?}");
    }
}
