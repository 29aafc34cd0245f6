use fewroots_core::rational::rat;
use fewroots_haas::{count_roots_quadrants, signature_table, CountOptions, HaasSystem};
use proptest::prelude::*;

#[test]
fn all_thirteen_rows() {
    let rows = signature_table(&CountOptions::default()).unwrap();
    assert_eq!(rows.len(), 13);
    for r in &rows {
        assert!(r.matches(), "region {}: ({}, {}) expected {} found {}", r.region, r.a, r.b, r.expected, r.found);
    }
}

#[test]
fn swapping_parameters_swaps_mixed_quadrants() {
    for r in signature_table(&CountOptions::default()).unwrap() {
        let h = HaasSystem::new(r.b.clone(), r.a.clone(), 3).unwrap();
        let s = count_roots_quadrants(&h, &CountOptions::default()).unwrap().signature;
        assert_eq!(s, r.found.swapped(), "region {}", r.region);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn at_most_five_positive_roots(an in -300i64..=300, bn in -300i64..=300) {
        prop_assume!(an != 0 && bn != 0);
        let h = HaasSystem::new(rat(an, 100), rat(bn, 100), 3).unwrap();
        match count_roots_quadrants(&h, &CountOptions::default()) {
            Ok(rc) => {
                prop_assert!(rc.distinct);
                prop_assert!(rc.signature.positive() <= 5, "{}", rc.signature);
                prop_assert!(rc.signature.total() as u32 <= h.bezout());
            }
            // parameters on the discriminant are not counted
            Err(fewroots_haas::HaasError::DegenerateInput(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}
