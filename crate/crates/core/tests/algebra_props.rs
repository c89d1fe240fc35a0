//! Property tests for the exact algebra, each against a test-only oracle.

mod support;

use proptest::prelude::*;

use support::{bisection_count, poly_from, quadratic_suite, resultant_case, sturm_suite};
use workbench::algebra::{poly_sqrt, MultiPoly, RationalFunction, UniPoly};

#[test]
fn sturm_matches_descartes_bisection() {
    assert_eq!(sturm_suite(100), Ok(100));
}

#[test]
fn bisection_oracle_known_values() {
    let p = |c: &[i64]| UniPoly::from_ints(0, c).coeffs().to_vec();
    assert_eq!(bisection_count(&p(&[-1, 0, 2])), 2);
    assert_eq!(bisection_count(&p(&[1, 0, 1])), 0);
    assert_eq!(bisection_count(&p(&[-1, 1, -2, 1])), 1);
    assert_eq!(bisection_count(&p(&[0, -1, 0, 1])), 3);
}

#[test]
fn quadratic_test_matches_construction() {
    assert_eq!(quadratic_suite(), Ok(50));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn resultant_vanishes_at_common_roots(
        alpha in -3i64..=3, beta in -3i64..=3,
        c1 in prop::collection::vec(-3i64..=3, 6), c2 in prop::collection::vec(-3i64..=3, 6),
        c3 in prop::collection::vec(-3i64..=3, 6), c4 in prop::collection::vec(-3i64..=3, 6),
    ) {
        let r = resultant_case(alpha, beta, [&c1, &c2, &c3, &c4]);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn square_has_root(c in prop::collection::vec(-4i64..=4, 10)) {
        let p = poly_from(&[0, 1, 2], 2, &c);
        let s = poly_sqrt(&(&p * &p));
        prop_assert!(s.is_some());
        let s = s.unwrap();
        prop_assert_eq!(&s * &s, &p * &p);
    }

    #[test]
    fn product_of_distinct_linears_is_not_square(c in prop::collection::vec(-4i64..=4, 4), d in prop::collection::vec(-4i64..=4, 4)) {
        let p = poly_from(&[0, 1, 2], 1, &c);
        let r = poly_from(&[0, 1, 2], 1, &d);
        prop_assume!(!p.is_constant() && !r.is_constant());
        prop_assume!(p.primitive() != r.primitive() && p.primitive() != (-&r).primitive());
        prop_assert!(poly_sqrt(&(&p * &r)).is_none());
    }

    #[test]
    fn ratfunc_identities(c in prop::collection::vec(-4i64..=4, 6), d in prop::collection::vec(-4i64..=4, 6)) {
        let x = poly_from(&[0, 1], 2, &c);
        let y = poly_from(&[0, 1], 2, &d);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let f = RationalFunction::new(x.clone(), y.clone()).unwrap();
        let g = RationalFunction::new(y.clone(), x.clone()).unwrap();
        prop_assert_eq!(f.mul(&g), RationalFunction::from_poly(MultiPoly::one()));
        prop_assert_eq!(f.normalized().unwrap(), f.clone());
        prop_assert_eq!(f.normalized().unwrap().normalized().unwrap(), f.normalized().unwrap());
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        prop_assert_eq!(f.div(&f).unwrap(), RationalFunction::from_poly(MultiPoly::one()));
    }
}
