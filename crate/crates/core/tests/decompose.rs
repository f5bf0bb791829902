mod common;

use common::*;
use powercone::catalog;
use powercone::decompose::{
    boundary_along, canonicalize, decompose_length4, exact_residual, find_all_real_reps, fourth_root_exact,
    gauss_newton_decompose, length_estimate, Length,
};
use powercone::forms::BinaryForm;
use powercone::scalar::f64_to_rational;
use powercone::Error;
use proptest::prelude::*;

fn x2_plus_y2() -> BinaryForm<f64> {
    quad([1.0, 0.0, 1.0])
}

#[test]
fn exact_start_converges() {
    let h = x2_plus_y2();
    let f = h.pow(4);
    let d = gauss_newton_decompose(&f, 1, &[h], 1e-10, 50).unwrap();
    assert!(d.relative_residual < 1e-10);
    assert!(exact_residual(&f, &d.summands) < 1e-10 * f.coef_norm());
}

#[test]
fn random_starts_find_a_known_sum() {
    let f = catalog::f2().to_f64();
    let reps = find_all_real_reps(&f, 3, 400, 7, 1e-8);
    assert!(!reps.is_empty());
    for d in &reps {
        assert!(d.relative_residual < 1e-8);
        assert!(exact_residual(&f, &d.summands) <= 1e-8 * f.coef_norm());
    }
}

#[test]
fn forms_outside_the_cone_have_no_representation() {
    let f = BinaryForm::monomial(8, 8, -1.0);
    for k in 1..=4 {
        assert!(find_all_real_reps(&f, k, 100, 1, 1e-8).is_empty());
    }
    let start = vec![x2_plus_y2(); 4];
    assert!(gauss_newton_decompose(&f, 4, &start, 1e-8, 200).is_none());
    assert_eq!(length_estimate(&f, 50, 1e-8).unwrap().length, Length::NotInCone);
}

#[test]
fn length_four_construction() {
    let f = catalog::interior_sum().to_f64();
    let d = decompose_length4(&f, 1e-6).unwrap();
    assert_eq!(d.k(), 4);
    assert!(exact_residual(&f, &d.summands) < 1e-6 * f.coef_norm());

    let qs = [quad([0.0, 0.0, 1.0]), quad([0.0, 1.0, 0.0]), quad([1.0, 0.0, 0.0]), quad([1.0, 2.0, 1.0])];
    let g = sum_fourth(&qs);
    let d = decompose_length4(&g, 1e-8).unwrap();
    assert!(exact_residual(&g, &d.summands) <= 1e-8 * g.coef_norm());

    let boundary = catalog::two_zero_boundary().to_f64();
    assert!(matches!(decompose_length4(&boundary, 1e-8), Err(Error::Precondition(_))));
}

#[test]
fn length_examples() {
    let x8 = BinaryForm::monomial(8, 8, 1.0);
    assert_eq!(length_estimate(&x8, 50, 1e-8).unwrap().length, Length::One);
    let est = length_estimate(&x2_plus_y2().pow(4).scale(&3.0), 50, 1e-8).unwrap();
    assert_eq!(est.length, Length::One);
    assert!(est.witness.unwrap().relative_residual < 1e-12);
    let two = sum_fourth(&[quad([0.0, 1.0, 0.0]), quad([-1.0, 0.0, 1.0])]);
    assert_eq!(length_estimate(&two, 200, 1e-8).unwrap().length, Length::Two);
}

#[test]
fn boundary_points_have_length_at_most_three() {
    for f in [catalog::f4(), catalog::f6()] {
        let f = f.to_f64();
        for l in [BinaryForm::x(), BinaryForm::y(), BinaryForm::linear(1.0, 1.0)] {
            let (_, g) = boundary_along(&f, &l, 60).unwrap();
            let est = length_estimate(&g, 400, 1e-7).unwrap();
            assert!(matches!(est.length, Length::Two | Length::Three), "{:?}", est.length);
            let d = est.witness.unwrap();
            assert!(exact_residual(&g, &d.summands) <= 1e-7 * g.coef_norm());
        }
    }
}

fn small_quad() -> impl Strategy<Value = BinaryForm<f64>> {
    prop::array::uniform3(-4i32..=4).prop_map(|c| quad(c.map(f64::from)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn canonical_order_ignores_permutation_and_sign(
        qs in prop::collection::vec(binary_f64(2), 1..=4),
        signs in prop::collection::vec(any::<bool>(), 4),
        rot in 0usize..4,
    ) {
        let c = canonicalize(&qs);
        prop_assert_eq!(&canonicalize(&c), &c);
        let mut moved: Vec<BinaryForm<f64>> = qs
            .iter()
            .zip(&signs)
            .map(|(q, s)| if *s { q.scale(&-1.0) } else { q.clone() })
            .collect();
        let n = moved.len();
        moved.rotate_left(rot % n);
        prop_assert_eq!(canonicalize(&moved), c);
    }

    #[test]
    fn fourth_powers_are_exactly_length_one(h in binary(2), lambda in 1i64..=9, other in small_quad()) {
        prop_assume!(!h.is_zero());
        let f = h.pow(4).scale(&powercone::scalar::qi(lambda));
        let ff = f.to_f64();
        prop_assume!(ff.map(|v| f64_to_rational(*v)) == f);
        prop_assert!(fourth_root_exact(&f).is_some());
        prop_assert_eq!(length_estimate(&ff, 20, 1e-8).unwrap().length, Length::One);

        // Adding a fourth power that is not proportional to h⁴ leaves length one.
        let g = ff.add(&other.pow(4)).unwrap();
        let ge = g.map(|v| f64_to_rational(*v));
        let est = length_estimate(&g, 20, 1e-8).unwrap();
        prop_assert_eq!(fourth_root_exact(&ge).is_some(), est.length == Length::One);
    }

    #[test]
    fn returned_decompositions_meet_the_residual_bound(qs in prop::collection::vec(small_quad(), 3), k in 1usize..=4) {
        let f = sum_fourth(&qs);
        prop_assume!(!f.is_zero());
        let tol = 1e-9;
        for d in find_all_real_reps(&f, k, 60, 3, tol) {
            prop_assert_eq!(d.k(), k);
            let r = exact_residual(&f, &d.summands);
            prop_assert!(r <= tol * f.coef_norm());
            prop_assert!((r - d.residual_norm).abs() <= 1e-12 * f.coef_norm());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn bisected_boundary_points_never_need_four(qs in prop::collection::vec(small_quad(), 4), l in prop::array::uniform2(-3i32..=3)) {
        prop_assume!(l != [0, 0]);
        let f = sum_fourth(&qs);
        let lin = BinaryForm::linear(f64::from(l[1]), f64::from(l[0]));
        let Ok((mu, g)) = boundary_along(&f, &lin, 60) else { return Ok(()) };
        prop_assume!(mu > 0.0);
        let est = length_estimate(&g, 400, 1e-7).unwrap();
        prop_assert!(matches!(est.length, Length::One | Length::Two | Length::Three), "{:?}", est.length);
    }
}
