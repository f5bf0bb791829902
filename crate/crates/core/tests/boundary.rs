mod common;

use common::*;
use num_traits::Zero;
use powercone::boundary::{
    dependent_triple_tangent_dim, four_zero_system, jacobian_image_dim, jacobian_singular_values, on_boundary_hypersurface, sample_on_g,
    BoundaryClass, Triple,
};
use powercone::catalog;
use powercone::decompose::boundary_along;
use powercone::faces::reznick_refute;
use powercone::forms::BinaryForm;
use powercone::linalg::rank_exact;
use powercone::scalar::{qi, Rational};
use powercone::sdp::{membership_value, MEMBERSHIP_BAND};
use proptest::prelude::*;

fn qf(c: [i64; 3]) -> BinaryForm<Rational> {
    BinaryForm::quadratic(qi(c[0]), qi(c[1]), qi(c[2]))
}

#[test]
fn monomial_triple_is_full_rank() {
    let t = Triple::new(qf([1, 0, 0]), qf([0, 0, 1]), qf([0, 1, 0]));
    assert_eq!(jacobian_image_dim(&t), 9);
    assert_eq!(on_boundary_hypersurface(&t, 1e-9), BoundaryClass::OffG);
}

#[test]
fn dependent_triples() {
    let t = Triple::new(qf([1, 0, 0]), qf([0, 0, 1]), qf([2, 0, -3]));
    assert_eq!(on_boundary_hypersurface(&t, 1e-9), BoundaryClass::DependentTriple);
    let (p1, p2) = (qf([0, 1, 0]), qf([1, 0, -1]));
    assert_eq!(dependent_triple_tangent_dim(&p1, &p2, &qi(0), &qi(0)), 6);
    assert!(dependent_triple_tangent_dim(&p1, &p1, &qi(1), &qi(2)) <= 4);
}

#[test]
fn degenerate_point_configurations() {
    let pts = [[qi(1), qi(0), qi(0)], [qi(0), qi(1), qi(0)], [qi(1), qi(1), qi(0)]];
    assert!(four_zero_system(&pts).is_err());
    let pts = [[qi(1), qi(0), qi(0)], [qi(2), qi(0), qi(0)], [qi(0), qi(0), qi(1)]];
    assert!(four_zero_system(&pts).is_err());
}

#[test]
fn det15_vanishes_exactly_when_rank_drops() {
    let vals = [-1i64, 0, 1];
    let mut small = Vec::new();
    for a in vals {
        for b in vals {
            for c in vals {
                if (a, b, c) != (0, 0, 0) {
                    small.push([qi(a), qi(b), qi(c)]);
                }
            }
        }
    }
    let mut checked = 0;
    for (i, p1) in small.iter().enumerate().step_by(3) {
        for p2 in small.iter().skip(i + 1).step_by(4) {
            for p3 in small.iter().step_by(5) {
                let Ok(sys) = four_zero_system(&[p1.clone(), p2.clone(), p3.clone()]) else { continue };
                let r = rank_exact(&sys.matrix_exact().unwrap());
                assert_eq!(sys.det15.is_zero(), r < 15);
                checked += 1;
            }
        }
    }
    assert!(checked > 20);
}

#[test]
fn sampled_hypersurface_points_are_in_the_cone() {
    // A critical value of the sum map need not lie on the boundary, so only
    // membership is asserted here; the converse direction is tested below.
    let mut found = 0;
    for seed in 0..6 {
        let Some(t) = sample_on_g(seed) else { continue };
        assert_eq!(on_boundary_hypersurface(&t, 1e-6), BoundaryClass::OnG);
        let m = membership_value(&t.sum_of_fourth_powers(), 1e-9).unwrap();
        assert!(m.relative_value >= -MEMBERSHIP_BAND, "seed {seed}: {}", m.relative_value);
        found += 1;
    }
    assert!(found >= 3);
}

#[test]
fn boundary_points_come_from_the_hypersurface() {
    let f = catalog::f4().to_f64();
    for l in [BinaryForm::linear(1.0, 0.0), BinaryForm::linear(0.0, 1.0), BinaryForm::linear(1.0, 1.0)] {
        let (_, g) = boundary_along(&f, &l, 60).unwrap();
        let m = membership_value(&g, 1e-9).unwrap();
        assert!(m.relative_value.abs() <= MEMBERSHIP_BAND);
        let d = reznick_refute(&g, MEMBERSHIP_BAND).unwrap().decomposition.expect("length-3 representation");
        let t = Triple::new(d.summands[0].clone(), d.summands[1].clone(), d.summands[2].clone());
        let s = jacobian_singular_values(&t);
        assert_eq!(on_boundary_hypersurface(&t, 1e-6), BoundaryClass::OnG);
        assert!(s[7] >= 1e3 * s[8]);
    }
}

fn point() -> impl Strategy<Value = [Rational; 3]> {
    [rat(), rat(), rat()]
}

fn triple() -> impl Strategy<Value = Triple<Rational>> {
    (binary(2), binary(2), binary(2)).prop_map(|(a, b, c)| Triple::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn image_dim_is_coordinate_invariant(t in triple(), m in invertible2()) {
        let [a, b, c] = &t.q;
        let moved = Triple::new(a.change_coords(&m).unwrap(), b.change_coords(&m).unwrap(), c.change_coords(&m).unwrap());
        prop_assert_eq!(jacobian_image_dim(&t), jacobian_image_dim(&moved));
    }

    #[test]
    fn generic_dependent_tangent_dim(p1 in binary(2), p2 in binary(2), l1 in nonzero_rat(), l2 in nonzero_rat()) {
        // Generic: p1, p2 independent and h not proportional to either.
        let m = powercone::linalg::ExactMatrix::from_rows(vec![p1.coeffs().to_vec(), p2.coeffs().to_vec()]);
        prop_assume!(rank_exact(&m) == 2);
        prop_assert_eq!(dependent_triple_tangent_dim(&p1, &p2, &l1, &l2), 7);
    }

    #[test]
    fn gram_family_vanishes_doubly(p in [point(), point(), point()], a in prop::collection::vec(rat(), 9)) {
        let Ok(sys) = four_zero_system(&p) else { return Ok(()) };
        // A psd completion G = AᵀA.
        let g: [[Rational; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| a[3 * k + i].clone() * a[3 * k + j].clone()).sum())
        });
        let f = sys.expand_gram(&g);
        for pt in &p {
            prop_assert!(f.eval(pt).is_zero());
            for i in 0..3 {
                prop_assert!(f.partial(i).eval(pt).is_zero());
            }
        }
        for (l, (i, j)) in sys.lines.iter().zip([(0, 1), (0, 2), (1, 2)]) {
            prop_assert!(l.eval(&p[i]).is_zero() && l.eval(&p[j]).is_zero());
        }
    }

    #[test]
    fn random_points_have_nonzero_det15(p in [point(), point(), point()]) {
        let Ok(sys) = four_zero_system(&p) else { return Ok(()) };
        prop_assert!(!sys.det15.is_zero());
    }
}
