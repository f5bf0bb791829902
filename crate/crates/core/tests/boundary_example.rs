use powercone::boundary::{four_zero_system, jacobian_singular_values, on_boundary_hypersurface, BoundaryClass, Triple};
use powercone::catalog::{example_c, example_points, example_triple};
use powercone::scalar::Field;

#[test]
fn example_triple_is_on_g() {
    let c = example_c(200).to_f64();
    let [q1, q2, q3] = example_triple(c);
    let t = Triple::new(q1, q2, q3);
    let s = jacobian_singular_values(&t);
    assert_eq!(on_boundary_hypersurface(&t, 1e-6), BoundaryClass::OnG);
    assert!(s[7] / s[8] >= 1e3);
}

#[test]
fn example_points_det15() {
    let c = example_c(200);
    let sys = four_zero_system(&example_points(c)).unwrap();
    assert!(sys.det15_relative <= 1e-6);
}

use powercone::catalog::EXAMPLE_GRAM;
use powercone::dualcone::u_relations;
use powercone::forms::TernaryForm;
use powercone::scalar::ExtFloat;

#[test]
fn printed_gram_matches_assembled_family() {
    let bits = 200;
    let c = example_c(bits);
    let e = |v: i64| ExtFloat::new(&powercone::scalar::qi(v), bits);
    let poly = |coef: &[i64; 8]| coef.iter().rev().fold(e(0), |acc, &k| acc * c.clone() + e(k));
    let g: Vec<ExtFloat> = EXAMPLE_GRAM.iter().map(poly).collect();
    let a = TernaryForm::<ExtFloat>::var(0);
    let b = TernaryForm::<ExtFloat>::var(1);
    let z = TernaryForm::<ExtFloat>::var(2);
    let xz = a.add(&z).unwrap();
    let cxz = a.scale(&c).sub(&z).unwrap();
    let third = a.scale(&(c.clone() - e(16))).sub(&b.scale(&(c.clone() + e(1)))).unwrap().sub(&z.scale(&e(17))).unwrap();
    let q = [xz.mul(&cxz).scale(&e(-1)), xz.mul(&third), cxz.mul(&third).scale(&e(-1))];
    let idx = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    let mut f = TernaryForm::zero(4);
    for i in 0..3 {
        for j in 0..3 {
            f = f.add(&q[i].mul(&q[j]).scale(&g[idx[i][j]])).unwrap();
        }
    }
    let scale = f.max_abs();
    assert!(u_relations(&f).iter().all(|v| v.to_f64().abs() <= 1e-50 * scale));
    for p in example_points(c.clone()) {
        assert!(f.eval(&p).to_f64().abs() <= 1e-50 * scale);
    }
    let sys = four_zero_system(&example_points(c.clone())).unwrap();
    let ours = sys.expand_gram(&sys.gram_family);
    let ratio = ours.coeff([4, 0, 0]) / f.coeff([4, 0, 0]);
    let diff = ours.sub(&f.scale(&ratio)).unwrap();
    assert!(diff.max_abs() <= 1e-50 * ours.max_abs());
}
