mod common;

use common::*;
use powercone::apolar::{apolar_ideal, apolar_kernel, catalecticant_f64, cube_divisor_witness, hilbert_function_ci, numeric_kernel};
use powercone::boundary::four_zero_system;
use powercone::catalog::{example_c, example_points};
use powercone::scalar::Field;
use powercone::dualcone::functional_of_quartic;
use powercone::forms::{qform, BinaryForm};
use powercone::linalg::rank_exact;
use powercone::scalar::{qi, Rational};
use proptest::prelude::*;

fn x() -> BinaryForm<Rational> {
    BinaryForm::x()
}
fn y() -> BinaryForm<Rational> {
    BinaryForm::y()
}

/// Kernel of the pairing from degree k by brute force over the monomial matrix.
fn brute_kernel_dim(l: &BinaryForm<Rational>, k: usize) -> usize {
    let rows: Vec<Vec<Rational>> = (0..=k)
        .map(|i| BinaryForm::monomial(k, i, qi(1)).apolar(l).coeffs().to_vec())
        .collect();
    k + 1 - rank_exact(&powercone::linalg::ExactMatrix::from_rows(rows))
}

#[test]
fn kernel_examples() {
    let x8 = x().pow(8);
    let k1 = apolar_kernel(&x8, 1);
    assert_eq!(k1.len(), 1);
    assert!(y().apolar(&x8).is_zero());
    assert_eq!(k1[0].coeff(1).clone(), qi(0));

    let l = x().pow(4).mul(&y().pow(4));
    assert!(apolar_kernel(&l, 4).is_empty());
    assert_eq!(brute_kernel_dim(&l, 4), 0);
    let k5 = apolar_kernel(&l, 5);
    assert_eq!(k5.len(), 2);
    for g in [x().pow(5), y().pow(5)] {
        assert!(g.apolar(&l).is_zero());
    }
    assert_eq!(apolar_kernel(&BinaryForm::zero(8), 3).len(), 4);
}

#[test]
fn ideal_examples() {
    let i = apolar_ideal(&x().pow(8)).unwrap();
    assert_eq!(i.degrees(), (1, 9));
    assert_eq!(hilbert_function_ci(&i.gen_low, &i.gen_high).unwrap(), vec![1; 9]);
    let i = apolar_ideal(&x().pow(4).mul(&y().pow(4))).unwrap();
    assert_eq!(i.degrees(), (5, 5));
}

#[test]
fn hilbert_examples() {
    let l1 = BinaryForm::linear(qi(1), qi(2));
    let l2 = BinaryForm::linear(qi(-1), qi(3));
    assert_eq!(hilbert_function_ci(&l1.pow(3), &l2.pow(3)).unwrap(), vec![1, 2, 3, 2, 1]);
    assert_eq!(hilbert_function_ci(&l1, &l2).unwrap(), vec![1]);
    // Two generic sextics: dim (f, g)_d = 2·dim R_{d−6} − dim R_{d−12}, so H(8) = 9 − 6.
    let f = qform(&[1, 0, -2, 3, 0, 1, 4]);
    let g = qform(&[2, 1, 0, 0, -1, 0, 1]);
    let h = hilbert_function_ci(&f, &g).unwrap();
    for (d, v) in h.iter().enumerate() {
        let koszul = (d + 1) as i64 - 2 * (d as i64 - 5).max(0) + (d as i64 - 11).max(0);
        assert_eq!(*v as i64, koszul, "degree {d}");
    }
    assert_eq!(h[8], 3);
}

#[test]
fn cube_examples() {
    let w = cube_divisor_witness(&x().pow(8)).unwrap();
    assert!(w.pow(3).apolar(&x().pow(8)).is_zero());
    assert_eq!(w.coeff(1).clone(), qi(0));
    // x⁴y⁴: (L^⊥)₃ = 0 since the ideal is generated in degree 5.
    let l = x().pow(4).mul(&y().pow(4));
    assert!(y().pow(3).apolar(&l).coeffs().iter().any(|c| *c != qi(0)));
    assert!(cube_divisor_witness(&l).is_none());
}

#[test]
fn example_certificate_has_degree_five_generator() {
    let c = example_c(200);
    let sys = four_zero_system(&example_points(c)).unwrap();
    let quartic = sys.expand_gram(&sys.gram_family);
    let l = functional_of_quartic(&quartic, 1e-40).unwrap().map(|v| v.to_f64());
    let l = l.scale(&(1.0 / l.coef_norm()));
    let kernel_dim = |k: usize| numeric_kernel(&catalecticant_f64(&l, k).unwrap(), 1e-8).len();
    assert_eq!(kernel_dim(4), 0);
    assert_eq!(kernel_dim(5), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generators_annihilate(l in binary(8).prop_filter("nonzero", |l| !l.is_zero())) {
        let i = apolar_ideal(&l).unwrap();
        let (d1, d2) = i.degrees();
        prop_assert_eq!(d1 + d2, l.degree() + 2);
        for g in [&i.gen_low, &i.gen_high] {
            if g.degree() <= 8 {
                for j in 0..=(8 - g.degree()) {
                    let h = BinaryForm::monomial(8 - g.degree(), j, qi(1));
                    prop_assert!(g.mul(&h).apolar(&l).is_zero());
                }
            }
        }
        let hf = hilbert_function_ci(&i.gen_low, &i.gen_high).unwrap();
        let mut rev = hf.clone();
        rev.reverse();
        prop_assert_eq!(hf, rev);
    }

    #[test]
    fn cube_witness_squares_divide_sextics(
        l in (rat(), rat(), binary(2)).prop_map(|(a, b, q)| {
            // L = l'-power-heavy functional: x⁸-type plus a small generic part in a direction.
            let lin = BinaryForm::linear(a.clone() + qi(1), b);
            lin.pow(8).add(&q.mul(&lin.pow(6))).unwrap()
        })
    ) {
        if let Some(w) = cube_divisor_witness(&l) {
            for k in apolar_kernel(&l, 6) {
                prop_assert!(k.div_exact(&w.pow(2)).is_some());
            }
        }
    }
}
