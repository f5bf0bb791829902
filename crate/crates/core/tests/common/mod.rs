#![allow(dead_code)]

use powercone::forms::{BinaryForm, TernaryForm};
use powercone::scalar::{q, Rational};
use proptest::prelude::*;

pub fn rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rational> {
    (1i64..=20, 1i64..=6, any::<bool>()).prop_map(|(n, d, neg)| q(if neg { -n } else { n }, d))
}

pub fn binary(degree: usize) -> impl Strategy<Value = BinaryForm<Rational>> {
    prop::collection::vec(rat(), degree + 1).prop_map(BinaryForm::new)
}

pub fn binary_f64(degree: usize) -> impl Strategy<Value = BinaryForm<f64>> {
    prop::collection::vec(-3.0f64..3.0, degree + 1).prop_map(BinaryForm::new)
}

pub fn ternary(degree: u32) -> impl Strategy<Value = TernaryForm<Rational>> {
    let n = ((degree + 1) * (degree + 2) / 2) as usize;
    prop::collection::vec(rat(), n).prop_map(move |v| TernaryForm::from_coeff_vector(degree, &v))
}

/// Invertible rational 2×2 matrix.
pub fn invertible2() -> impl Strategy<Value = [[Rational; 2]; 2]> {
    [[rat(), rat()], [rat(), rat()]].prop_filter("invertible", |m| {
        m[0][0].clone() * m[1][1].clone() != m[0][1].clone() * m[1][0].clone()
    })
}

/// A quadratic as `[y², xy, x²]` coefficients.
pub fn quad(c: [f64; 3]) -> BinaryForm<f64> {
    BinaryForm::new(c.to_vec())
}

pub fn sum_fourth(qs: &[BinaryForm<f64>]) -> BinaryForm<f64> {
    qs.iter().map(|q| q.pow(4)).reduce(|a, b| a.add(&b).unwrap()).unwrap()
}
