mod common;

use common::*;
use num_traits::Zero;
use powercone::forms::{apolar_pair, change_coords_binary, inverse2, qform, substitute_binary, BinaryForm, Form, Poly2};
use powercone::json::{form_from_json, form_to_json, ParsedForm};
use powercone::parse::parse_polynomial;
use powercone::scalar::{qi, Rational};
use proptest::prelude::*;

fn x() -> BinaryForm<Rational> {
    BinaryForm::x()
}
fn y() -> BinaryForm<Rational> {
    BinaryForm::y()
}

#[test]
fn multiplication_examples() {
    let p = x().add(&y()).unwrap().mul(&x().sub(&y()).unwrap());
    assert_eq!(p, x().pow(2).sub(&y().pow(2)).unwrap());
    let f = qform(&[1, -2, 0, 5]);
    assert_eq!(f.mul(&BinaryForm::constant(qi(1))), f);
}

#[test]
fn fourth_power_extremes_by_multinomial() {
    // (x² + xy − y²)⁴: the x⁸ and y⁸ coefficients are 1⁴ and (−1)⁴.
    let q = BinaryForm::quadratic(qi(-1), qi(1), qi(1));
    let f = q.pow(4);
    assert_eq!((f.coeff(8).clone(), f.coeff(0).clone()), (qi(1), qi(1)));
    // Middle coefficient of x⁴y⁴ by the multinomial sum over (i, j, k) with
    // i + j + k = 4 and 2i + j = 4: Σ 4!/(i!j!k!)·1^i·1^j·(−1)^k.
    let fact = |n: i64| (1..=n).product::<i64>();
    let mut mid = 0i64;
    for i in 0..=2i64 {
        let j = 4 - 2 * i;
        let k = 4 - i - j;
        mid += fact(4) / (fact(i) * fact(j) * fact(k)) * if k % 2 == 0 { 1 } else { -1 };
    }
    assert_eq!(f.coeff(4).clone(), qi(mid));
}

#[test]
fn substitution_examples() {
    let f = Poly2::y().sub(&Poly2::x().pow(2)).pow(4).add(&Poly2::constant(qi(1)));
    assert_eq!(f.substitute(&Poly2::x(), &Poly2::x().pow(2)), Poly2::constant(qi(1)));
    let x8 = x().pow(8);
    assert_eq!(substitute_binary(&x8, &Poly2::x(), &Poly2::y()), x8.to_poly2());
    for r in [1u32, 5, 25] {
        let f2 = Poly2::y().sub(&Poly2::monomial(r, 0, qi(1))).pow(4).add(&Poly2::constant(qi(1)));
        assert_eq!(f2.substitute(&Poly2::x(), &Poly2::monomial(r, 0, qi(1))), Poly2::constant(qi(1)));
    }
}

#[test]
fn apolarity_examples() {
    let x8 = Form::Binary(x().pow(8));
    assert_eq!(apolar_pair(&x8, &x8).unwrap(), Form::Binary(BinaryForm::constant(qi(40320))));
    let p = apolar_pair(&Form::Binary(x()), &Form::Binary(y().pow(3))).unwrap();
    assert!(matches!(p, Form::Binary(b) if b.is_zero()));
    let xy = x().mul(&y());
    let p = apolar_pair(&Form::Binary(xy.clone()), &Form::Binary(xy.pow(2))).unwrap();
    assert_eq!(p, Form::Binary(xy.scale(&qi(4))));
}

#[test]
fn coordinate_change_examples() {
    let swap = [[qi(0), qi(1)], [qi(1), qi(0)]];
    assert_eq!(change_coords_binary(&x().pow(8), &swap).unwrap(), y().pow(8));
    let m = [[qi(1), qi(1)], [qi(1), qi(-1)]];
    let f = x().pow(2).sub(&y().pow(2)).unwrap();
    assert_eq!(change_coords_binary(&f, &m).unwrap(), x().mul(&y()).scale(&qi(4)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_bilinear(g in binary(3), f1 in binary(6), f2 in binary(6), l in rat()) {
        let lhs = g.apolar(&f1.add(&f2.scale(&l)).unwrap());
        let rhs = g.apolar(&f1).add(&g.apolar(&f2).scale(&l)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn equal_degree_pairing_is_symmetric_positive(f in binary(5), g in binary(5)) {
        prop_assert_eq!(f.pairing(&g), g.pairing(&f));
        if !f.is_zero() {
            prop_assert!(f.pairing(&f) > Rational::zero());
        }
    }

    #[test]
    fn substitution_is_multiplicative(f in binary(3), g in binary(2), a in rat(), b in rat()) {
        let px = Poly2::x().add(&Poly2::constant(a));
        let py = Poly2::y().pow(2).add(&Poly2::x().scale(&b));
        let lhs = substitute_binary(&f.mul(&g), &px, &py);
        let rhs = substitute_binary(&f, &px, &py).mul(&substitute_binary(&g, &px, &py));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coordinate_change_round_trips(f in binary(6), m in invertible2()) {
        let back = change_coords_binary(&change_coords_binary(&f, &m).unwrap(), &inverse2(&m).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn json_round_trips(f in binary(8), t in ternary(4), v in prop::collection::vec(-1e6f64..1e6, 9)) {
        for form in [Form::Binary(f.clone()), Form::Ternary(t.clone())] {
            let back = form_from_json(&form_to_json(&form)).unwrap();
            prop_assert_eq!(back, ParsedForm::Exact(form));
        }
        let ff = Form::Binary(BinaryForm::new(v));
        let back = form_from_json(&serde_json::from_str(&form_to_json(&ff).to_string()).unwrap()).unwrap();
        prop_assert_eq!(back, ParsedForm::Float(ff));
    }

    #[test]
    fn parser_reads_printed_forms(f in binary(6)) {
        let text: Vec<String> = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| format!("({}/{})*x^{}*y^{}", c.numer(), c.denom(), i, 6 - i))
            .collect();
        let parsed = parse_polynomial(&text.join(" + ")).unwrap().to_binary(Some(6)).unwrap();
        prop_assert_eq!(parsed, f);
    }
}
