//! Fixed forms and constants used across the crate and its tests.

use num_traits::Zero;

use crate::forms::{BinaryForm, TernaryForm};
use crate::scalar::{qi, ExtFloat, Field, Rational};

fn quad(a: i64, b: i64, c: i64) -> BinaryForm<Rational> {
    BinaryForm::quadratic(qi(a), qi(b), qi(c))
}

fn sum_fourth(qs: &[BinaryForm<Rational>]) -> BinaryForm<Rational> {
    qs.iter()
        .map(|q| q.pow(4))
        .reduce(|a, b| a.add(&b).expect("same degree"))
        .expect("nonempty")
}

/// Summands of the octic with exactly two real length-3 representations.
pub fn f2_summands() -> Vec<BinaryForm<Rational>> {
    vec![quad(4, -5, 2), quad(4, -4, 2), quad(4, 2, -1)]
}

/// Summands of the octic with exactly four real length-3 representations.
pub fn f4_summands() -> Vec<BinaryForm<Rational>> {
    vec![quad(6, 10, -2), quad(3, -2, 5), quad(10, 4, -6)]
}

/// Summands of the octic with exactly six real length-3 representations.
pub fn f6_summands() -> Vec<BinaryForm<Rational>> {
    vec![quad(1, 4, 8), quad(10, 1, 3), quad(10, 10, -10)]
}

pub fn f2() -> BinaryForm<Rational> {
    sum_fourth(&f2_summands())
}

pub fn f4() -> BinaryForm<Rational> {
    sum_fourth(&f4_summands())
}

pub fn f6() -> BinaryForm<Rational> {
    sum_fourth(&f6_summands())
}

/// `(xy)⁴ + (x² − y²)⁴`, a boundary point with a two-zero certificate.
pub fn two_zero_boundary() -> BinaryForm<Rational> {
    sum_fourth(&[quad(0, 1, 0), quad(1, 0, -1)])
}

/// `Σ_{k=0}^{8} (x + k y)⁸`, an interior point.
pub fn interior_sum() -> BinaryForm<Rational> {
    (0..=8)
        .map(|k| BinaryForm::linear(qi(1), qi(k)).pow(8))
        .reduce(|a, b| a.add(&b).unwrap())
        .unwrap()
}

/// `x⁴ (y⁴ + (x+y)⁴ + (x−y)⁴ + (x+2y)⁴)`.
pub fn l4_sigma24_example() -> BinaryForm<Rational> {
    let y = BinaryForm::linear(qi(0), qi(1));
    let parts = [
        y.pow(4),
        BinaryForm::linear(qi(1), qi(1)).pow(4),
        BinaryForm::linear(qi(1), qi(-1)).pow(4),
        BinaryForm::linear(qi(1), qi(2)).pow(4),
    ];
    let g = parts.into_iter().reduce(|a, b| a.add(&b).unwrap()).unwrap();
    BinaryForm::x().pow(4).mul(&g)
}

/// The quartic with Gram matrix `[[2,0,-1,0],[0,3,0,0],[-1,0,2,0],[0,0,0,3]]`
/// in the basis `a(a+c), ab, c(a+c), bc`; its real zeros are `(0:1:0)` and `(1:0:-1)`.
pub fn two_zero_quartic() -> TernaryForm<Rational> {
    let a = TernaryForm::<Rational>::var(0);
    let b = TernaryForm::<Rational>::var(1);
    let c = TernaryForm::<Rational>::var(2);
    let apc = a.add(&c).unwrap();
    let v = [a.mul(&apc), a.mul(&b), c.mul(&apc), b.mul(&c)];
    let g = [[2, 0, -1, 0], [0, 3, 0, 0], [-1, 0, 2, 0], [0, 0, 0, 3]];
    let mut f = TernaryForm::zero(4);
    for i in 0..4 {
        for j in 0..4 {
            if g[i][j] != 0 {
                f = f.add(&v[i].mul(&v[j]).scale(&qi(g[i][j]))).unwrap();
            }
        }
    }
    f
}

/// Coefficients (ascending) of the degree-8 minimal polynomial of the constant `c`
/// of the three-zero example.
pub const C_MIN_POLY: [i64; 9] = [1, 1290239, -1534319, 1550171, -135542, -133, 1, -1, 1];

/// The real root of [`C_MIN_POLY`] near −21, refined by Newton's method at `bits` bits.
pub fn example_c(bits: u32) -> ExtFloat {
    let mut c = ExtFloat::new(&qi(-21), bits);
    let p: Vec<ExtFloat> = C_MIN_POLY.iter().map(|&v| ExtFloat::new(&qi(v), bits)).collect();
    for _ in 0..200 {
        let mut val = ExtFloat::new(&qi(0), bits);
        let mut der = ExtFloat::new(&qi(0), bits);
        for coef in p.iter().rev() {
            der = der * c.clone() + val.clone();
            val = val * c.clone() + coef.clone();
        }
        let step = val / der;
        c = c - step.clone();
        let tiny = step.value().is_zero()
            || step.to_f64().abs() <= 2f64.powi(-(bits as i32) + 8) * c.to_f64().abs();
        if tiny {
            break;
        }
    }
    c
}

pub fn example_c_f64() -> f64 {
    example_c(200).to_f64()
}

/// The three quadratics `xy`, `x² + xy − y²`, `x² − 16xy + c y²` over any field holding `c`.
pub fn example_triple<T: Field>(c: T) -> [BinaryForm<T>; 3] {
    let i = |v: i64| T::from_i64(v);
    [
        BinaryForm::quadratic(i(0), i(1), i(0)),
        BinaryForm::quadratic(i(1), i(1), i(-1)),
        BinaryForm::quadratic(i(1), i(-16), c),
    ]
}

/// The three zeros `(0:1:0)`, `(1:1:−1)`, `(1:−16:c)` of the three-zero certificate.
pub fn example_points<T: Field>(c: T) -> [[T; 3]; 3] {
    let i = |v: i64| T::from_i64(v);
    [[i(0), i(1), i(0)], [i(1), i(1), i(-1)], [i(1), i(-16), c]]
}

/// Integer coefficients (ascending in `c`, degree 7) of the printed 3×3 Gram
/// matrix entries `G11, G12, G13, G22, G23, G33` of the three-zero certificate,
/// relative to `q1 = −(a+c')(c a − c')`, `q2 = (a+c')((c−16)a − (c+1)b − 17c')`,
/// `q3 = −(c a − c')((c−16)a − (c+1)b − 17c')`, where `c'` is the third variable.
pub const EXAMPLE_GRAM: [[i64; 8]; 6] = [
    [-248202, -323875629964, 384885454002, -389117333868, 34054823830, -284749896, 14398014, -918256],
    [30859, 39815341637, -47864048337, 48361507226, -4687738385, -68106915, 20329939, -659350],
    [-15937, -20789333367, 24583084470, -24797139347, 1998413271, 35378289, -2098390, -95223],
    [-50, -64520364, 120560334, -98730364, 30387414, 23370756, 6018130, -823044],
    [927, 1196060035, -1392614400, 1409481342, -99186325, 6085491, -790488, 4786],
    [-859, -1122516338, 1343865411, -1359409919, 128759213, -858726, -26893, -5663],
];
