//! The differential of the sum-of-fourth-powers map, the hypersurface of
//! triples where it drops rank, and the equations for quartics in `U`
//! vanishing doubly at three points.

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::dualcone::u_basis;
use crate::error::{Error, Result};
use crate::forms::{ternary_monomials, BinaryForm, TernaryForm};
use crate::linalg::{det_exact, det_field, rank_exact, singular_values, ExactMatrix};
use crate::scalar::{Field, Rational};

/// Three binary quadratics.
#[derive(Clone, Debug, PartialEq)]
pub struct Triple<T: Field> {
    pub q: [BinaryForm<T>; 3],
}

impl<T: Field> Triple<T> {
    pub fn new(q1: BinaryForm<T>, q2: BinaryForm<T>, q3: BinaryForm<T>) -> Self {
        assert!([&q1, &q2, &q3].iter().all(|q| q.degree() == 2), "a triple needs quadratics");
        Triple { q: [q1, q2, q3] }
    }

    pub fn from_coeffs(c: &[T; 9]) -> Self {
        let q = |i: usize| BinaryForm::quadratic(c[3 * i].clone(), c[3 * i + 1].clone(), c[3 * i + 2].clone());
        Triple::new(q(0), q(1), q(2))
    }

    /// Coefficients `(a_i, b_i, c_i)` of `a x² + b xy + c y²`, three per quadratic.
    pub fn coeffs(&self) -> [T; 9] {
        std::array::from_fn(|k| self.q[k / 3].coeff(2 - k % 3).clone())
    }

    pub fn to_f64(&self) -> Triple<f64> {
        Triple {
            q: [self.q[0].to_f64(), self.q[1].to_f64(), self.q[2].to_f64()],
        }
    }

    /// Rows `q_i³ · m` for `m ∈ {x², xy, y²}` (coefficients of degree-8 forms).
    pub fn cube_span_rows(&self) -> Vec<Vec<T>> {
        let mut rows = Vec::with_capacity(9);
        for q in &self.q {
            let c = q.pow(3);
            for i in (0..=2).rev() {
                rows.push(c.mul(&BinaryForm::monomial(2, i, T::one())).coeffs().to_vec());
            }
        }
        rows
    }

    /// `q1⁴ + q2⁴ + q3⁴`
    pub fn sum_of_fourth_powers(&self) -> BinaryForm<T> {
        self.q
            .iter()
            .map(|q| q.pow(4))
            .reduce(|a, b| a.add(&b).expect("same degree"))
            .unwrap()
    }

    /// Determinant of the 3×3 coefficient matrix.
    pub fn coefficient_det(&self) -> T {
        det_field(3, &self.coeffs())
    }
}

/// Exact dimension of `span{q_i³ m}` inside `ℝ[x,y]_8`.
pub fn jacobian_image_dim(t: &Triple<Rational>) -> usize {
    rank_exact(&ExactMatrix::from_rows(t.cube_span_rows()))
}

/// Singular values (descending) of the 9×9 differential at a floating triple.
pub fn jacobian_singular_values(t: &Triple<f64>) -> Vec<f64> {
    let rows = t.cube_span_rows();
    singular_values(&DMatrix::from_fn(9, 9, |i, j| rows[i][j]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundaryClass {
    OnG,
    OffG,
    DependentTriple,
}

/// Decide whether the differential drops rank at a triple: exactly over ℚ,
/// else by the relative size of the smallest singular value.
pub fn on_boundary_hypersurface<T: Field>(t: &Triple<T>, tol: f64) -> BoundaryClass {
    let any: &dyn std::any::Any = t;
    if let Some(tq) = any.downcast_ref::<Triple<Rational>>() {
        if tq.coefficient_det().is_zero() {
            return BoundaryClass::DependentTriple;
        }
        return if jacobian_image_dim(tq) < 9 {
            BoundaryClass::OnG
        } else {
            BoundaryClass::OffG
        };
    }
    let tf = t.to_f64();
    let c = tf.coeffs();
    let scale = c.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if tf.coefficient_det().abs() <= tol * scale.powi(3) {
        return BoundaryClass::DependentTriple;
    }
    let s = jacobian_singular_values(&tf);
    if s[8] <= tol * s[0] {
        BoundaryClass::OnG
    } else {
        BoundaryClass::OffG
    }
}

/// Exact dimension of
/// `W = span{(p1³ + λ1 h³) m, (p2³ + λ2 h³) m, h³ p1, h³ p2}`, `h = λ1 p1 + λ2 p2`.
pub fn dependent_triple_tangent_dim(
    p1: &BinaryForm<Rational>,
    p2: &BinaryForm<Rational>,
    l1: &Rational,
    l2: &Rational,
) -> usize {
    let h = p1.scale(l1).add(&p2.scale(l2)).expect("quadratics");
    let h3 = h.pow(3);
    let mut rows = Vec::new();
    for (p, l) in [(p1, l1), (p2, l2)] {
        let g = p.pow(3).add(&h3.scale(l)).expect("sextics");
        for i in 0..=2 {
            rows.push(g.mul(&BinaryForm::monomial(2, i, Rational::from_integer(1.into()))).coeffs().to_vec());
        }
    }
    rows.push(h3.mul(p1).coeffs().to_vec());
    rows.push(h3.mul(p2).coeffs().to_vec());
    rank_exact(&ExactMatrix::from_rows(rows))
}

// ---------------------------------------------------------------------------
// Four-zero system.

/// Equations for a quartic in `U` vanishing doubly at three points.
#[derive(Clone, Debug)]
pub struct FourZeroSystem<T: Field> {
    pub points: [[T; 3]; 3],
    /// Lines through points (1,2), (1,3), (2,3).
    pub lines: [TernaryForm<T>; 3],
    /// `l12·l13`, `l12·l23`, `l23·l13`.
    pub quadrics: [TernaryForm<T>; 3],
    /// Columns: the nine `U` basis elements then `q1², q1q2, q1q3, q2², q2q3, q3²`;
    /// rows: the 15 quartic monomials.
    pub matrix: Vec<T>,
    pub det15: T,
    /// `det15` divided by the product of the column norms (Hadamard's bound).
    pub det15_relative: f64,
    /// Symmetric 3×3 Gram family in the basis `(q1, q2, q3)` from the adjugate column.
    pub gram_family: [[T; 3]; 3],
    pub gram_det: T,
    /// Coefficients of `t²` and `t` in `det(tI − G)`.
    pub charpoly_coeffs: [T; 2],
}

fn cross<T: Field>(p: &[T; 3], q: &[T; 3]) -> [T; 3] {
    [
        p[1].clone() * q[2].clone() - p[2].clone() * q[1].clone(),
        p[2].clone() * q[0].clone() - p[0].clone() * q[2].clone(),
        p[0].clone() * q[1].clone() - p[1].clone() * q[0].clone(),
    ]
}

fn is_negligible<T: Field>(v: &T, scale: f64) -> bool {
    if T::EXACT {
        v.is_zero()
    } else {
        v.magnitude() <= 1e-12 * scale
    }
}

/// Determinant for any field; exact fields use Bareiss through ℚ when possible.
fn det_any<T: Field>(n: usize, entries: &[T]) -> T {
    if std::any::TypeId::of::<T>() == std::any::TypeId::of::<Rational>() {
        let any: &dyn std::any::Any = &entries.to_vec();
        let q = any.downcast_ref::<Vec<Rational>>().expect("type checked");
        let m = ExactMatrix::from_rows(q.chunks(n).map(|r| r.to_vec()).collect());
        let d = det_exact(&m).expect("square");
        let any: &dyn std::any::Any = &d;
        return any.downcast_ref::<T>().expect("type checked").clone();
    }
    det_field(n, entries)
}

/// Assemble the system for three points of the projective plane.
pub fn four_zero_system<T: Field>(pts: &[[T; 3]; 3]) -> Result<FourZeroSystem<T>> {
    let scale = pts
        .iter()
        .flatten()
        .map(|v| v.magnitude())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for i in 0..3 {
        for j in i + 1..3 {
            let c = cross(&pts[i], &pts[j]);
            if c.iter().all(|v| is_negligible(v, scale * scale)) {
                return Err(Error::Degenerate(format!("points {} and {} coincide", i + 1, j + 1)));
            }
        }
    }
    let flat: Vec<T> = pts.iter().flatten().cloned().collect();
    if is_negligible(&det_field(3, &flat), scale.powi(3)) {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    let line = |i: usize, j: usize| TernaryForm::linear(cross(&pts[i], &pts[j]));
    let (l12, l13, l23) = (line(0, 1), line(0, 2), line(1, 2));
    let q1 = l12.mul(&l13);
    let q2 = l12.mul(&l23);
    let q3 = l23.mul(&l13);
    let products = [
        q1.mul(&q1),
        q1.mul(&q2),
        q1.mul(&q3),
        q2.mul(&q2),
        q2.mul(&q3),
        q3.mul(&q3),
    ];
    let u: Vec<TernaryForm<T>> = u_basis().iter().map(|b| b.map(T::from_rational)).collect();
    let columns: Vec<Vec<T>> = u
        .iter()
        .chain(products.iter())
        .map(|f| f.coeff_vector())
        .collect();
    let mut matrix = vec![T::zero(); 225];
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            matrix[i * 15 + j] = v.clone();
        }
    }
    let det15 = det_any(15, &matrix);
    let hadamard: f64 = columns
        .iter()
        .map(|c| c.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt())
        .product();
    let det15_relative = det15.to_f64().abs() / hadamard;
    // Column 2 of the adjugate: adj(i, 2) = (-1)^(i+2) det(C without row 2 and column i).
    let adj_col2 = |i: usize| -> T {
        let mut sub = Vec::with_capacity(196);
        for r in (0..15).filter(|&r| r != 2) {
            for c in (0..15).filter(|&c| c != i) {
                sub.push(matrix[r * 15 + c].clone());
            }
        }
        let d = det_any(14, &sub);
        if i % 2 == 0 {
            d
        } else {
            -d
        }
    };
    let v: Vec<T> = (9..15).map(adj_col2).collect();
    let half = T::from_rational(&crate::scalar::q(1, 2));
    let g = [
        [v[0].clone(), v[1].clone() * half.clone(), v[2].clone() * half.clone()],
        [v[1].clone() * half.clone(), v[3].clone(), v[4].clone() * half.clone()],
        [v[2].clone() * half.clone(), v[4].clone() * half.clone(), v[5].clone()],
    ];
    let gflat: Vec<T> = g.iter().flatten().cloned().collect();
    let gram_det = det_field(3, &gflat);
    let trace = g[0][0].clone() + g[1][1].clone() + g[2][2].clone();
    let minors = g[0][0].clone() * g[1][1].clone() - g[0][1].clone() * g[0][1].clone()
        + g[0][0].clone() * g[2][2].clone()
        - g[0][2].clone() * g[0][2].clone()
        + g[1][1].clone() * g[2][2].clone()
        - g[1][2].clone() * g[1][2].clone();
    Ok(FourZeroSystem {
        points: pts.clone(),
        lines: [l12, l13, l23],
        quadrics: [q1, q2, q3],
        matrix,
        det15,
        det15_relative,
        gram_family: g,
        gram_det,
        charpoly_coeffs: [-trace, minors],
    })
}

impl<T: Field> FourZeroSystem<T> {
    /// `(q1, q2, q3) G (q1, q2, q3)ᵀ` for a symmetric `G`.
    pub fn expand_gram(&self, g: &[[T; 3]; 3]) -> TernaryForm<T> {
        let mut f = TernaryForm::zero(4);
        for i in 0..3 {
            for j in 0..3 {
                let t = self.quadrics[i].mul(&self.quadrics[j]).scale(&g[i][j]);
                f = f.add(&t).expect("quartics");
            }
        }
        f
    }

    /// Rank of the 15×15 matrix (exact fields only).
    pub fn matrix_exact(&self) -> Option<ExactMatrix> {
        let any: &dyn std::any::Any = &self.matrix;
        let q = any.downcast_ref::<Vec<Rational>>()?;
        Some(ExactMatrix::from_rows(q.chunks(15).map(|r| r.to_vec()).collect()))
    }
}

/// Monomials ordering the rows of the 15×15 matrix.
pub fn quartic_monomials() -> Vec<[u32; 3]> {
    ternary_monomials(4).into_iter().map(|m| m.0).collect()
}

// ---------------------------------------------------------------------------
// Sampling the hypersurface.

/// `det(J) / det(Q)`: the factor of the differential's determinant cutting out the hypersurface.
pub fn g_factor(c: &[f64; 9]) -> f64 {
    let t = Triple::from_coeffs(c);
    let rows = t.cube_span_rows();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    det_field(9, &flat) / t.coefficient_det()
}

/// A floating triple on the hypersurface, found by bisecting a sign change of
/// [`g_factor`] along a random segment; `None` if no sign change is found.
pub fn sample_on_g(seed: u64) -> Option<Triple<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..50 {
        let base: [f64; 9] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal));
        let dir: [f64; 9] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal));
        let at = |s: f64| -> [f64; 9] { std::array::from_fn(|k| base[k] + s * dir[k]) };
        let coef_det = |s: f64| Triple::from_coeffs(&at(s)).coefficient_det();
        let steps = 64;
        let mut prev_s = -2.0;
        let mut prev = g_factor(&at(prev_s));
        for k in 1..=steps {
            let s = -2.0 + 4.0 * k as f64 / steps as f64;
            let cur = g_factor(&at(s));
            // Skip intervals where the coefficient determinant changes sign.
            if prev.signum() != cur.signum() && coef_det(prev_s).signum() == coef_det(s).signum() {
                let (mut lo, mut hi) = (prev_s, s);
                let flo = prev;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let fm = g_factor(&at(mid));
                    if fm.signum() == flo.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Some(Triple::from_coeffs(&at(0.5 * (lo + hi))));
            }
            prev = cur;
            prev_s = s;
        }
    }
    None
}
