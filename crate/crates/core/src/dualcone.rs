//! The dual slice: octic functionals identified with ternary quartics in the
//! 9-dimensional subspace `U`, and real zeros of psd ternary quartics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{ternary_monomials, BinaryForm, TernaryForm};
use crate::scalar::{q, Field, Rational};

fn fact(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// The six linear relations cutting out `U`, evaluated on a ternary quartic.
pub fn u_relations<T: Field>(f: &TernaryForm<T>) -> [T; 6] {
    let c = |e: [u32; 3]| f.coeff(e);
    let r = |n: i64, d: i64| T::from_rational(&q(n, d));
    [
        r(2, 3) * c([2, 2, 0]) - c([3, 0, 1]),
        r(3, 1) * c([1, 3, 0]) - c([2, 1, 1]),
        r(2, 3) * c([0, 2, 2]) - c([1, 0, 3]),
        r(3, 1) * c([0, 3, 1]) - c([1, 1, 2]),
        r(12, 1) * c([0, 4, 0]) - c([1, 2, 1]),
        r(6, 1) * c([0, 4, 0]) - c([2, 0, 2]),
    ]
}

/// Rows of the 6×15 relation matrix in canonical monomial order.
pub fn u_relation_matrix() -> Vec<Vec<Rational>> {
    let monos = ternary_monomials(4);
    monos
        .iter()
        .map(|m| {
            let e = TernaryForm::from_terms(4, [(m.0, Rational::from_integer(1.into()))]).unwrap();
            u_relations(&e).to_vec()
        })
        .fold(vec![Vec::new(); 6], |mut rows, col| {
            for (r, v) in rows.iter_mut().zip(col) {
                r.push(v);
            }
            rows
        })
}

pub fn in_u_exact(f: &TernaryForm<Rational>) -> bool {
    f.degree() == 4 && u_relations(f).iter().all(|v| num_traits::Zero::is_zero(v))
}

/// A basis of `U`:
/// `a²b² + ⅔a³c`, `ab³ + 3a²bc`, `b²c² + ⅔ac³`, `b³c + 3abc²`,
/// `b⁴ + 12ab²c + 6a²c²`, `a⁴`, `a³b`, `c⁴`, `bc³`.
pub fn u_basis() -> Vec<TernaryForm<Rational>> {
    let t = |terms: &[([u32; 3], i64, i64)]| {
        TernaryForm::from_terms(4, terms.iter().map(|&(e, n, d)| (e, q(n, d)))).unwrap()
    };
    vec![
        t(&[([2, 2, 0], 1, 1), ([3, 0, 1], 2, 3)]),
        t(&[([1, 3, 0], 1, 1), ([2, 1, 1], 3, 1)]),
        t(&[([0, 2, 2], 1, 1), ([1, 0, 3], 2, 3)]),
        t(&[([0, 3, 1], 1, 1), ([1, 1, 2], 3, 1)]),
        t(&[([0, 4, 0], 1, 1), ([1, 2, 1], 12, 1), ([2, 0, 2], 6, 1)]),
        t(&[([4, 0, 0], 1, 1)]),
        t(&[([3, 1, 0], 1, 1)]),
        t(&[([0, 0, 4], 1, 1)]),
        t(&[([0, 1, 3], 1, 1)]),
    ]
}

/// Weight `w` with `c_{jkl} = w · L_{2j+k}` in `⟨L, q^m⟩`, `q = a x² + b xy + c y²`.
fn eval_weight(d: u32, e: [u32; 3]) -> i64 {
    let m = d / 2;
    let i = 2 * e[0] + e[1];
    fact(i) * fact(d - i) * fact(m) / (fact(e[0]) * fact(e[1]) * fact(e[2]))
}

/// `F(a,b,c) = ⟨L, (a x² + b xy + c y²)^m⟩` for `L` of even degree `2m`.
pub fn eval_map<T: Field>(l: &BinaryForm<T>) -> TernaryForm<T> {
    let d = l.degree() as u32;
    assert!(d % 2 == 0, "eval_map needs an even-degree functional");
    let m = d / 2;
    let terms = ternary_monomials(m).into_iter().map(|mo| {
        let i = (2 * mo.0[0] + mo.0[1]) as usize;
        (mo.0, l.coeff(i).clone() * T::from_i64(eval_weight(d, mo.0)))
    });
    TernaryForm::from_terms(m, terms).expect("degrees match")
}

/// Inverse of [`eval_map`] on `U`; errors when `F ∉ U`.
///
/// For inexact fields membership is checked with relative tolerance `tol`
/// on the coefficient residual.
pub fn functional_of_quartic<T: Field>(f: &TernaryForm<T>, tol: f64) -> Result<BinaryForm<T>> {
    let m = f.degree();
    let d = 2 * m;
    // One representative monomial per x-degree i: (i/2, i mod 2, rest).
    let coeffs: Vec<T> = (0..=d)
        .map(|i| {
            let (j, k) = (i / 2, i % 2);
            let e = [j, k, m - j - k];
            f.coeff(e) / T::from_i64(eval_weight(d, e))
        })
        .collect();
    let l = BinaryForm::new(coeffs);
    let back = eval_map(&l);
    let diff = back.sub(f)?;
    let ok = if T::EXACT {
        diff.is_zero()
    } else {
        diff.max_abs() <= tol * f.max_abs().max(f64::MIN_POSITIVE)
    };
    if ok {
        Ok(l)
    } else {
        Err(Error::NotInSubspace)
    }
}

/// `⟨L, q^(m-1) · p⟩` as a ternary form of degree `m-1` in the coefficients of `q`.
fn pair_with_power_times<T: Field>(l: &BinaryForm<T>, p: &BinaryForm<T>) -> TernaryForm<T> {
    let d = l.degree() as u32;
    let m = d / 2;
    let terms = ternary_monomials(m - 1).into_iter().map(|mo| {
        let e = mo.0;
        let mult = fact(m - 1) / (fact(e[0]) * fact(e[1]) * fact(e[2]));
        let xdeg = (2 * e[0] + e[1]) as usize;
        let mono = BinaryForm::monomial(2 * (m - 1) as usize, xdeg, T::from_i64(mult));
        let prod = mono.mul(p);
        (e, prod.pairing(l))
    });
    TernaryForm::from_terms(m - 1, terms).expect("degrees match")
}

/// Both sides of `∂_u ⟨L, q⁴⟩ = 4 ⟨L, q³ (u₁x² + u₂xy + u₃y²)⟩` as ternary cubics.
pub fn derivative_identity_check<T: Field>(l: &BinaryForm<T>, u: &[T; 3]) -> (TernaryForm<T>, TernaryForm<T>) {
    let lhs = eval_map(l).directional(u);
    let uq = BinaryForm::quadratic(u[0].clone(), u[1].clone(), u[2].clone());
    let m = (l.degree() / 2) as i64;
    let rhs = pair_with_power_times(l, &uq).scale(&T::from_i64(m));
    (lhs, rhs)
}

/// `F(x², xy, y²)`.
pub fn veronese_pullback<T: Field>(f: &TernaryForm<T>) -> BinaryForm<T> {
    f.veronese_pullback()
}

/// An octic functional together with its quartic in `U`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualElement<T: Field> {
    functional: BinaryForm<T>,
    quartic: TernaryForm<T>,
}

impl<T: Field> DualElement<T> {
    pub fn from_functional(l: BinaryForm<T>) -> Self {
        let quartic = eval_map(&l);
        DualElement { functional: l, quartic }
    }

    pub fn from_quartic(f: TernaryForm<T>, tol: f64) -> Result<Self> {
        let functional = functional_of_quartic(&f, tol)?;
        Ok(DualElement { functional, quartic: f })
    }

    pub fn functional(&self) -> &BinaryForm<T> {
        &self.functional
    }

    pub fn quartic(&self) -> &TernaryForm<T> {
        &self.quartic
    }

    /// `⟨L, f⟩` for an octic `f`.
    pub fn pair(&self, f: &BinaryForm<T>) -> T {
        self.functional.pairing(f)
    }

    pub fn to_f64(&self) -> DualElement<f64> {
        DualElement {
            functional: self.functional.to_f64(),
            quartic: self.quartic.to_f64(),
        }
    }
}

// ---------------------------------------------------------------------------
// Real zeros.

/// Point of the real projective plane, unit norm, first significant coordinate positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectivePointR2 {
    pub coords: [f64; 3],
    /// Sign of `ξ₂² − 4ξ₁ξ₃` (−1, 0 or 1 at tolerance 1e-9).
    pub discriminant_sign: i8,
}

impl ProjectivePointR2 {
    pub fn new(p: [f64; 3]) -> Self {
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let mut c = [p[0] / n, p[1] / n, p[2] / n];
        if let Some(first) = c.iter().find(|v| v.abs() > 1e-9) {
            if *first < 0.0 {
                c = [-c[0], -c[1], -c[2]];
            }
        }
        for v in c.iter_mut() {
            if *v == 0.0 {
                *v = 0.0; // normalize -0.0
            }
        }
        let disc = c[1] * c[1] - 4.0 * c[0] * c[2];
        let discriminant_sign = if disc > 1e-9 {
            1
        } else if disc < -1e-9 {
            -1
        } else {
            0
        };
        ProjectivePointR2 { coords: c, discriminant_sign }
    }

    /// Chordal distance between projective points.
    pub fn distance(&self, other: &Self) -> f64 {
        let d = |s: f64| {
            (0..3)
                .map(|i| (self.coords[i] - s * other.coords[i]).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        d(1.0).min(d(-1.0))
    }

    /// The quadratic form `ξ₁x² + ξ₂xy + ξ₃y²`.
    pub fn quadratic(&self) -> BinaryForm<f64> {
        BinaryForm::quadratic(self.coords[0], self.coords[1], self.coords[2])
    }
}

/// Real zeros of a psd ternary quartic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSet {
    pub points: Vec<ProjectivePointR2>,
    /// Set when the zero set is judged infinite (a curve of zeros).
    pub infinite: bool,
}

struct Quartic {
    terms: Vec<([u32; 3], f64)>,
}

impl Quartic {
    fn new(f: &TernaryForm<f64>) -> Self {
        Quartic {
            terms: f.terms().map(|(m, c)| (m.0, *c)).collect(),
        }
    }

    fn value(&self, p: &[f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32))
            .sum()
    }

    /// Value, gradient and Hessian.
    fn derivs(&self, p: &[f64; 3]) -> (f64, [f64; 3], [[f64; 3]; 3]) {
        let pw = |v: f64, k: i32| if k < 0 { 0.0 } else { v.powi(k) };
        let mut val = 0.0;
        let mut g = [0.0; 3];
        let mut h = [[0.0; 3]; 3];
        for (e, c) in &self.terms {
            let e = [e[0] as i32, e[1] as i32, e[2] as i32];
            let mono = |d: [i32; 3]| -> f64 {
                let mut coef = *c;
                let mut v = 1.0;
                for k in 0..3 {
                    let mut f = 1.0;
                    for t in 0..d[k] {
                        f *= (e[k] - t) as f64;
                    }
                    coef *= f;
                    v *= pw(p[k], e[k] - d[k]);
                }
                coef * v
            };
            val += mono([0, 0, 0]);
            for i in 0..3 {
                let mut d = [0; 3];
                d[i] = 1;
                g[i] += mono(d);
                for j in 0..3 {
                    let mut d = [0; 3];
                    d[i] += 1;
                    d[j] += 1;
                    h[i][j] += mono(d);
                }
            }
        }
        (val, g, h)
    }
}

fn normalize(p: [f64; 3]) -> [f64; 3] {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

fn tangent_basis(x: &[f64; 3]) -> [[f64; 3]; 2] {
    let k = (0..3)
        .min_by(|&i, &j| x[i].abs().partial_cmp(&x[j].abs()).unwrap())
        .unwrap();
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let d: f64 = (0..3).map(|i| e[i] * x[i]).sum();
    let e1 = normalize([e[0] - d * x[0], e[1] - d * x[1], e[2] - d * x[2]]);
    let e2 = [
        x[1] * e1[2] - x[2] * e1[1],
        x[2] * e1[0] - x[0] * e1[2],
        x[0] * e1[1] - x[1] * e1[0],
    ];
    [e1, e2]
}

/// Damped Riemannian Newton minimization of a quartic on the unit sphere.
fn minimize_on_sphere(f: &Quartic, start: [f64; 3], iters: usize) -> [f64; 3] {
    let mut x = normalize(start);
    let mut fx = f.value(&x);
    let mut mu = 1e-3 * f.terms.iter().map(|t| t.1.abs()).fold(0.0, f64::max);
    for _ in 0..iters {
        let (val, g, h) = f.derivs(&x);
        let basis = tangent_basis(&x);
        let radial: f64 = (0..3).map(|i| x[i] * g[i]).sum();
        let mut rg = [0.0; 2];
        let mut rh = [[0.0; 2]; 2];
        for a in 0..2 {
            rg[a] = (0..3).map(|i| basis[a][i] * g[i]).sum();
            for b in 0..2 {
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        s += basis[a][i] * h[i][j] * basis[b][j];
                    }
                }
                rh[a][b] = s - if a == b { radial } else { 0.0 };
            }
        }
        let gnorm = (rg[0] * rg[0] + rg[1] * rg[1]).sqrt();
        if gnorm == 0.0 || val == 0.0 {
            break;
        }
        let mut accepted = false;
        for _ in 0..30 {
            let a00 = rh[0][0] + mu;
            let a11 = rh[1][1] + mu;
            let a01 = rh[0][1];
            let det = a00 * a11 - a01 * a01;
            if !(det > 0.0 && a00 > 0.0) {
                mu = (mu * 10.0).max(1e-12);
                continue;
            }
            let s0 = -(a11 * rg[0] - a01 * rg[1]) / det;
            let s1 = -(a00 * rg[1] - a01 * rg[0]) / det;
            let cand = normalize([
                x[0] + s0 * basis[0][0] + s1 * basis[1][0],
                x[1] + s0 * basis[0][1] + s1 * basis[1][1],
                x[2] + s0 * basis[0][2] + s1 * basis[1][2],
            ]);
            let fc = f.value(&cand);
            if fc <= fx {
                let step = (s0 * s0 + s1 * s1).sqrt();
                x = cand;
                fx = fc;
                mu = (mu / 10.0).max(1e-300);
                accepted = true;
                if step < 1e-15 {
                    return x;
                }
                break;
            }
            mu *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    x
}

/// Starting points: a `grid_size × grid_size` grid on the upper hemisphere
/// plus a small deterministic random jitter.
fn sphere_grid(grid_size: usize) -> Vec<[f64; 3]> {
    let n = grid_size.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        let z = (i as f64 + 0.5) / n as f64; // cos of polar angle in (0, 1)
        let r = (1.0 - z * z).sqrt();
        for j in 0..n {
            let phi = 2.0 * std::f64::consts::PI * (j as f64 + rng.gen::<f64>() * 0.5) / n as f64;
            pts.push([r * phi.cos(), r * phi.sin(), z]);
        }
    }
    pts
}

/// Real zeros of a psd ternary quartic: local minima on the sphere from
/// `grid_size²` starts with value at most `tol · ‖F‖`, clustered at chordal radius 1e-4.
pub fn real_zeros_quartic(f: &TernaryForm<f64>, tol: f64, grid_size: usize) -> ZeroSet {
    let norm = f.coef_norm();
    if norm == 0.0 {
        return ZeroSet { points: Vec::new(), infinite: true };
    }
    let quartic = Quartic::new(f);
    let thresh = tol * norm;
    let mut found: Vec<ProjectivePointR2> = sphere_grid(grid_size)
        .into_iter()
        .map(|s| minimize_on_sphere(&quartic, s, 200))
        .filter(|p| quartic.value(p) <= thresh)
        .map(ProjectivePointR2::new)
        .collect();
    found.sort_by(|a, b| a.coords.partial_cmp(&b.coords).unwrap());
    let mut clusters: Vec<ProjectivePointR2> = Vec::new();
    for p in found {
        if !clusters.iter().any(|c| c.distance(&p) < 1e-4) {
            clusters.push(p);
        }
    }
    let mut infinite = clusters.len() > 8;
    // A line of zeros: the quartic also vanishes between two zeros.
    if !infinite {
        'outer: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let (p, q) = (clusters[i].coords, clusters[j].coords);
                for s in [1.0, -1.0] {
                    let probes = [
                        normalize([p[0] + s * q[0], p[1] + s * q[1], p[2] + s * q[2]]),
                        normalize([p[0] + 2.0 * s * q[0], p[1] + 2.0 * s * q[1], p[2] + 2.0 * s * q[2]]),
                    ];
                    if probes.iter().all(|m| quartic.value(m) <= thresh) {
                        infinite = true;
                        break 'outer;
                    }
                }
            }
        }
    }
    if clusters.len() == 1 && !infinite {
        // A single zero could still sit on a degenerate curve; probe along the
        // directions of the Hessian kernel.
        let p = clusters[0].coords;
        let (_, _, h) = quartic.derivs(&p);
        let basis = tangent_basis(&p);
        for e in basis {
            let he: f64 = (0..3).map(|i| (0..3).map(|j| e[i] * h[i][j] * e[j]).sum::<f64>()).sum();
            if he.abs() <= tol.sqrt() * norm {
                let probe = normalize([p[0] + 0.3 * e[0], p[1] + 0.3 * e[1], p[2] + 0.3 * e[2]]);
                let refined = minimize_on_sphere(&quartic, probe, 200);
                if quartic.value(&refined) <= thresh
                    && ProjectivePointR2::new(refined).distance(&clusters[0]) > 1e-2
                {
                    infinite = true;
                }
            }
        }
    }
    ZeroSet { points: clusters, infinite }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn basis_in_u() {
        let b = u_basis();
        assert_eq!(b.len(), 9);
        for f in &b {
            assert!(in_u_exact(f));
        }
    }

    #[test]
    fn eval_of_x8() {
        let x8 = BinaryForm::monomial(8, 8, qi(1));
        let f = eval_map(&x8);
        assert_eq!(f, TernaryForm::from_terms(4, [([4, 0, 0], qi(40320))]).unwrap());
        assert!(eval_map(&BinaryForm::<Rational>::zero(8)).is_zero());
    }

    #[test]
    fn round_trip() {
        let l = BinaryForm::from_i64s(&[3, -1, 4, 1, -5, 9, 2, -6, 5]);
        let f = eval_map(&l);
        assert!(in_u_exact(&f));
        assert_eq!(functional_of_quartic(&f, 0.0).unwrap(), l);
        let bad = TernaryForm::from_terms(4, [([2, 2, 0], qi(1))]).unwrap();
        assert_eq!(functional_of_quartic(&bad, 0.0), Err(Error::NotInSubspace));
    }

    #[test]
    fn evaluation_equals_pairing() {
        let l = BinaryForm::from_i64s(&[1, 2, -3, 0, 5, 1, -1, 7, 2]);
        let f = eval_map(&l);
        let (a, b, c) = (qi(2), qi(-3), qi(5));
        let qq = BinaryForm::quadratic(a.clone(), b.clone(), c.clone()).pow(4);
        assert_eq!(f.eval(&[a, b, c]), l.pairing(&qq));
    }

    #[test]
    fn relation_matrix_shape() {
        let m = u_relation_matrix();
        assert_eq!(m.len(), 6);
        assert!(m.iter().all(|r| r.len() == 15));
    }

    #[test]
    fn zeros_of_gram_example() {
        // x(x+z), xy, z(x+z), yz basis in (a, b, c)
        let a = TernaryForm::<f64>::var(0);
        let b = TernaryForm::<f64>::var(1);
        let c = TernaryForm::<f64>::var(2);
        let apc = a.add(&c).unwrap();
        let v = [a.mul(&apc), a.mul(&b), c.mul(&apc), b.mul(&c)];
        let g = [[2.0, 0.0, -1.0, 0.0], [0.0, 3.0, 0.0, 0.0], [-1.0, 0.0, 2.0, 0.0], [0.0, 0.0, 0.0, 3.0]];
        let mut f = TernaryForm::zero(4);
        for i in 0..4 {
            for j in 0..4 {
                f = f.add(&v[i].mul(&v[j]).scale(&g[i][j])).unwrap();
            }
        }
        let z = real_zeros_quartic(&f, 1e-12, 20);
        assert!(!z.infinite);
        assert_eq!(z.points.len(), 2);
        let want = [ProjectivePointR2::new([0.0, 1.0, 0.0]), ProjectivePointR2::new([1.0, 0.0, -1.0])];
        for w in want {
            assert!(z.points.iter().any(|p| p.distance(&w) < 1e-6));
        }
    }

    #[test]
    fn line_of_zeros() {
        let f = TernaryForm::from_terms(4, [([4, 0, 0], 40320.0)]).unwrap();
        assert!(real_zeros_quartic(&f, 1e-12, 12).infinite);
    }
}
