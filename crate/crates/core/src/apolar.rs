//! Catalecticants and apolar ideals of binary forms.

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{as_power_of_linear, BinaryForm};
use crate::linalg::{det_exact, kernel_exact, rank_exact, ExactMatrix};
use crate::scalar::{Field, Rational};

/// The two generators of the apolar ideal of a binary form.
#[derive(Clone, Debug, PartialEq)]
pub struct ApolarIdeal {
    pub gen_low: BinaryForm<Rational>,
    pub gen_high: BinaryForm<Rational>,
}

impl ApolarIdeal {
    pub fn degrees(&self) -> (usize, usize) {
        (self.gen_low.degree(), self.gen_high.degree())
    }
}

fn falling(n: usize, k: usize) -> i64 {
    ((n - k + 1) as i64..=n as i64).product()
}

/// Row-major entries of the matrix of `g ↦ <g, L>` from degree `k` to degree `D − k`.
/// Column `i` is the monomial `x^i y^(k-i)`, row `j` the coefficient of `x^j y^(D-k-j)`.
pub fn catalecticant_entries<T: Field>(l: &BinaryForm<T>, k: usize) -> Result<Vec<T>> {
    let d = l.degree();
    if k > d {
        return Err(Error::OutOfRange(format!("catalecticant index {k} exceeds degree {d}")));
    }
    let (rows, cols) = (d - k + 1, k + 1);
    let mut out = vec![T::zero(); rows * cols];
    for j in 0..rows {
        for i in 0..cols {
            let c = l.coeff(i + j);
            if c.is_zero() {
                continue;
            }
            let w = falling(i + j, i) * falling(d - i - j, k - i);
            out[j * cols + i] = c.clone() * T::from_i64(w);
        }
    }
    Ok(out)
}

/// Exact catalecticant of `L` in degree `k`; its kernel is `(L^⊥)_k`.
pub fn catalecticant(l: &BinaryForm<Rational>, k: usize) -> Result<ExactMatrix> {
    let e = catalecticant_entries(l, k)?;
    let cols = k + 1;
    Ok(ExactMatrix::from_rows(e.chunks(cols).map(|r| r.to_vec()).collect()))
}

pub fn catalecticant_f64(l: &BinaryForm<f64>, k: usize) -> Result<DMatrix<f64>> {
    let e = catalecticant_entries(l, k)?;
    Ok(DMatrix::from_row_slice(l.degree() - k + 1, k + 1, &e))
}

/// Basis of `(L^⊥)_k` as forms, ordered by descending x-degree of the free monomial.
/// For `k > deg L` this is every monomial of degree `k`.
pub fn apolar_kernel(l: &BinaryForm<Rational>, k: usize) -> Vec<BinaryForm<Rational>> {
    if k > l.degree() {
        return (0..=k)
            .rev()
            .map(|i| BinaryForm::monomial(k, i, Rational::from_integer(1.into())))
            .collect();
    }
    let m = catalecticant(l, k).expect("k in range");
    let mut basis: Vec<BinaryForm<Rational>> =
        kernel_exact(&m).into_iter().map(BinaryForm::new).collect();
    basis.reverse();
    basis
}

/// Coefficient vectors of `g · m` for every monomial `m` of degree `e`.
fn multiples(g: &BinaryForm<Rational>, e: usize) -> Vec<Vec<Rational>> {
    (0..=e)
        .map(|i| {
            g.mul(&BinaryForm::monomial(e, i, Rational::from_integer(1.into())))
                .coeffs()
                .to_vec()
        })
        .collect()
}

/// The complete-intersection generators of `L^⊥` for a nonzero exact binary form.
pub fn apolar_ideal(l: &BinaryForm<Rational>) -> Result<ApolarIdeal> {
    if l.is_zero() {
        return Err(Error::Input("apolar ideal of the zero form".into()));
    }
    let d = l.degree();
    let (d1, gen_low) = (1..=d + 1)
        .find_map(|k| apolar_kernel(l, k).into_iter().next().map(|g| (k, g)))
        .expect("(L^⊥)_{D+1} is everything");
    let d2 = d + 2 - d1;
    let base = multiples(&gen_low, d2 - d1);
    let base_rank = rank_exact(&ExactMatrix::from_rows(base.clone()));
    let gen_high = apolar_kernel(l, d2)
        .into_iter()
        .find(|cand| {
            let mut rows = base.clone();
            rows.push(cand.coeffs().to_vec());
            rank_exact(&ExactMatrix::from_rows(rows)) > base_rank
        })
        .ok_or_else(|| Error::Numerical("no second generator found".into()))?;
    Ok(ApolarIdeal { gen_low, gen_high })
}

/// Sylvester resultant of two binary forms (as homogeneous forms).
pub fn resultant(f: &BinaryForm<Rational>, g: &BinaryForm<Rational>) -> Rational {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    if size == 0 {
        return Rational::from_integer(1.into());
    }
    let mut s = ExactMatrix::zeros(size, size);
    // Descending coefficient order in x, one shifted copy per row.
    for r in 0..n {
        for i in 0..=m {
            s.set(r, r + i, f.coeff(m - i).clone());
        }
    }
    for r in 0..m {
        for i in 0..=n {
            s.set(n + r, r + i, g.coeff(n - i).clone());
        }
    }
    det_exact(&s).expect("square")
}

/// Hilbert function of `R/(g1, g2)` for a regular sequence of binary forms.
pub fn hilbert_function_ci(g1: &BinaryForm<Rational>, g2: &BinaryForm<Rational>) -> Result<Vec<usize>> {
    if g1.is_zero() || g2.is_zero() || resultant(g1, g2).is_zero() {
        return Err(Error::CommonFactor);
    }
    let top = g1.degree() + g2.degree() - 2;
    let mut out = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let mut rows = Vec::new();
        for g in [g1, g2] {
            if g.degree() <= d {
                rows.extend(multiples(g, d - g.degree()));
            }
        }
        let r = if rows.is_empty() {
            0
        } else {
            rank_exact(&ExactMatrix::from_rows(rows))
        };
        out.push(d + 1 - r);
    }
    Ok(out)
}

/// A linear form `l` with `l³ ∈ (L^⊥)_3`, if one exists.
///
/// `(L^⊥)_3` is `gen_low · R_{3-d1}` when the low generator has degree `d1 ≤ 3`,
/// so a cube lies in it exactly when `gen_low` is itself a power of a linear form.
pub fn cube_divisor_witness(l: &BinaryForm<Rational>) -> Option<BinaryForm<Rational>> {
    if l.is_zero() {
        return Some(BinaryForm::x());
    }
    let ideal = apolar_ideal(l).ok()?;
    let (d1, d2) = ideal.degrees();
    if d1 > 3 {
        return None;
    }
    if d1 == 3 && d2 == 3 {
        // Both generators live in degree 3: scan the pencil for a cube.
        return cube_in_pencil(&ideal.gen_low, &ideal.gen_high);
    }
    if d1 == 1 {
        return Some(ideal.gen_low);
    }
    as_power_of_linear(&ideal.gen_low, 0.0)
}

/// Cubes in the pencil `s·g + t·h` of binary cubics (exact).
fn cube_in_pencil(g: &BinaryForm<Rational>, h: &BinaryForm<Rational>) -> Option<BinaryForm<Rational>> {
    if let Some(l) = as_power_of_linear(h, 0.0) {
        return Some(l);
    }
    // A cubic is a cube iff its Hessian vanishes; the Hessian of g + t h is a
    // quadratic in t with quadratic-form coefficients, so collect the common
    // roots of its three coefficient polynomials in t.
    let cand = pencil_cube_parameters(g, h);
    cand.into_iter().find_map(|t| {
        let f = g.add(&h.scale(&t)).ok()?;
        as_power_of_linear(&f, 0.0)
    })
}

/// Rational parameters `t` where `g + t h` may be a perfect cube.
fn pencil_cube_parameters(g: &BinaryForm<Rational>, h: &BinaryForm<Rational>) -> Vec<Rational> {
    // Normalized coefficients a_i = f_i / C(3, i); cube iff the 2x3 Hankel matrix has rank 1,
    // i.e. a0 a2 - a1^2 = a1 a3 - a2^2 = a0 a3 - a1 a2 = 0.
    let norm = |f: &BinaryForm<Rational>| -> Vec<Rational> {
        [1, 3, 3, 1]
            .iter()
            .enumerate()
            .map(|(i, b)| f.coeff(i) / Rational::from_integer((*b).into()))
            .collect()
    };
    let (a, b) = (norm(g), norm(h));
    // Each minor is p0 + p1 t + p2 t^2.
    let minor = |i: usize, j: usize, k: usize, l: usize| -> [Rational; 3] {
        [
            &a[i] * &a[j] - &a[k] * &a[l],
            &a[i] * &b[j] + &b[i] * &a[j] - &a[k] * &b[l] - &b[k] * &a[l],
            &b[i] * &b[j] - &b[k] * &b[l],
        ]
    };
    let minors = [minor(0, 2, 1, 1), minor(1, 3, 2, 2), minor(0, 3, 1, 2)];
    let mut roots = Vec::new();
    for m in &minors {
        let poly = vec![m[0].clone(), m[1].clone(), m[2].clone()];
        roots.extend(rational_roots_quadratic(&poly));
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Rational roots of `p0 + p1 t + p2 t^2`.
fn rational_roots_quadratic(p: &[Rational]) -> Vec<Rational> {
    use num_traits::Signed;
    if p[2].is_zero() {
        if p[1].is_zero() {
            return Vec::new();
        }
        return vec![-p[0].clone() / p[1].clone()];
    }
    let disc = &p[1] * &p[1] - Rational::from_integer(4.into()) * &p[0] * &p[2];
    if disc.is_negative() {
        return Vec::new();
    }
    let (n, d) = (disc.numer().clone(), disc.denom().clone());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &sn * &sn != n || &sd * &sd != d {
        return Vec::new();
    }
    let s = Rational::new(sn, sd);
    let two = Rational::from_integer(2.into()) * &p[2];
    vec![(-&p[1] + &s) / &two, (-&p[1] - s) / two]
}

/// Floating variant: decides whether `(L^⊥)_3` contains a cube using numeric
/// kernels with relative tolerance `tol`.
pub fn cube_divisor_witness_f64(l: &BinaryForm<f64>, tol: f64) -> Option<BinaryForm<f64>> {
    let kernel = |k: usize| -> Vec<Vec<f64>> {
        let m = catalecticant_f64(l, k).expect("k ≤ 8");
        numeric_kernel(&m, tol)
    };
    for k in 1..=3 {
        let ker = kernel(k);
        if ker.is_empty() {
            continue;
        }
        if k == 1 {
            return Some(BinaryForm::new(ker[0].clone()));
        }
        for v in &ker {
            if let Some(lin) = as_power_of_linear(&BinaryForm::new(v.clone()), tol.sqrt()) {
                return Some(lin);
            }
        }
        return None;
    }
    None
}

/// Orthonormal basis of the numerical right kernel (singular values ≤ tol·σ_max).
pub fn numeric_kernel(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let (r, c) = m.shape();
    // Pad to square so the SVD exposes the full right singular basis.
    let mut a = DMatrix::zeros(r.max(c), c);
    a.view_mut((0, 0), (r, c)).copy_from(m);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut out = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= tol * top.max(1e-300) {
            out.push(vt.row(i).iter().copied().collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn mono(d: usize, i: usize) -> BinaryForm<Rational> {
        BinaryForm::monomial(d, i, qi(1))
    }

    #[test]
    fn catalecticant_kernels() {
        let x8 = mono(8, 8);
        assert_eq!(apolar_kernel(&x8, 1), vec![mono(1, 0)]);
        let x4y4 = mono(8, 4);
        assert!(apolar_kernel(&x4y4, 4).is_empty());
        let k5 = apolar_kernel(&x4y4, 5);
        assert_eq!(k5, vec![mono(5, 5), mono(5, 0)]);
        let zero = BinaryForm::<Rational>::zero(8);
        assert_eq!(apolar_kernel(&zero, 3).len(), 4);
        assert!(catalecticant(&x8, 9).is_err());
    }

    #[test]
    fn ideals_of_monomials() {
        let i = apolar_ideal(&mono(8, 8)).unwrap();
        assert_eq!((i.gen_low.clone(), i.gen_high.clone()), (mono(1, 0), mono(9, 9)));
        let i = apolar_ideal(&mono(8, 4)).unwrap();
        assert_eq!((i.gen_low.clone(), i.gen_high.clone()), (mono(5, 5), mono(5, 0)));
        assert!(apolar_ideal(&BinaryForm::zero(8)).is_err());
    }

    #[test]
    fn hilbert_functions() {
        let l1 = BinaryForm::linear(qi(1), qi(2));
        let l2 = BinaryForm::linear(qi(-1), qi(3));
        assert_eq!(hilbert_function_ci(&l1.pow(3), &l2.pow(3)).unwrap(), vec![1, 2, 3, 2, 1]);
        assert_eq!(hilbert_function_ci(&l1, &l2).unwrap(), vec![1]);
        assert_eq!(hilbert_function_ci(&l1.pow(2), &l1.mul(&l2)), Err(Error::CommonFactor));
    }

    #[test]
    fn cube_witnesses() {
        assert_eq!(cube_divisor_witness(&mono(8, 8)), Some(mono(1, 0)));
        assert_eq!(cube_divisor_witness(&mono(8, 4)), None);
        let l = BinaryForm::linear(qi(1), qi(1)).pow(8);
        let w = cube_divisor_witness(&l).unwrap();
        assert!(w.apolar(&l).is_zero());
    }

    #[test]
    fn float_witness_matches_exact() {
        assert!(cube_divisor_witness_f64(&mono(8, 8).to_f64(), 1e-10).is_some());
        assert!(cube_divisor_witness_f64(&mono(8, 4).to_f64(), 1e-10).is_none());
    }
}
