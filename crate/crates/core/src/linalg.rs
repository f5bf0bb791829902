//! Dense exact linear algebra over the rationals and a small symmetric
//! eigensolver for doubles.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

/// Row-major dense matrix of rationals.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Submatrix with one row and one column removed.
    pub fn minor_matrix(&self, skip_row: usize, skip_col: usize) -> Self {
        let rows = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| j != skip_col)
                    .map(|j| self.get(i, j).clone())
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64())
    }

    /// Integer matrix whose rows are positive multiples of ours, and the product of the multipliers.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let l = self
                    .row(i)
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                scale *= &l;
                self.row(i)
                    .iter()
                    .map(|v| v.numer() * (&l / v.denom()))
                    .collect()
            })
            .collect();
        (rows, scale)
    }
}

/// Fraction-free (Bareiss) forward elimination in place; returns the rank and
/// the sign of the row permutation applied.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, i32) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut sign = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        // Columns left of c in rows below r are already zero; columns between the
        // previous pivot and c were zero for all rows ≥ r, so the quotient stays exact.
        prev = a[r][c].clone();
        r += 1;
    }
    (r, sign)
}

/// Rank over ℚ by fraction-free elimination.
pub fn rank_exact(m: &ExactMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let (mut a, _) = if m.rows <= m.cols {
        m.integer_rows()
    } else {
        m.transpose().integer_rows()
    };
    let cols = a[0].len();
    bareiss(&mut a, cols).0
}

/// Exact determinant by Bareiss elimination.
pub fn det_exact(m: &ExactMatrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut a, scale) = m.integer_rows();
    let (rank, sign) = bareiss(&mut a, n);
    if rank < n {
        return Ok(Rational::zero());
    }
    let d = a[n - 1][n - 1].clone() * BigInt::from(sign);
    Ok(Rational::new(d, scale))
}

/// Reduced row echelon form over ℚ; returns the pivot columns.
pub fn rref(m: &ExactMatrix) -> (ExactMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a.get(r, c).recip();
        for j in c..a.cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..a.cols {
                let v = a.get(i, j) - &f * a.get(r, j);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of the right kernel: one vector per free column (ascending), with a 1
/// in that column and the reduced-echelon entries elsewhere.
pub fn kernel_exact(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            v
        })
        .collect()
}

/// Solve `M x = b` exactly; `None` if inconsistent. Free variables are set to zero.
pub fn solve_exact(m: &ExactMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows);
    let mut aug = ExactMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, b[i].clone());
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, m.cols).clone();
    }
    Some(x)
}

/// Coefficients of `det(tI − M)`, ascending in `t` (the last entry is 1), via Faddeev–LeVerrier.
pub fn char_poly_exact(m: &ExactMatrix) -> Result<Vec<Rational>> {
    if m.rows != m.cols {
        return Err(Error::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = ExactMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = M·M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(M M_k)/k
        let mut next = m.mul(&mk)?;
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        let am = m.mul(&next)?;
        let tr = (0..n).fold(Rational::zero(), |acc, i| acc + am.get(i, i));
        coeffs[n - k] = -tr / Rational::from_integer(BigInt::from(k));
        mk = next;
    }
    Ok(coeffs)
}

/// Determinant over any field by Gaussian elimination with largest-magnitude pivoting.
pub fn det_field<T: Field>(n: usize, entries: &[T]) -> T {
    assert_eq!(entries.len(), n * n);
    let mut a = entries.to_vec();
    let mut det = T::one();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| {
                a[i * n + c]
                    .magnitude()
                    .partial_cmp(&a[j * n + c].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(j.cmp(&i))
            })
            .unwrap();
        if a[p * n + c].is_zero() {
            return T::zero();
        }
        if p != c {
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
            }
            det = -det;
        }
        let piv = a[c * n + c].clone();
        det = det * piv.clone();
        for i in c + 1..n {
            let f = a[i * n + c].clone() / piv.clone();
            if f.is_zero() {
                continue;
            }
            for j in c + 1..n {
                a[i * n + j] = a[i * n + j].clone() - f.clone() * a[c * n + j].clone();
            }
        }
    }
    det
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Number of singular values above `tol · σ_max`.
pub fn numeric_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > tol * top).count()
}

// ---------------------------------------------------------------------------
// Symmetric matrices.

/// Symmetric matrix of doubles, stored as its packed upper triangle.
#[derive(Clone, PartialEq, Debug)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Symmetric part of a dense row-major square matrix.
    pub fn from_dense(n: usize, a: &[f64]) -> Self {
        assert_eq!(a.len(), n * n);
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, 0.5 * (a[i * n + j] + a[j * n + i]));
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_dense(n, &flat)
    }

    /// `v vᵀ`
    pub fn outer(v: &[f64]) -> Self {
        let mut m = Self::zeros(v.len());
        for i in 0..v.len() {
            for j in i..v.len() {
                m.set(i, j, v[i] * v[j]);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = self.get(i, j);
            }
        }
        a
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut s = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                s.set(i, j, 0.5 * (m[(i, j)] + m[(j, i)]));
            }
        }
        s
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        let mut s = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let w = if i == j { 1.0 } else { 2.0 };
                s += w * self.get(i, j) * other.get(i, j);
            }
        }
        s
    }

    pub fn frobenius(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = eigen_sym(self, 1e-14)?;
        Ok(vals.first().copied().unwrap_or(0.0))
    }
}

/// Eigen-decomposition by cyclic Jacobi rotations. Returns eigenvalues in
/// ascending order and the matching orthonormal eigenvectors (as rows).
pub fn eigen_sym(m: &SymMatrix, tol: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.n;
    let mut a = m.to_dense();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = m.frobenius();
    let target = (tol * norm).max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let vals = order.iter().map(|&i| a[i * n + i]).collect();
    let vecs = order
        .iter()
        .map(|&j| (0..n).map(|k| v[k * n + j]).collect())
        .collect();
    Ok((vals, vecs))
}

/// Coefficients of `det(tI − M)` (ascending) from the eigenvalues.
pub fn char_poly_sym(m: &SymMatrix) -> Result<Vec<f64>> {
    let (vals, _) = eigen_sym(m, 1e-15)?;
    let mut c = vec![1.0];
    for l in vals {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= l * ci;
        }
        c = next;
    }
    Ok(c)
}

/// Exact psd test for a symmetric rational matrix: all coefficients of
/// `det(tI + M)` are nonnegative (Descartes' rule on a real-rooted polynomial).
pub fn is_psd_exact(m: &ExactMatrix) -> Result<bool> {
    let neg = ExactMatrix {
        rows: m.rows,
        cols: m.cols,
        data: m.data.iter().map(|v| -v.clone()).collect(),
    };
    let cp = char_poly_exact(&neg)?;
    Ok(cp.iter().all(|c| !c.is_negative()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn small_determinants() {
        assert_eq!(det_exact(&ExactMatrix::from_i64(&[&[1, 2], &[3, 4]])).unwrap(), qi(-2));
        assert_eq!(det_exact(&ExactMatrix::from_i64(&[&[1, 2], &[2, 4]])).unwrap(), qi(0));
        let m = ExactMatrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]]);
        assert_eq!(det_exact(&m).unwrap(), q(1, 10) - q(1, 12));
        assert_eq!(
            det_exact(&ExactMatrix::zeros(2, 3)),
            Err(Error::NotSquare(2, 3))
        );
    }

    #[test]
    fn pivoting_needed() {
        let m = ExactMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(det_exact(&m).unwrap(), qi(-2));
        assert_eq!(rank_exact(&m), 3);
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_exact(&ExactMatrix::identity(9)), 9);
        assert_eq!(rank_exact(&ExactMatrix::zeros(4, 5)), 0);
        let m = ExactMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1], &[1, 2, 4]]);
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rank_exact(&m.transpose()), 2);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = ExactMatrix::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = kernel_exact(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn faddeev_leverrier() {
        let m = ExactMatrix::from_i64(&[&[2, 0, -1, 0], &[0, 3, 0, 0], &[-1, 0, 2, 0], &[0, 0, 0, 3]]);
        // (t-3)^2 (t^2 - 4t + 3) = t^4 - 10t^3 + 36t^2 - 54t + 27
        let cp = char_poly_exact(&m).unwrap();
        assert_eq!(cp, vec![qi(27), qi(-54), qi(36), qi(-10), qi(1)]);
        assert!(is_psd_exact(&m).unwrap());
        let bad = ExactMatrix::from_i64(&[&[1, 2], &[2, 1]]);
        assert!(!is_psd_exact(&bad).unwrap());
    }

    #[test]
    fn jacobi_basics() {
        let (vals, _) = eigen_sym(&SymMatrix::diag(&[3.0, 1.0, 2.0]), 1e-14).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
        let g = SymMatrix::from_rows(&[
            vec![2.0, 0.0, -1.0, 0.0],
            vec![0.0, 3.0, 0.0, 0.0],
            vec![-1.0, 0.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0, 3.0],
        ]);
        let (vals, _) = eigen_sym(&g, 1e-14).unwrap();
        for (a, b) in vals.iter().zip([1.0, 3.0, 3.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let v = [1.0, -2.0, 0.5];
        let (vals, _) = eigen_sym(&SymMatrix::outer(&v), 1e-14).unwrap();
        assert!((vals[2] - 5.25).abs() < 1e-12);
        assert!(vals[0].abs() < 1e-12 && vals[1].abs() < 1e-12);
        let mut bad = SymMatrix::zeros(2);
        bad.set(0, 1, f64::NAN);
        assert_eq!(eigen_sym(&bad, 1e-12), Err(Error::NonFinite));
    }

    #[test]
    fn det_field_matches_exact() {
        let m = ExactMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        let f: Vec<f64> = m.data.iter().map(|v| v.to_f64()).collect();
        assert!((det_field(3, &f) + 2.0).abs() < 1e-12);
        assert_eq!(det_field(3, &m.data), qi(-2));
    }
}
