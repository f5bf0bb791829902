//! A small dense semidefinite solver (homogeneous self-dual embedding,
//! Nesterov–Todd scaling, Mehrotra predictor–corrector).
//!
//! Primal: minimize `⟨C, X⟩` subject to `⟨A_i, X⟩ = b_i`, `X ⪰ 0`.
//! Dual: maximize `bᵀy` subject to `Σ y_i A_i + S = C`, `S ⪰ 0`.

use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::dualcone::{eval_map, functional_of_quartic, u_relation_matrix, DualElement};
use crate::error::{Error, Result};
use crate::forms::{binomial, ternary_monomials, BinaryForm, TernaryForm};
use crate::linalg::{is_psd_exact, rref, solve_exact, ExactMatrix, SymMatrix};
use crate::scalar::{f64_to_rational, rational_to_f64, rationalize, Rational};

#[derive(Clone, Debug)]
pub struct SdpProblem {
    n: usize,
    c: SymMatrix,
    constraints: Vec<(SymMatrix, f64)>,
}

impl SdpProblem {
    pub fn new(c: SymMatrix) -> Self {
        SdpProblem {
            n: c.n(),
            c,
            constraints: Vec::new(),
        }
    }

    /// Add `⟨a, X⟩ = b`.
    pub fn add_constraint(&mut self, a: SymMatrix, b: f64) -> Result<()> {
        if a.n() != self.n {
            return Err(Error::Dimension(format!("constraint of size {} in a problem of size {}", a.n(), self.n)));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite);
        }
        self.constraints.push((a, b));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn objective(&self) -> &SymMatrix {
        &self.c
    }

    pub fn constraints(&self) -> &[(SymMatrix, f64)] {
        &self.constraints
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SdpStatus {
    Optimal,
    /// The primal constraints admit no psd solution.
    Infeasible,
    /// The primal objective is unbounded below (dual infeasible).
    Unbounded,
    MaxIter,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub x: SymMatrix,
    pub y: Vec<f64>,
    pub s: SymMatrix,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub iterations: usize,
    /// Indices of constraints dropped as linearly dependent.
    pub dropped: Vec<usize>,
}

fn to_dm(s: &SymMatrix) -> DMatrix<f64> {
    s.to_dmatrix()
}

fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

fn sym(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Largest `α ≤ 1` keeping `X + α dX ⪰ 0`, given the Cholesky factor of `X`.
fn max_step(lx: &DMatrix<f64>, dx: &DMatrix<f64>) -> f64 {
    let inv = lx.clone().try_inverse().expect("Cholesky factor is invertible");
    let m = sym(&(&inv * dx * inv.transpose()));
    let lmin = SymmetricEigen::new(m).eigenvalues.min();
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

/// Drop constraints whose matrices are linearly dependent on earlier ones.
/// Returns kept indices, dropped indices, and whether the dropped right-hand
/// sides are consistent.
fn independent_constraints(p: &SdpProblem) -> (Vec<usize>, Vec<usize>, bool) {
    let n = p.n;
    let svec = |a: &SymMatrix| -> Vec<f64> {
        let mut v = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                v.push(if i == j { a.get(i, j) } else { std::f64::consts::SQRT_2 * a.get(i, j) });
            }
        }
        v
    };
    let mut basis: Vec<(Vec<f64>, usize)> = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (k, (a, _)) in p.constraints.iter().enumerate() {
        let v = svec(a);
        let norm0 = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        let mut r = v.clone();
        for (q, _) in &basis {
            let d: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= d * qi;
            }
        }
        let rn = r.iter().map(|t| t * t).sum::<f64>().sqrt();
        if rn <= 1e-10 * norm0.max(1e-300) {
            dropped.push(k);
        } else {
            basis.push((r.iter().map(|t| t / rn).collect(), k));
            kept.push(k);
        }
    }
    let mut consistent = true;
    if !dropped.is_empty() {
        // Least-squares combination of kept rows for each dropped row.
        let rows: Vec<Vec<f64>> = kept.iter().map(|&k| svec(&p.constraints[k].0)).collect();
        let m = rows.len();
        let dim = n * (n + 1) / 2;
        let a = DMatrix::from_fn(dim, m, |i, j| rows[j][i]);
        let bk = DVector::from_iterator(m, kept.iter().map(|&k| p.constraints[k].1));
        let svd = a.clone().svd(true, true);
        for &d in &dropped {
            let target = DVector::from_vec(svec(&p.constraints[d].0));
            let coef = svd.solve(&target, 1e-12).expect("svd solve");
            let pred = coef.dot(&bk);
            let bd = p.constraints[d].1;
            if (pred - bd).abs() > 1e-9 * (1.0 + bd.abs() + bk.amax()) {
                consistent = false;
            }
        }
    }
    (kept, dropped, consistent)
}

/// Solve with relative tolerance `tol` and at most `max_iter` iterations.
pub fn sdp_solve(p: &SdpProblem, tol: f64, max_iter: usize) -> Result<SdpSolution> {
    if !p.c.is_finite() {
        return Err(Error::NonFinite);
    }
    if p.n == 0 || p.n > 50 {
        return Err(Error::Dimension(format!("block size {} outside 1..=50", p.n)));
    }
    let (kept, dropped, consistent) = independent_constraints(p);
    if !dropped.is_empty() {
        warn!("dropping {} linearly dependent constraint(s): {:?}", dropped.len(), dropped);
    }
    let n = p.n;
    let a: Vec<DMatrix<f64>> = kept.iter().map(|&k| to_dm(&p.constraints[k].0)).collect();
    let b = DVector::from_iterator(kept.len(), kept.iter().map(|&k| p.constraints[k].1));
    let c = to_dm(&p.c);
    let m = a.len();
    let full_y = |y: &DVector<f64>| -> Vec<f64> {
        let mut out = vec![0.0; p.constraints.len()];
        for (i, &k) in kept.iter().enumerate() {
            out[k] = y[i];
        }
        out
    };
    if !consistent {
        return Ok(SdpSolution {
            status: SdpStatus::Infeasible,
            x: SymMatrix::zeros(n),
            y: vec![0.0; p.constraints.len()],
            s: SymMatrix::zeros(n),
            primal_objective: f64::INFINITY,
            dual_objective: f64::INFINITY,
            primal_residual: f64::INFINITY,
            dual_residual: f64::INFINITY,
            gap: f64::INFINITY,
            iterations: 0,
            dropped,
        });
    }

    let a_op = |x: &DMatrix<f64>| DVector::from_iterator(m, a.iter().map(|ai| inner(ai, x)));
    let at_op = |y: &DVector<f64>| {
        let mut s = DMatrix::zeros(n, n);
        for (ai, yi) in a.iter().zip(y.iter()) {
            s += ai * *yi;
        }
        s
    };
    let bnorm = 1.0 + b.norm();
    let cnorm = 1.0 + c.norm();

    let mut x = DMatrix::<f64>::identity(n, n);
    let mut s = DMatrix::<f64>::identity(n, n);
    let mut y = DVector::<f64>::zeros(m);
    let mut tau = 1.0;
    let mut kappa = 1.0;
    let nu = (n + 1) as f64;

    let mut status = SdpStatus::MaxIter;
    let mut iter = 0;
    while iter < max_iter {
        let rp = a_op(&x) - &b * tau;
        let rd = &c * tau - at_op(&y) - &s;
        let pobj = inner(&c, &x);
        let dobj = b.dot(&y);
        let rg = dobj - pobj - kappa;
        let mu = (inner(&x, &s) + tau * kappa) / nu;

        // Convergence and infeasibility tests.
        let pres = rp.norm() / tau / bnorm;
        let dres = rd.norm() / tau / cnorm;
        let gap = (pobj - dobj).abs() / tau / (1.0 + (pobj / tau).abs());
        if pres <= tol && dres <= tol && gap <= tol {
            status = SdpStatus::Optimal;
            break;
        }
        if dobj > 0.0 {
            let r = (at_op(&y) + &s).norm() / dobj;
            if r <= tol && tau <= 1e-3 * kappa.max(1e-300) || r <= tol * 1e-2 {
                status = SdpStatus::Infeasible;
                break;
            }
        }
        if pobj < 0.0 {
            let r = a_op(&x).norm() / (-pobj);
            if r <= tol && tau <= 1e-3 * kappa.max(1e-300) || r <= tol * 1e-2 {
                status = SdpStatus::Unbounded;
                break;
            }
        }
        if mu < 1e-300 || !mu.is_finite() {
            break;
        }

        // Nesterov–Todd scaling: W = G Gᵀ with Gᵀ S G = G⁻¹ X G⁻ᵀ = D.
        let Some(cx) = x.clone().cholesky() else { break };
        let Some(cs) = s.clone().cholesky() else { break };
        let lx = cx.l();
        let ls = cs.l();
        let svd = (ls.transpose() * &lx).svd(true, true);
        let d = svd.singular_values.clone();
        let vt = svd.v_t.clone().expect("requested");
        let dinv_sqrt = DMatrix::from_diagonal(&d.map(|v| 1.0 / v.sqrt()));
        let g = &lx * vt.transpose() * dinv_sqrt;
        let ginv = match g.clone().try_inverse() {
            Some(v) => v,
            None => break,
        };
        let w = &g * g.transpose();

        let mut mat = DMatrix::<f64>::zeros(m, m);
        let wa: Vec<DMatrix<f64>> = a.iter().map(|ai| &w * ai * &w).collect();
        for i in 0..m {
            for j in i..m {
                let v = inner(&a[i], &wa[j]);
                mat[(i, j)] = v;
                mat[(j, i)] = v;
            }
        }
        let chol = mat.clone().cholesky();
        let solve = |rhs: &DVector<f64>| -> Option<DVector<f64>> {
            match &chol {
                Some(ch) => Some(ch.solve(rhs)),
                None => mat.clone().lu().solve(rhs),
            }
        };
        let wcw = &w * &c * &w;
        let awcw = a_op(&wcw);
        let cwcw = inner(&c, &wcw);
        let Some(q) = solve(&(&awcw + &b)) else { break };
        let wrdw = &w * &rd * &w;
        let awrdw = a_op(&wrdw);
        let cwrdw = inner(&c, &wrdw);

        // Direction for a given complementarity right-hand side.
        let direction = |rc: &DMatrix<f64>, rtau: f64, eta: f64| -> Option<(DMatrix<f64>, DVector<f64>, DMatrix<f64>, f64, f64)> {
            let rhs = -(&rp * eta) - a_op(rc) + &awrdw * eta;
            let pv = solve(&rhs)?;
            let coef = b.dot(&q) + cwcw - awcw.dot(&q) + kappa / tau;
            let rhs_t = -eta * rg - b.dot(&pv) + inner(&c, rc) + awcw.dot(&pv) - eta * cwrdw + rtau / tau;
            let dtau = rhs_t / coef;
            let dy = &pv + &q * dtau;
            let ds = &c * dtau - at_op(&dy) + &rd * eta;
            let dx = sym(&(rc - &w * &ds * &w));
            let dkappa = (rtau - kappa * dtau) / tau;
            Some((dx, dy, ds, dtau, dkappa))
        };
        // Scaled complementarity: V = D (diagonal); build R_c = G T Gᵀ with
        // (V T + T V)/2 = target.
        let dvec: Vec<f64> = d.iter().copied().collect();
        let rc_from = |target: &DMatrix<f64>| -> DMatrix<f64> {
            let mut t = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    t[(i, j)] = 2.0 * target[(i, j)] / (dvec[i] + dvec[j]);
                }
            }
            &g * t * g.transpose()
        };
        let v2 = DMatrix::from_diagonal(&d.map(|v| v * v));

        // Predictor.
        let Some((dx_a, _dy_a, ds_a, dtau_a, dkappa_a)) = direction(&(-&x), -tau * kappa, 1.0) else {
            break;
        };
        let step = |dx: &DMatrix<f64>, ds: &DMatrix<f64>, dtau: f64, dkappa: f64| -> f64 {
            let mut alpha = max_step(&lx, dx).min(max_step(&ls, ds));
            if dtau < 0.0 {
                alpha = alpha.min(-tau / dtau);
            }
            if dkappa < 0.0 {
                alpha = alpha.min(-kappa / dkappa);
            }
            alpha
        };
        let alpha_a = step(&dx_a, &ds_a, dtau_a, dkappa_a).min(1.0);
        let mu_a = (inner(&(&x + &dx_a * alpha_a), &(&s + &ds_a * alpha_a))
            + (tau + alpha_a * dtau_a) * (kappa + alpha_a * dkappa_a))
            / nu;
        let sigma = (mu_a / mu).powi(3).clamp(0.0, 1.0);

        // Corrector with the second-order term in scaled coordinates.
        let dxs = &ginv * &dx_a * ginv.transpose();
        let dss = g.transpose() * &ds_a * &g;
        let corr = sym(&(&dxs * &dss));
        let target = DMatrix::identity(n, n) * (sigma * mu) - &v2 - corr;
        let rc = rc_from(&target);
        let rtau = sigma * mu - tau * kappa - dtau_a * dkappa_a;
        let Some((dx, dy, ds, dtau, dkappa)) = direction(&rc, rtau, 1.0 - sigma) else {
            break;
        };
        let alpha = (0.98 * step(&dx, &ds, dtau, dkappa)).min(1.0);
        x = sym(&(&x + &dx * alpha));
        s = sym(&(&s + &ds * alpha));
        y += &dy * alpha;
        tau += alpha * dtau;
        kappa += alpha * dkappa;
        iter += 1;
    }

    let rp = a_op(&x) - &b * tau;
    let rd = &c * tau - at_op(&y) - &s;
    let (scale, xs, ss, ys) = if status == SdpStatus::Optimal || status == SdpStatus::MaxIter {
        (tau, &x / tau, &s / tau, &y / tau)
    } else {
        (1.0, x.clone(), s.clone(), y.clone())
    };
    let pobj = inner(&c, &xs);
    let dobj = b.dot(&ys);
    Ok(SdpSolution {
        status,
        x: SymMatrix::from_dmatrix(&xs),
        y: full_y(&ys),
        s: SymMatrix::from_dmatrix(&ss),
        primal_objective: pobj,
        dual_objective: dobj,
        primal_residual: rp.norm() / scale,
        dual_residual: rd.norm() / scale,
        gap: (pobj - dobj).abs(),
        iterations: iter,
        dropped,
    })
}

// ---------------------------------------------------------------------------
// Gram matrices and membership.

/// A symmetric Gram matrix over a list of monomial exponents.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub basis: Vec<[u32; 3]>,
    pub matrix: SymMatrix,
}

impl GramMatrix {
    /// `vᵀ G v` over the basis.
    pub fn form(&self) -> TernaryForm<f64> {
        let deg = self.basis.first().map(|e| 2 * e.iter().sum::<u32>()).unwrap_or(0);
        let mut terms: BTreeMap<[u32; 3], f64> = BTreeMap::new();
        for (i, bi) in self.basis.iter().enumerate() {
            for (j, bj) in self.basis.iter().enumerate() {
                *terms.entry(add_exp(bi, bj)).or_default() += self.matrix.get(i, j);
            }
        }
        TernaryForm::from_terms(deg, terms).expect("consistent degrees")
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        self.matrix.min_eigenvalue()
    }
}

fn add_exp(a: &[u32; 3], b: &[u32; 3]) -> [u32; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// The six degree-2 monomials `a², ab, ac, b², bc, c²`.
pub fn quadratic_monomials() -> Vec<[u32; 3]> {
    ternary_monomials(2).into_iter().map(|m| m.0).collect()
}

/// `A_e` with `⟨A_e, G⟩` = coefficient of `e` in `vᵀ G v`.
fn coefficient_matrix(basis: &[[u32; 3]], e: [u32; 3]) -> SymMatrix {
    let mut a = SymMatrix::zeros(basis.len());
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate().skip(i) {
            if add_exp(bi, bj) == e {
                a.set(i, j, 1.0);
            }
        }
    }
    a
}

/// A psd Gram matrix of `F` over the degree-2 monomials, if one exists.
pub fn sos_gram(f: &TernaryForm<f64>, tol: f64) -> Option<GramMatrix> {
    if f.degree() != 4 {
        return None;
    }
    let basis = quadratic_monomials();
    let scale = f.max_abs();
    if scale == 0.0 {
        return Some(GramMatrix { basis: basis.clone(), matrix: SymMatrix::zeros(basis.len()) });
    }
    let mut p = SdpProblem::new(SymMatrix::zeros(basis.len()));
    for m in ternary_monomials(4) {
        p.add_constraint(coefficient_matrix(&basis, m.0), f.coeff(m.0) / scale).ok()?;
    }
    let sol = sdp_solve(&p, tol.min(1e-8), 200).ok()?;
    if sol.status != SdpStatus::Optimal {
        return None;
    }
    let g = GramMatrix { basis, matrix: sol.x.scale(scale) };
    let resid = g.form().sub(f).ok()?.max_abs();
    if resid > tol.max(1e-7) * scale || g.min_eigenvalue().ok()? < -tol.max(1e-7) * scale {
        return None;
    }
    Some(g)
}

/// Coarse verdict from a membership value and its decision band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Member,
    NotMember,
    BoundaryWithinTolerance,
    /// The solver did not converge.
    Unknown,
}

impl Verdict {
    fn from_value(value: f64, band: f64, status: SdpStatus) -> Self {
        if status != SdpStatus::Optimal {
            Verdict::Unknown
        } else if value > band {
            Verdict::Member
        } else if value < -band {
            Verdict::NotMember
        } else {
            Verdict::BoundaryWithinTolerance
        }
    }
}

/// Outcome of [`membership_value`].
#[derive(Clone, Debug)]
pub struct Membership {
    /// `min ⟨L, f⟩` over the trace-normalized dual slice; 1-homogeneous in `f`.
    pub value: f64,
    /// `value / ‖f‖_B`.
    pub relative_value: f64,
    pub status: SdpStatus,
    pub verdict: Verdict,
    /// Rationalized certificate, projected onto the exact affine constraints.
    pub certificate: DualElement<Rational>,
    /// The floating Gram matrix returned by the solver.
    pub gram: GramMatrix,
    /// The rationalized Gram matrix.
    pub gram_exact: ExactMatrix,
    /// `⟨L, f⟩` recomputed exactly from the rationalized certificate.
    pub certificate_value: f64,
    /// Minimum eigenvalue of the rationalized Gram matrix.
    pub certificate_min_eigenvalue: f64,
    /// The rationalized Gram matrix was proven psd in exact arithmetic.
    pub psd_exact: bool,
}

/// Membership decision band.
pub const MEMBERSHIP_BAND: f64 = 1e-6;
const RATIONAL_DEN: u64 = 1_000_000;

/// Entry positions `(i, j)`, `i ≤ j`, of an `n×n` symmetric matrix.
fn upper_positions(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Round `g` to denominator `RATIONAL_DEN` and project it (least squares in
/// the upper-triangle entries) onto `⟨A_k, G⟩ = b_k` exactly.
fn rationalize_projected(g: &SymMatrix, constraints: &[(Vec<Rational>, Rational)]) -> ExactMatrix {
    let n = g.n();
    let pos = upper_positions(n);
    let mut v: Vec<Rational> = pos.iter().map(|&(i, j)| rationalize(g.get(i, j), RATIONAL_DEN)).collect();
    let rows: Vec<Vec<Rational>> = constraints.iter().map(|(r, _)| r.clone()).collect();
    let m = ExactMatrix::from_rows(rows.clone());
    let resid: Vec<Rational> = m
        .mul_vec(&v)
        .into_iter()
        .zip(constraints)
        .map(|(a, (_, b))| a - b)
        .collect();
    // A dependent constraint set still has a least-norm correction; use the
    // independent rows only.
    let (_, keep) = rref(&m.transpose());
    let sub = ExactMatrix::from_rows(keep.iter().map(|&k| rows[k].clone()).collect());
    let sub_mmt = sub.mul(&sub.transpose()).expect("shapes agree");
    let sub_res: Vec<Rational> = keep.iter().map(|&k| resid[k].clone()).collect();
    if let Some(z) = solve_exact(&sub_mmt, &sub_res) {
        let corr = sub.transpose().mul_vec(&z);
        for (vi, ci) in v.iter_mut().zip(corr) {
            *vi -= ci;
        }
    }
    let mut out = ExactMatrix::zeros(n, n);
    for (k, &(i, j)) in pos.iter().enumerate() {
        out.set(i, j, v[k].clone());
        out.set(j, i, v[k].clone());
    }
    out
}

/// Coefficient row of `⟨A, G⟩` in the upper-triangle parametrization.
fn exact_row(a: &SymMatrix) -> Vec<Rational> {
    upper_positions(a.n())
        .into_iter()
        .map(|(i, j)| {
            let w = if i == j { a.get(i, j) } else { 2.0 * a.get(i, j) };
            f64_to_rational(w)
        })
        .collect()
}

fn exact_gram_form(basis: &[[u32; 3]], g: &ExactMatrix) -> TernaryForm<Rational> {
    let deg = 2 * basis[0].iter().sum::<u32>();
    let mut terms: BTreeMap<[u32; 3], Rational> = BTreeMap::new();
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            *terms.entry(add_exp(bi, bj)).or_insert_with(Rational::zero) += g.get(i, j).clone();
        }
    }
    TernaryForm::from_terms(deg, terms).expect("consistent degrees")
}

fn sym_from_exact(g: &ExactMatrix) -> SymMatrix {
    let n = g.rows();
    let mut s = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            s.set(i, j, rational_to_f64(g.get(i, j)));
        }
    }
    s
}

/// Multiplier of `F_e` in `⟨L, f⟩` where `L = functional_of_quartic(F)`.
fn pairing_weights(f: &BinaryForm<f64>) -> Vec<([u32; 3], f64)> {
    // L_i = F_{e_i} / w(e_i) with e_i = (i/2, i mod 2, 4 − ⌈i/2⌉ …); recover w from eval_map on a unit functional.
    (0..=8usize)
        .map(|i| {
            let unit = BinaryForm::monomial(8, i, 1.0);
            let quartic = eval_map(&unit);
            let e = [(i / 2) as u32, (i % 2) as u32, (4 - i / 2 - i % 2) as u32];
            let w = quartic.coeff(e);
            (e, unit.pairing(f) / w)
        })
        .collect()
}

type ExactConstraints = Vec<(Vec<Rational>, Rational)>;

/// The trace-normalized dual-slice problem for `f / ‖f‖_B`, its constraints
/// in exact form, and the scale `‖f‖_B`.
fn membership_problem(f: &BinaryForm<f64>) -> Result<(SdpProblem, ExactConstraints, f64)> {
    if f.degree() != 8 {
        return Err(Error::Precondition(format!("membership needs an octic, got degree {}", f.degree())));
    }
    if f.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let basis = quadratic_monomials();
    let n = basis.len();
    let norm = f.bombieri_norm();
    let unit = if norm > 0.0 { norm } else { 1.0 };
    let fnorm = f.scale(&(1.0 / unit));

    let mut c = SymMatrix::zeros(n);
    for (e, w) in pairing_weights(&fnorm) {
        c = c.add_scaled(&coefficient_matrix(&basis, e), w);
    }
    let mut p = SdpProblem::new(c);
    let mut exact_constraints = Vec::new();
    for row in u_relation_matrix() {
        let mut a = SymMatrix::zeros(n);
        let mut exact = vec![Rational::zero(); n * (n + 1) / 2];
        for (m, coef) in ternary_monomials(4).into_iter().zip(&row) {
            if !coef.is_zero() {
                let am = coefficient_matrix(&basis, m.0);
                a = a.add_scaled(&am, rational_to_f64(coef));
                for (k, v) in exact_row(&am).into_iter().enumerate() {
                    exact[k] += coef * v;
                }
            }
        }
        exact_constraints.push((exact, Rational::zero()));
        p.add_constraint(a, 0.0)?;
    }
    let id = SymMatrix::identity(n);
    exact_constraints.push((exact_row(&id), Rational::one()));
    p.add_constraint(id, 1.0)?;
    Ok((p, exact_constraints, unit))
}

/// The membership value and solver status only, without certificate
/// post-processing.
pub fn membership_value_raw(f: &BinaryForm<f64>, tol: f64) -> Result<(f64, SdpStatus)> {
    let (p, _, unit) = membership_problem(f)?;
    let sol = sdp_solve(&p, tol.clamp(1e-12, 1e-6), 200)?;
    Ok((sol.primal_objective * unit, sol.status))
}

/// `min ⟨L, f⟩` over dual elements whose quartic has a psd Gram matrix of
/// trace 1.
pub fn membership_value(f: &BinaryForm<f64>, tol: f64) -> Result<Membership> {
    let (p, exact_constraints, unit) = membership_problem(f)?;
    let basis = quadratic_monomials();
    let sol = sdp_solve(&p, tol.clamp(1e-12, 1e-6), 200)?;
    let value = sol.primal_objective * unit;
    let gram = GramMatrix { basis: basis.clone(), matrix: sol.x.clone() };

    let gram_exact = rationalize_projected(&sol.x, &exact_constraints);
    let quartic = exact_gram_form(&basis, &gram_exact);
    let functional = functional_of_quartic(&quartic, 0.0)?;
    let certificate = DualElement::from_functional(functional);
    let f_exact = f.map(|v| f64_to_rational(*v));
    let certificate_value = rational_to_f64(&certificate.pair(&f_exact));
    let certificate_min_eigenvalue = sym_from_exact(&gram_exact).min_eigenvalue()?;
    let psd_exact = is_psd_exact(&gram_exact)?;
    if !psd_exact {
        warn!("certificate psd-ness verified in floating point only (min eigenvalue {certificate_min_eigenvalue:e})");
    }
    Ok(Membership {
        value,
        relative_value: value / unit,
        status: sol.status,
        verdict: Verdict::from_value(value, MEMBERSHIP_BAND, sol.status),
        certificate,
        gram,
        gram_exact,
        certificate_value,
        certificate_min_eigenvalue,
        psd_exact,
    })
}

/// Outcome of [`membership_quartic_cone`].
#[derive(Clone, Debug)]
pub struct QuarticMembership {
    pub value: f64,
    pub status: SdpStatus,
    pub verdict: Verdict,
    /// `F(a, b) = ⟨L, (a x + b y)⁴⟩`, psd.
    pub certificate: BinaryForm<f64>,
    pub gram: SymMatrix,
}

/// Membership of a binary quartic in the cone of sums of fourth powers of
/// linear forms, via psd binary quartics with a 3×3 Gram of trace 1.
pub fn membership_quartic_cone(g: &BinaryForm<f64>, tol: f64) -> Result<QuarticMembership> {
    if g.degree() != 4 {
        return Err(Error::Precondition(format!("expected a binary quartic, got degree {}", g.degree())));
    }
    if g.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = g.bombieri_norm();
    let unit = if norm > 0.0 { norm } else { 1.0 };
    let gn = g.scale(&(1.0 / unit));
    // Basis b², ab, a² so that entry (i, j) contributes to a^(i+j).
    // ⟨L, g⟩ = Σ_j F_j g_j / C(4, j) with F_j the coefficient of a^j b^(4−j).
    let mut c = SymMatrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            let k = i + j;
            c.set(i, j, gn.coeff(k) / binomial(4, k as u32) as f64);
        }
    }
    let mut p = SdpProblem::new(c);
    p.add_constraint(SymMatrix::identity(3), 1.0)?;
    let sol = sdp_solve(&p, tol.clamp(1e-12, 1e-6), 200)?;
    let mut coeffs = vec![0.0; 5];
    for i in 0..3 {
        for j in 0..3 {
            coeffs[i + j] += sol.x.get(i, j);
        }
    }
    let value = sol.primal_objective * unit;
    Ok(QuarticMembership {
        value,
        status: sol.status,
        verdict: Verdict::from_value(value, MEMBERSHIP_BAND, sol.status),
        certificate: BinaryForm::new(coeffs),
        gram: sol.x,
    })
}
