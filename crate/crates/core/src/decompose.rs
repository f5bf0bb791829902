//! Sums of fourth powers of binary quadratics: Levenberg–Marquardt search,
//! representation counting modulo symmetry, length estimation and the
//! length-4 construction through `x⁸`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::dualcone::real_zeros_quartic;
use crate::error::{Error, Result};
use crate::faces::best_from_zeros;
use crate::forms::BinaryForm;
use crate::scalar::{f64_to_rational, rational_to_f64, Rational};
use crate::sdp::{membership_value, membership_value_raw, MEMBERSHIP_BAND};

/// Largest supported number of summands.
pub const MAX_K: usize = 4;
pub(crate) const NP: usize = 3 * MAX_K;

/// Coefficients `[y², xy, x²]` of a quadratic.
type Quad = [f64; 3];

/// A representation `f ≈ Σ qᵢ⁴`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<BinaryForm<f64>>,
    /// `‖Σ qᵢ⁴ − f‖` (coefficient 2-norm), from exact expansion.
    pub residual_norm: f64,
    /// `residual_norm / ‖f‖`.
    pub relative_residual: f64,
    pub canonical: bool,
}

impl Decomposition {
    pub fn k(&self) -> usize {
        self.summands.len()
    }

    /// `Σ qᵢ⁴` in floating point.
    pub fn expand(&self) -> BinaryForm<f64> {
        let mut out = BinaryForm::zero(8);
        for q in &self.summands {
            out = out.add(&q.pow(4)).expect("octics");
        }
        out
    }
}

/// `‖Σ qᵢ⁴ − f‖`, expanded exactly over the rationals (every double is a
/// dyadic rational, so no rounding enters).
pub fn exact_residual(f: &BinaryForm<f64>, summands: &[BinaryForm<f64>]) -> f64 {
    let fe: BinaryForm<Rational> = f.map(|v| f64_to_rational(*v));
    let mut acc = fe.neg();
    for q in summands {
        let qe = q.map(|v| f64_to_rational(*v));
        acc = acc.add(&qe.pow(4)).expect("octics");
    }
    acc.coeffs()
        .iter()
        .map(|c| rational_to_f64(c).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn quad_norm(q: &Quad) -> f64 {
    (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt()
}

/// Sign-normalize (first nonzero coefficient positive, in `x`-degree order
/// `x², xy, y²`) and sort lexicographically.
pub fn canonicalize(summands: &[BinaryForm<f64>]) -> Vec<BinaryForm<f64>> {
    let mut qs: Vec<Quad> = summands.iter().map(to_quad).collect();
    let scale = qs.iter().map(quad_norm).fold(0.0, f64::max);
    for q in qs.iter_mut() {
        let lead = [q[2], q[1], q[0]]
            .into_iter()
            .find(|c| c.abs() > 1e-9 * scale)
            .unwrap_or(0.0);
        if lead < 0.0 {
            for c in q.iter_mut() {
                *c = -*c;
            }
        }
    }
    qs.sort_by(|a, b| {
        let ka = [a[2], a[1], a[0]];
        let kb = [b[2], b[1], b[0]];
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    qs.into_iter().map(from_quad).collect()
}

fn to_quad(q: &BinaryForm<f64>) -> Quad {
    assert_eq!(q.degree(), 2, "summands are quadratics");
    [*q.coeff(0), *q.coeff(1), *q.coeff(2)]
}

fn from_quad(q: Quad) -> BinaryForm<f64> {
    BinaryForm::new(q.to_vec())
}

fn conv3(a: &Quad, b: &Quad) -> [f64; 5] {
    let mut out = [0.0; 5];
    for i in 0..3 {
        for j in 0..3 {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// `q³` (7 coefficients) and `q⁴` (9 coefficients).
fn powers(q: &Quad) -> ([f64; 7], [f64; 9]) {
    let q2 = conv3(q, q);
    let mut q3 = [0.0; 7];
    for i in 0..5 {
        for j in 0..3 {
            q3[i + j] += q2[i] * q[j];
        }
    }
    let mut q4 = [0.0; 9];
    for i in 0..5 {
        for j in 0..5 {
            q4[i + j] += q2[i] * q2[j];
        }
    }
    (q3, q4)
}

/// Solve the symmetric positive definite `n×n` system in place (Cholesky).
fn cholesky_solve(a: &mut [[f64; NP]; NP], b: &mut [f64; NP], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j][j];
        for k in 0..j {
            d -= a[j][k] * a[j][k];
        }
        if d <= 0.0 || !d.is_finite() {
            return false;
        }
        let d = d.sqrt();
        a[j][j] = d;
        for i in j + 1..n {
            let mut s = a[i][j];
            for k in 0..j {
                s -= a[i][k] * a[j][k];
            }
            a[i][j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i][k] * b[k];
        }
        b[i] = s / a[i][i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[k][i] * b[k];
        }
        b[i] = s / a[i][i];
    }
    true
}

fn residual(f: &[f64; 9], qs: &[Quad], jac: Option<&mut [[f64; NP]; 9]>) -> [f64; 9] {
    let mut r = [0.0; 9];
    for i in 0..9 {
        r[i] = -f[i];
    }
    let mut jac = jac;
    for (s, q) in qs.iter().enumerate() {
        let (q3, q4) = powers(q);
        for i in 0..9 {
            r[i] += q4[i];
        }
        if let Some(j) = jac.as_deref_mut() {
            for p in 0..3 {
                for i in 0..9 {
                    j[i][3 * s + p] = if i >= p && i - p < 7 { 4.0 * q3[i - p] } else { 0.0 };
                }
            }
        }
    }
    r
}

pub(crate) fn sq_norm(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Residual (9 octic coefficients) and optional Jacobian of a parametrized
/// octic with at most `NP` parameters.
pub(crate) type OcticModel<'a> = dyn Fn(&[f64; NP], Option<&mut [[f64; NP]; 9]>) -> [f64; 9] + 'a;

/// Levenberg–Marquardt on `n` parameters: damping starts at 1e-3 and is
/// divided/multiplied by 10 on accepted/rejected steps. Stops when the
/// residual norm is at most `target`; returns the final residual norm.
pub(crate) fn lm_core(n: usize, x: &mut [f64; NP], target: f64, max_iter: usize, model: &OcticModel) -> f64 {
    let mut jac = [[0.0; NP]; 9];
    let mut r = model(x, Some(&mut jac));
    let mut cost = sq_norm(&r);
    let mut lambda = 1e-3;
    for _ in 0..max_iter {
        if cost.sqrt() <= target {
            break;
        }
        let mut a = [[0.0; NP]; NP];
        let mut g = [0.0; NP];
        for i in 0..n {
            for j in 0..=i {
                let mut s = 0.0;
                for t in 0..9 {
                    s += jac[t][i] * jac[t][j];
                }
                a[i][j] = s;
                a[j][i] = s;
            }
            let mut s = 0.0;
            for t in 0..9 {
                s += jac[t][i] * r[t];
            }
            g[i] = -s;
        }
        let mut improved = false;
        while lambda < 1e16 {
            let mut m = a;
            for i in 0..n {
                m[i][i] += lambda;
            }
            let mut delta = g;
            if cholesky_solve(&mut m, &mut delta, n) {
                let mut trial = *x;
                for i in 0..n {
                    trial[i] += delta[i];
                }
                let tc = sq_norm(&model(&trial, None));
                if tc < cost {
                    *x = trial;
                    r = model(x, Some(&mut jac));
                    cost = sq_norm(&r);
                    lambda = (lambda / 10.0).max(1e-15);
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    cost.sqrt()
}

/// Levenberg–Marquardt on `Σ qᵢ⁴ = f`; returns the final relative residual.
/// `qs` is updated in place.
fn lm_real(f: &[f64; 9], qs: &mut [Quad], tol: f64, max_iter: usize) -> f64 {
    let k = qs.len();
    let fnorm = sq_norm(f).sqrt().max(f64::MIN_POSITIVE);
    let mut x = [0.0; NP];
    for (s, q) in qs.iter().enumerate() {
        x[3 * s..3 * s + 3].copy_from_slice(q);
    }
    let model = |x: &[f64; NP], jac: Option<&mut [[f64; NP]; 9]>| {
        let qs: Vec<Quad> = (0..k).map(|s| [x[3 * s], x[3 * s + 1], x[3 * s + 2]]).collect();
        residual(f, &qs, jac)
    };
    let res = lm_core(3 * k, &mut x, tol * fnorm, max_iter, &model);
    for (s, q) in qs.iter_mut().enumerate() {
        q.copy_from_slice(&x[3 * s..3 * s + 3]);
    }
    res / fnorm
}

pub(crate) fn normalized(f: &BinaryForm<f64>) -> Option<([f64; 9], f64)> {
    if f.degree() != 8 || f.coeffs().iter().any(|c| !c.is_finite()) {
        return None;
    }
    let norm = f.coef_norm();
    if norm == 0.0 {
        return None;
    }
    let mut out = [0.0; 9];
    for (i, c) in f.coeffs().iter().enumerate() {
        out[i] = c / norm;
    }
    Some((out, norm))
}

fn finish(f: &BinaryForm<f64>, summands: Vec<BinaryForm<f64>>, tol: f64) -> Option<Decomposition> {
    let summands = canonicalize(&summands);
    let residual_norm = exact_residual(f, &summands);
    let norm = f.coef_norm();
    let relative_residual = residual_norm / norm;
    if relative_residual <= tol {
        Some(Decomposition { summands, residual_norm, relative_residual, canonical: true })
    } else {
        None
    }
}

/// Levenberg–Marquardt from `start` (k quadratics, `1 ≤ k ≤ 4`). Succeeds when
/// the relative residual is at most `tol`.
pub fn gauss_newton_decompose(
    f: &BinaryForm<f64>,
    k: usize,
    start: &[BinaryForm<f64>],
    tol: f64,
    max_iter: usize,
) -> Option<Decomposition> {
    if !(1..=MAX_K).contains(&k) || start.len() != k || start.iter().any(|q| q.degree() != 2) {
        return None;
    }
    let (fh, norm) = normalized(f)?;
    let s = norm.powf(0.25);
    let mut qs: Vec<Quad> = start.iter().map(|q| to_quad(q).map(|c| c / s)).collect();
    lm_real(&fh, &mut qs, tol * 1e-3, max_iter);
    finish(f, qs.into_iter().map(|q| from_quad(q.map(|c| c * s))).collect(), tol)
}

/// Levenberg–Marquardt from `start` run to convergence; always returns the
/// polished representation with its exact residual.
pub(crate) fn polish(f: &BinaryForm<f64>, start: &[BinaryForm<f64>], max_iter: usize) -> Option<Decomposition> {
    let k = start.len();
    if !(1..=MAX_K).contains(&k) || start.iter().any(|q| q.degree() != 2) {
        return None;
    }
    let (fh, norm) = normalized(f)?;
    let s = norm.powf(0.25);
    let mut qs: Vec<Quad> = start.iter().map(|q| to_quad(q).map(|c| c / s)).collect();
    lm_real(&fh, &mut qs, 1e-15, max_iter);
    finish(f, qs.into_iter().map(|q| from_quad(q.map(|c| c * s))).collect(), f64::INFINITY)
}

/// Per-restart seed: a SplitMix64 mix of the global seed and the index, so
/// the restarts of a smaller run are a prefix of a larger one.
pub fn restart_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn random_start(k: usize, seed: u64, idx: u64) -> Vec<Quad> {
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(seed, idx));
    (0..k)
        .map(|_| {
            let mut q = [0.0; 3];
            for c in q.iter_mut() {
                *c = StandardNormal.sample(&mut rng);
            }
            q
        })
        .collect()
}

/// A restart counts as converged to a root only below this relative residual;
/// local minima of the residual near the branch locus stall around 1e-9.
pub const ROOT_RESIDUAL: f64 = 1e-11;

/// Run restart `idx` on a normalized form; summands are rescaled by `‖f‖^{1/4}`.
fn run_restart(fh: &[f64; 9], norm: f64, k: usize, seed: u64, idx: u64, tol: f64) -> Option<Vec<Quad>> {
    let mut qs = random_start(k, seed, idx);
    let res = lm_real(fh, &mut qs, 1e-15, 200);
    if res <= tol.min(ROOT_RESIDUAL) {
        let s = norm.powf(0.25);
        Some(qs.into_iter().map(|q| q.map(|c| c * s)).collect())
    } else {
        None
    }
}

/// Distance between two representations modulo permutation and summand signs,
/// relative to `scale`.
fn rep_distance(a: &[Quad], b: &[Quad], scale: f64) -> f64 {
    let k = a.len();
    let mut best = f64::INFINITY;
    permutations(k, &mut |perm| {
        let mut worst: f64 = 0.0;
        for i in 0..k {
            let p = &b[perm[i]];
            let dp = ((a[i][0] - p[0]).powi(2) + (a[i][1] - p[1]).powi(2) + (a[i][2] - p[2]).powi(2)).sqrt();
            let dm = ((a[i][0] + p[0]).powi(2) + (a[i][1] + p[1]).powi(2) + (a[i][2] + p[2]).powi(2)).sqrt();
            worst = worst.max(dp.min(dm));
        }
        best = best.min(worst);
    });
    best / scale
}

fn permutations(k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], visit: &mut dyn FnMut(&[usize])) {
        if prefix.len() == used.len() {
            visit(prefix);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, visit);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], visit);
}

/// Default chordal deduplication threshold.
pub const DEDUPE_TOL: f64 = 1e-6;

/// All length-`k` real representations found by `restarts` seeded
/// Levenberg–Marquardt runs, deduplicated modulo sign and permutation and
/// returned in canonical order.
pub fn find_all_real_reps(f: &BinaryForm<f64>, k: usize, restarts: usize, seed: u64, tol: f64) -> Vec<Decomposition> {
    if !(1..=MAX_K).contains(&k) {
        return Vec::new();
    }
    let Some((fh, norm)) = normalized(f) else { return Vec::new() };
    let found: Vec<Option<Vec<Quad>>> = (0..restarts as u64)
        .into_par_iter()
        .map(|idx| run_restart(&fh, norm, k, seed, idx, tol))
        .collect();
    let scale = norm.powf(0.25);
    let mut reps: Vec<Vec<Quad>> = Vec::new();
    for sol in found.into_iter().flatten() {
        if reps.iter().all(|r| rep_distance(r, &sol, scale) > DEDUPE_TOL) {
            reps.push(sol);
        }
    }
    let mut out: Vec<Decomposition> = reps
        .into_iter()
        .filter_map(|r| finish(f, r.into_iter().map(from_quad).collect(), tol))
        .collect();
    out.sort_by(|a, b| {
        let ka: Vec<f64> = a.summands.iter().flat_map(|q| q.coeffs().iter().rev().copied()).collect();
        let kb: Vec<f64> = b.summands.iter().flat_map(|q| q.coeffs().iter().rev().copied()).collect();
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// First successful restart (lowest index) among `restarts`.
pub(crate) fn first_rep(f: &BinaryForm<f64>, k: usize, restarts: usize, seed: u64, tol: f64) -> Option<Decomposition> {
    let (fh, norm) = normalized(f)?;
    const CHUNK: u64 = 64;
    let mut start = 0u64;
    while start < restarts as u64 {
        let end = (start + CHUNK).min(restarts as u64);
        let hit = (start..end)
            .into_par_iter()
            .filter_map(|idx| run_restart(&fh, norm, k, seed, idx, tol).map(|q| (idx, q)))
            .min_by_key(|(idx, _)| *idx);
        if let Some((_, q)) = hit {
            if let Some(d) = finish(f, q.into_iter().map(from_quad).collect(), tol) {
                return Some(d);
            }
        }
        start = end;
    }
    None
}

/// `f = λ h⁴` with `λ > 0` and `h` a rational quadratic, if so.
pub fn fourth_root_exact(f: &BinaryForm<Rational>) -> Option<(Rational, BinaryForm<Rational>)> {
    if f.degree() != 8 || f.is_zero() {
        return None;
    }
    let (lc, factors) = f.squarefree_factors()?;
    if lc <= Rational::from_integer(0.into()) {
        return None;
    }
    let mut h = BinaryForm::constant(Rational::from_integer(1.into()));
    for (g, m) in factors {
        if m % 4 != 0 {
            return None;
        }
        h = h.mul(&g.pow((m / 4) as u32));
    }
    Some((lc, h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Length {
    One,
    Two,
    Three,
    Four,
    NotInCone,
    /// No representation found within the search budget.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct LengthEstimate {
    pub length: Length,
    pub witness: Option<Decomposition>,
}

/// Estimate the 4-length of an octic: membership first, then `k = 1`
/// exactly, `k = 2, 3` by multistart and the length-4 construction for
/// interior points.
pub fn length_estimate(f: &BinaryForm<f64>, restarts: usize, tol: f64) -> Result<LengthEstimate> {
    if f.degree() != 8 {
        return Err(Error::Precondition(format!("expected an octic, got degree {}", f.degree())));
    }
    let m = membership_value(f, 1e-9)?;
    if m.relative_value < -MEMBERSHIP_BAND {
        return Ok(LengthEstimate { length: Length::NotInCone, witness: None });
    }
    if f.is_zero() {
        return Ok(LengthEstimate { length: Length::One, witness: None });
    }
    let fe = f.map(|v| f64_to_rational(*v));
    if let Some((lambda, h)) = fourth_root_exact(&fe) {
        let s = rational_to_f64(&lambda).powf(0.25);
        let q = h.to_f64().scale(&s);
        let residual_norm = exact_residual(f, std::slice::from_ref(&q));
        let d = Decomposition {
            summands: canonicalize(&[q]),
            residual_norm,
            relative_residual: residual_norm / f.coef_norm(),
            canonical: true,
        };
        return Ok(LengthEstimate { length: Length::One, witness: Some(d) });
    }
    for (k, len) in [(2, Length::Two), (3, Length::Three)] {
        if let Some(d) = first_rep(f, k, restarts, 0, tol) {
            return Ok(LengthEstimate { length: len, witness: Some(d) });
        }
    }
    if m.relative_value.abs() <= MEMBERSHIP_BAND {
        if let Some(d) = seeded_from_zeros(f, tol)? {
            return Ok(LengthEstimate { length: Length::Three, witness: Some(d) });
        }
    }
    if m.value > MEMBERSHIP_BAND {
        if let Ok(d) = decompose_length4(f, tol.max(1e-6)) {
            return Ok(LengthEstimate { length: Length::Four, witness: Some(d) });
        }
    }
    Ok(LengthEstimate { length: Length::Unknown, witness: None })
}

/// Bisect for the largest `μ ≥ 0` with `f − μ l⁸` still in the cone
/// (`l` linear). Returns `μ` and `f − μ l⁸`. The upper end comes from
/// evaluating at `(a, b)` for `l = ax + by`, where `l` is nonzero.
pub fn boundary_along(f: &BinaryForm<f64>, l: &BinaryForm<f64>, steps: usize) -> Result<(f64, BinaryForm<f64>)> {
    if f.degree() != 8 || l.degree() != 1 || l.is_zero() {
        return Err(Error::Precondition("expected an octic and a nonzero linear form".into()));
    }
    let (a, b) = (*l.coeff(1), *l.coeff(0));
    let l8 = l.pow(8);
    let mut lo = 0.0;
    let mut hi = (f.eval(&a, &b) / l8.eval(&a, &b)).max(0.0);
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        let g = f.sub(&l8.scale(&mid))?;
        let (v, _) = membership_value_raw(&g, 1e-10)?;
        if v >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, f.sub(&l8.scale(&lo))?))
}

/// A length-3 representation of a boundary point seeded from the real zeros
/// of a supporting certificate. Random restarts stall there, since the
/// Jacobian of the sum-of-powers map is singular at boundary points.
fn seeded_from_zeros(g: &BinaryForm<f64>, tol: f64) -> Result<Option<Decomposition>> {
    let m = membership_value(&g.scale(&(1.0 / g.bombieri_norm())), 1e-10)?;
    let quads: Vec<BinaryForm<f64>> =
        real_zeros_quartic(&m.gram.form(), 1e-7, 24).points.iter().map(|p| p.quadratic()).collect();
    Ok((3..=8)
        .contains(&quads.len())
        .then(|| best_from_zeros(g, &quads, 3))
        .flatten()
        .filter(|d| d.relative_residual <= tol))
}

/// Constructive length-4 decomposition of an interior octic: bisect for the
/// second intersection `g = f − μ x⁸` of the line through `x⁸` and `f` with
/// the boundary, write `g` as three fourth powers and add `(μ^{1/4} x²)⁴`.
pub fn decompose_length4(f: &BinaryForm<f64>, tol: f64) -> Result<Decomposition> {
    if f.degree() != 8 {
        return Err(Error::Precondition(format!("expected an octic, got degree {}", f.degree())));
    }
    let (v0, _) = membership_value_raw(f, 1e-9)?;
    if v0 <= MEMBERSHIP_BAND {
        return Err(Error::Precondition(format!("not a certified interior point (membership value {v0:e})")));
    }
    let (lo, g) = boundary_along(f, &BinaryForm::x(), 60)?;
    let g3 = seeded_from_zeros(&g, 1e-7)?
        .or_else(|| first_rep(&g, 3, 4000, 0x5eed, 1e-7))
        .ok_or_else(|| Error::Numerical("no length-3 representation of the boundary point found".into()))?;
    let mut start = g3.summands.clone();
    start.push(BinaryForm::monomial(2, 2, lo.max(0.0).powf(0.25)));
    gauss_newton_decompose(f, 4, &start, tol, 200)
        .ok_or_else(|| Error::Numerical("length-4 polish did not reach the tolerance".into()))
}

// ---------------------------------------------------------------------------
// Complex census.

type CQuad = [Complex64; 3];

/// Solve a complex `n×n` system by Gaussian elimination with partial pivoting.
fn complex_solve(a: &mut [[Complex64; 9]; 9], b: &mut [Complex64; 9], n: usize) -> bool {
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        if a[piv][col].norm() == 0.0 || !a[piv][col].norm().is_finite() {
            return false;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            let v = b[col];
            b[row] -= factor * v;
        }
    }
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * b[k];
        }
        b[row] = s / a[row][row];
    }
    true
}

fn complex_residual(f: &[f64; 9], qs: &[CQuad; 3], jac: Option<&mut [[Complex64; 9]; 9]>) -> [Complex64; 9] {
    let zero = Complex64::new(0.0, 0.0);
    let mut r = [zero; 9];
    for i in 0..9 {
        r[i] = Complex64::new(-f[i], 0.0);
    }
    let mut jac = jac;
    for (s, q) in qs.iter().enumerate() {
        let mut q2 = [zero; 5];
        for i in 0..3 {
            for j in 0..3 {
                q2[i + j] += q[i] * q[j];
            }
        }
        let mut q3 = [zero; 7];
        for i in 0..5 {
            for j in 0..3 {
                q3[i + j] += q2[i] * q[j];
            }
        }
        for i in 0..5 {
            for j in 0..5 {
                r[i + j] += q2[i] * q2[j];
            }
        }
        if let Some(jm) = jac.as_deref_mut() {
            for p in 0..3 {
                for i in 0..9 {
                    jm[i][3 * s + p] = if i >= p && i - p < 7 { q3[i - p] * 4.0 } else { zero };
                }
            }
        }
    }
    r
}

/// Damped Newton on the square complex system; returns the relative residual.
fn newton_complex(f: &[f64; 9], qs: &mut [CQuad; 3], max_iter: usize) -> f64 {
    let fnorm = sq_norm(f).sqrt();
    let cnorm = |r: &[Complex64; 9]| r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut jac = [[Complex64::new(0.0, 0.0); 9]; 9];
    let mut r = complex_residual(f, qs, Some(&mut jac));
    let mut res = cnorm(&r);
    for _ in 0..max_iter {
        if res <= 1e-14 * fnorm {
            break;
        }
        let mut a = jac;
        let mut delta = r.map(|c| -c);
        if !complex_solve(&mut a, &mut delta, 9) {
            break;
        }
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-6 {
            let mut trial = *qs;
            for s in 0..3 {
                for p in 0..3 {
                    trial[s][p] += delta[3 * s + p] * t;
                }
            }
            let tr = complex_residual(f, &trial, None);
            let tn = cnorm(&tr);
            if tn < res {
                *qs = trial;
                r = complex_residual(f, qs, Some(&mut jac));
                res = cnorm(&r);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    res / fnorm
}

const ROOTS4: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

fn complex_rep_distance(a: &[CQuad; 3], b: &[CQuad; 3]) -> f64 {
    let mut best = f64::INFINITY;
    permutations(3, &mut |perm| {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            let p = &b[perm[i]];
            let d = ROOTS4
                .iter()
                .map(|z| (0..3).map(|j| (a[i][j] - z * p[j]).norm_sqr()).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        best = best.min(worst);
    });
    best
}

/// Result of [`complex_rep_census`]; the count is a lower bound, not certified.
#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    /// Number of distinct orbits found.
    pub distinct: usize,
    /// Orbit size under permutation and fourth roots of unity (6 · 4³).
    pub orbit_size_assumed: usize,
    pub restarts: usize,
    pub converged: usize,
    pub label: &'static str,
}

/// Multistart damped Newton over complex quadratics, counting length-3
/// representations modulo permutation and fourth roots of unity.
pub fn complex_rep_census(f: &BinaryForm<f64>, restarts: usize, seed: u64) -> CensusReport {
    let mut report = CensusReport {
        distinct: 0,
        orbit_size_assumed: 384,
        restarts,
        converged: 0,
        label: "lower bound, not certified",
    };
    let Some((fh, _)) = normalized(f) else { return report };
    let sols: Vec<Option<[CQuad; 3]>> = (0..restarts as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(seed, idx));
            let mut qs = [[Complex64::new(0.0, 0.0); 3]; 3];
            for q in qs.iter_mut() {
                for c in q.iter_mut() {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    *c = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
                }
            }
            let res = newton_complex(&fh, &mut qs, 100);
            let size = qs.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
            (res <= 1e-11 && size < 1e3).then_some(qs)
        })
        .collect();
    let mut reps: Vec<[CQuad; 3]> = Vec::new();
    for sol in sols.into_iter().flatten() {
        report.converged += 1;
        if reps.iter().all(|r| complex_rep_distance(r, &sol) > DEDUPE_TOL) {
            reps.push(sol);
        }
    }
    report.distinct = reps.len();
    report
}
