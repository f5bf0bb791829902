//! Faces of the cone of sums of fourth powers of binary quadratics:
//! classification of boundary points, the non-exposedness of `x⁸`, and the
//! hypotheses under which a boundary octic is not doubly positive.

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::apolar::{cube_divisor_witness_f64, numeric_kernel};
use crate::decompose::{
    canonicalize, exact_residual, first_rep, lm_core, polish, normalized, restart_seed,
    Decomposition, NP,
};
use crate::dualcone::{in_u_exact, real_zeros_quartic, DualElement, ProjectivePointR2};
use crate::error::{Error, Result};
use crate::forms::{binomial, BinaryForm, TernaryForm};
use crate::linalg::{is_psd_exact, kernel_exact, rank_exact, ExactMatrix, SymMatrix};
use crate::scalar::{f64_to_rational, q, qi, Field, QSqrt3, Rational};
use crate::sdp::{membership_value, sdp_solve, SdpProblem, SdpStatus, MEMBERSHIP_BAND};

/// Face types of boundary points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FaceType {
    F1,
    F2,
    F3,
    L4Sigma24,
    NonExposedRayL8,
    NonExposedEdge,
    Inconclusive,
}

impl FaceType {
    fn generator_count(self) -> Option<usize> {
        match self {
            FaceType::F1 => Some(1),
            FaceType::F2 => Some(2),
            FaceType::F3 => Some(3),
            _ => None,
        }
    }
}

/// Exposedness; serialized as `true`, `false` or `null`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exposedness {
    Exposed,
    NotExposed,
    Unknown,
}

impl Serialize for Exposedness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exposedness::Exposed => s.serialize_bool(true),
            Exposedness::NotExposed => s.serialize_bool(false),
            Exposedness::Unknown => s.serialize_none(),
        }
    }
}

/// Classification of a boundary point.
///
/// Generators and weights by type:
/// - `F1`, `F2`, `F3`: quadratics `qᵢ` with `f = Σ wᵢ qᵢ⁴`;
/// - `NonExposedRayL8`: `[l]` with `f = w l⁸`;
/// - `L4Sigma24`: `[l]` with `f = l⁴ · cofactor`;
/// - `NonExposedEdge`: `[l, l₁, l₂]` with `f = l⁴ (w₁ l₁⁴ + w₂ l₂⁴)`.
#[derive(Clone, Debug)]
pub struct FaceReport {
    pub face_type: FaceType,
    pub generators: Vec<BinaryForm<f64>>,
    pub weights: Vec<f64>,
    pub cofactor: Option<BinaryForm<f64>>,
    pub exposed: Exposedness,
    pub certificate: Option<DualElement<f64>>,
    /// Real zeros of the certificate quartic.
    pub zeros: Vec<ProjectivePointR2>,
    /// Membership value of `f / ‖f‖_B`.
    pub membership_value: f64,
    /// `‖reconstruction − f‖ / ‖f‖`.
    pub relative_residual: Option<f64>,
    pub diagnostics: Vec<String>,
}

impl FaceReport {
    /// The octic described by the generators, weights and cofactor.
    pub fn reconstruct(&self) -> Option<BinaryForm<f64>> {
        let g = &self.generators;
        let w = &self.weights;
        let sum = |terms: Vec<BinaryForm<f64>>| terms.into_iter().reduce(|a, b| a.add(&b).expect("same degree"));
        match self.face_type {
            FaceType::F1 | FaceType::F2 | FaceType::F3 => {
                sum(g.iter().zip(w).map(|(q, w)| q.pow(4).scale(w)).collect())
            }
            FaceType::NonExposedRayL8 => Some(g.first()?.pow(8).scale(w.first()?)),
            FaceType::L4Sigma24 => Some(g.first()?.pow(4).mul(self.cofactor.as_ref()?)),
            FaceType::NonExposedEdge => {
                let inner = sum(vec![g.get(1)?.pow(4).scale(w.first()?), g.get(2)?.pow(4).scale(w.get(1)?)])?;
                Some(g[0].pow(4).mul(&inner))
            }
            FaceType::Inconclusive => None,
        }
    }

    fn new(face_type: FaceType, membership_value: f64) -> Self {
        FaceReport {
            face_type,
            generators: Vec::new(),
            weights: Vec::new(),
            cofactor: None,
            exposed: Exposedness::Unknown,
            certificate: None,
            zeros: Vec::new(),
            membership_value,
            relative_residual: None,
            diagnostics: Vec::new(),
        }
    }
}

/// Relative residual below which a face decomposition is accepted.
pub const FACE_RESIDUAL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Fourth-power linear factors.

/// Structure of `f` with respect to fourth powers of linear factors.
#[derive(Clone, Debug)]
enum PowerFactor {
    /// `f = w l⁸`.
    Eighth { l: BinaryForm<f64>, w: f64 },
    /// `f = w q⁴` for a quadratic `q` (possibly irreducible over ℚ).
    Quartic { q: BinaryForm<f64>, w: f64 },
    /// `f = l⁴ g` with `l` linear and `g` a quartic not divisible by `l⁴`.
    Single { l: BinaryForm<f64>, g: BinaryForm<f64>, g_exact: Option<BinaryForm<Rational>> },
}

fn rat_form(f: &BinaryForm<Rational>) -> BinaryForm<f64> {
    f.to_f64()
}

/// Exact detection through the square-free factorization.
fn exact_power_factor(fe: &BinaryForm<Rational>) -> Option<PowerFactor> {
    let (lc, factors) = fe.squarefree_factors()?;
    let lcf = lc.to_f64();
    let linear: Vec<&(BinaryForm<Rational>, usize)> =
        factors.iter().filter(|(g, m)| g.degree() == 1 && *m >= 4).collect();
    if let [(g, 4)] = factors.as_slice() {
        if g.degree() == 2 {
            return Some(PowerFactor::Quartic { q: rat_form(g), w: lcf });
        }
    }
    match linear.as_slice() {
        [] => None,
        [(l, 8)] => Some(PowerFactor::Eighth { l: rat_form(l), w: lcf }),
        [(l1, 4), (l2, 4)] => Some(PowerFactor::Quartic { q: rat_form(&l1.mul(l2)), w: lcf }),
        [(l, _)] => {
            let g = fe.div_exact(&l.pow(4))?;
            Some(PowerFactor::Single { l: rat_form(l), g: rat_form(&g), g_exact: Some(g) })
        }
        _ => None,
    }
}

fn poly_eval(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn poly_derivative(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect()
}

/// Real roots of a univariate polynomial (ascending coefficients) from the
/// companion matrix, refined by Newton steps.
fn real_roots(p: &[f64]) -> Vec<f64> {
    let mut p = p.to_vec();
    while p.len() > 1 && p.last() == Some(&0.0) {
        p.pop();
    }
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -p[i] / lead;
    }
    let dp = poly_derivative(&p);
    comp.complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * (1.0 + z.re.abs()))
        .map(|z| {
            let mut t = z.re;
            for _ in 0..5 {
                let d = poly_eval(&dp, t);
                if d == 0.0 {
                    break;
                }
                t -= poly_eval(&p, t) / d;
            }
            t
        })
        .collect()
}

/// Relative deflation residual below which a numeric fourth-power factor is accepted.
const DEFLATION_RESIDUAL: f64 = 1e-12;

/// Floating detection: a real root of multiplicity ≥ 4 is a root of `f'''`
/// where `f`, `f'` and `f''` also vanish (relative to the coefficient scale).
/// Each candidate must also deflate with a residual at rounding level.
fn numeric_power_factor(f: &BinaryForm<f64>, tol: f64) -> Option<PowerFactor> {
    let c = f.coeffs();
    let scale = f.coef_norm();
    let small = |v: f64| v.abs() <= tol * scale;
    let accept = |l: &BinaryForm<f64>, g: &BinaryForm<f64>| {
        exact_form_distance(&l.pow(4).mul(g), f) <= DEFLATION_RESIDUAL * scale
    };
    let mut found = None;
    if c[5..].iter().all(|v| small(*v)) {
        // y⁴ divides f: the cofactor keeps the x⁰..x⁴ coefficients shifted.
        let (l, g) = (BinaryForm::y(), BinaryForm::new(c[..5].to_vec()));
        if accept(&l, &g) {
            found = Some((l, g));
        }
    }
    if found.is_none() {
        let p: Vec<f64> = c.to_vec();
        let d1 = poly_derivative(&p);
        let d2 = poly_derivative(&d1);
        let d3 = poly_derivative(&d2);
        for root in real_roots(&d3) {
            let s = scale * (1.0 + root.abs()).powi(8);
            if ![&p, &d1, &d2].iter().all(|q| poly_eval(q, root).abs() <= tol * s) {
                continue;
            }
            // Deflate (x − t y)⁴ by synthetic division.
            let mut rem = p.clone();
            for _ in 0..4 {
                let n = rem.len() - 1;
                let mut quot = vec![0.0; n];
                let mut acc = 0.0;
                for i in (0..=n).rev() {
                    acc = acc * root + rem[i];
                    if i > 0 {
                        quot[i - 1] = acc;
                    }
                }
                rem = quot;
            }
            let (l, g) = (BinaryForm::linear(1.0, -root), BinaryForm::new(rem));
            if accept(&l, &g) {
                found = Some((l, g));
                break;
            }
        }
    }
    let (l, g) = found?;
    if let Some(lin) = crate::forms::as_power_of_linear(&g, tol.sqrt()) {
        let gl = lin.pow(4);
        let w = g.coeffs().iter().zip(gl.coeffs()).map(|(a, b)| a * b).sum::<f64>()
            / gl.coeffs().iter().map(|b| b * b).sum::<f64>();
        let cross = lin.coeff(0) * l.coeff(1) - lin.coeff(1) * l.coeff(0);
        if cross.abs() <= 1e-8 * lin.coef_norm() * l.coef_norm() {
            return Some(PowerFactor::Eighth { l, w });
        }
        return Some(PowerFactor::Quartic { q: l.mul(&lin), w });
    }
    Some(PowerFactor::Single { l, g, g_exact: None })
}

/// Numeric detection in both affine charts, so that a root near `y = 0`
/// is not lost to a tiny leading coefficient.
fn numeric_power_factor_any(f: &BinaryForm<f64>, tol: f64) -> Option<PowerFactor> {
    if let Some(pf) = numeric_power_factor(f, tol) {
        return Some(pf);
    }
    let swap = |g: &BinaryForm<f64>| BinaryForm::new(g.coeffs().iter().rev().copied().collect());
    Some(match numeric_power_factor(&swap(f), tol)? {
        PowerFactor::Eighth { l, w } => PowerFactor::Eighth { l: swap(&l), w },
        PowerFactor::Quartic { q, w } => PowerFactor::Quartic { q: swap(&q), w },
        PowerFactor::Single { l, g, .. } => PowerFactor::Single { l: swap(&l), g: swap(&g), g_exact: None },
    })
}

fn power_factor(f: &BinaryForm<f64>) -> Option<PowerFactor> {
    exact_power_factor(&f.map(|v| f64_to_rational(*v))).or_else(|| numeric_power_factor_any(f, 1e-10))
}

/// `true` when `f` has a linear factor of multiplicity at least four.
pub fn has_fourth_power_linear_factor(f: &BinaryForm<f64>) -> bool {
    power_factor(f).is_some()
}

// ---------------------------------------------------------------------------
// Binary quartics through their 3×3 Hankel matrix.

/// `H_ij = g_{i+j} / C(4, i+j)`; `g` is a sum of fourth powers of linear
/// forms iff `H ⪰ 0`, and the rank is the length.
fn hankel<T: Field>(g: &BinaryForm<T>) -> Vec<Vec<T>> {
    (0..3)
        .map(|i| (0..3).map(|j| g.coeff(i + j).clone() / T::from_i64(binomial(4, (i + j) as u32))).collect())
        .collect()
}

struct HankelInfo {
    rank: usize,
    psd: bool,
    kernel: Vec<Vec<f64>>,
}

fn hankel_info(g: &BinaryForm<f64>, g_exact: Option<&BinaryForm<Rational>>) -> Result<HankelInfo> {
    if let Some(ge) = g_exact {
        let h = ExactMatrix::from_rows(hankel(ge));
        let kernel = kernel_exact(&h).into_iter().map(|v| v.iter().map(|c| c.to_f64()).collect()).collect();
        return Ok(HankelInfo { rank: rank_exact(&h), psd: is_psd_exact(&h)?, kernel });
    }
    let rows = hankel(g);
    let h = SymMatrix::from_rows(&rows);
    let dense = h.to_dmatrix();
    let eig = dense.clone().symmetric_eigen();
    let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let rank = eig.eigenvalues.iter().filter(|v| v.abs() > 1e-9 * top).count();
    let psd = eig.eigenvalues.iter().all(|v| *v >= -1e-9 * top);
    Ok(HankelInfo { rank, psd, kernel: numeric_kernel(&dense, 1e-9) })
}

/// Nodes of a rank-2 Hankel matrix: roots `(u : v)` of `c₀v² + c₁uv + c₂u²`
/// for the kernel vector `c`, as linear forms `u x + v y`.
fn hankel_nodes(c: &[f64]) -> Option<[BinaryForm<f64>; 2]> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if c[2].abs() <= 1e-12 * scale {
        if c[1].abs() <= 1e-12 * scale {
            return None;
        }
        // One node at u/v = −c₀/c₁, the other at v = 0.
        return Some([BinaryForm::linear(-c[0] / c[1], 1.0), BinaryForm::linear(1.0, 0.0)]);
    }
    let disc = c[1] * c[1] - 4.0 * c[0] * c[2];
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let t1 = (-c[1] + s) / (2.0 * c[2]);
    let t2 = (-c[1] - s) / (2.0 * c[2]);
    Some([BinaryForm::linear(t1, 1.0), BinaryForm::linear(t2, 1.0)])
}

/// Least-squares weights `w` with `g ≈ Σ wᵢ pᵢ` (coefficient vectors).
fn ls_weights(g: &BinaryForm<f64>, parts: &[BinaryForm<f64>]) -> Option<(Vec<f64>, f64)> {
    let n = g.degree() + 1;
    let a = DMatrix::from_fn(n, parts.len(), |i, j| *parts[j].coeff(i));
    let b = DVector::from_iterator(n, g.coeffs().iter().copied());
    let w = a.clone().svd(true, true).solve(&b, 1e-14).ok()?;
    let r = (&a * &w - &b).norm() / b.norm().max(f64::MIN_POSITIVE);
    Some((w.iter().copied().collect(), r))
}

fn classify_power_factor(pf: PowerFactor, f: &BinaryForm<f64>, value: f64) -> Result<FaceReport> {
    let mut rep = FaceReport::new(FaceType::Inconclusive, value);
    match pf {
        PowerFactor::Eighth { l, w } => {
            if w > 0.0 {
                rep.face_type = FaceType::NonExposedRayL8;
                rep.exposed = Exposedness::NotExposed;
                rep.generators = vec![l];
                rep.weights = vec![w];
            } else {
                rep.diagnostics.push("negative multiple of an eighth power".into());
            }
        }
        PowerFactor::Quartic { q, w } => {
            let disc = q.coeff(1) * q.coeff(1) - 4.0 * q.coeff(0) * q.coeff(2);
            if w > 0.0 && disc > 0.0 {
                rep.face_type = FaceType::F1;
                rep.exposed = Exposedness::Exposed;
                rep.generators = vec![q];
                rep.weights = vec![w];
            } else {
                rep.diagnostics.push(format!("fourth power of a quadratic with discriminant {disc:e}, weight {w:e}"));
            }
        }
        PowerFactor::Single { l, g, g_exact } => {
            let mut info = hankel_info(&g, g_exact.as_ref())?;
            if !info.psd && g_exact.is_some() {
                // Rounded input: judge the cofactor up to tolerance instead.
                let approx = hankel_info(&g, None)?;
                if approx.psd {
                    rep.diagnostics.push("cofactor Hankel matrix psd only up to rounding".into());
                    info = approx;
                }
            }
            if !info.psd {
                rep.diagnostics.push("cofactor of l⁴ is not a sum of fourth powers of linear forms".into());
            } else {
                match info.rank {
                    3 => {
                        rep.face_type = FaceType::L4Sigma24;
                        rep.exposed = Exposedness::Exposed;
                        rep.generators = vec![l];
                        rep.cofactor = Some(g);
                    }
                    2 => match info.kernel.first().and_then(|c| hankel_nodes(c)) {
                        Some([l1, l2]) => {
                            let parts = [l1.pow(4), l2.pow(4)];
                            match ls_weights(&g, &parts) {
                                Some((w, _)) if w.iter().all(|v| *v > 0.0) => {
                                    rep.face_type = FaceType::NonExposedEdge;
                                    rep.exposed = Exposedness::NotExposed;
                                    rep.generators = vec![l, l1, l2];
                                    rep.weights = w;
                                }
                                _ => rep.diagnostics.push("edge weights are not positive".into()),
                            }
                        }
                        None => rep.diagnostics.push("rank-2 cofactor without two real nodes".into()),
                    },
                    1 => {
                        let lin = crate::forms::as_power_of_linear(&g, 1e-6);
                        match lin {
                            Some(lin) => {
                                let (w, _) = ls_weights(&g, &[lin.pow(4)]).expect("one column");
                                rep.face_type = FaceType::F1;
                                rep.exposed = Exposedness::Exposed;
                                rep.generators = vec![l.mul(&lin)];
                                rep.weights = w;
                            }
                            None => rep.diagnostics.push("rank-1 cofactor is not a fourth power".into()),
                        }
                    }
                    r => rep.diagnostics.push(format!("cofactor Hankel rank {r}")),
                }
            }
        }
    }
    if rep.face_type != FaceType::Inconclusive {
        rep.relative_residual = rep.reconstruct().map(|r| exact_form_distance(&r, f) / f.coef_norm());
    }
    Ok(rep)
}

fn exact_form_distance(a: &BinaryForm<f64>, b: &BinaryForm<f64>) -> f64 {
    let d = a.map(|v| f64_to_rational(*v)).sub(&b.map(|v| f64_to_rational(*v))).expect("same degree");
    d.coef_norm()
}

// ---------------------------------------------------------------------------
// Certificate route.

/// All subsets of `0..n` with `k` elements, in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Best polished `k`-term decomposition started from subsets of the zero quadratics.
pub(crate) fn best_from_zeros(f: &BinaryForm<f64>, quads: &[BinaryForm<f64>], k: usize) -> Option<Decomposition> {
    let mut best: Option<Decomposition> = None;
    for s in subsets(quads.len(), k) {
        let parts: Vec<BinaryForm<f64>> = s.iter().map(|&i| quads[i].pow(4)).collect();
        let Some((w, _)) = ls_weights(f, &parts) else { continue };
        if w.iter().any(|v| *v <= 0.0) {
            continue;
        }
        let start: Vec<BinaryForm<f64>> = s.iter().zip(&w).map(|(&i, wi)| quads[i].scale(&wi.powf(0.25))).collect();
        if let Some(d) = polish(f, &start, 1000) {
            if best.as_ref().is_none_or(|b| d.relative_residual < b.relative_residual) {
                best = Some(d);
            }
        }
    }
    best
}

fn unit_quadratic(q: &BinaryForm<f64>) -> (BinaryForm<f64>, f64) {
    let n = q.coef_norm();
    (q.scale(&(1.0 / n)), n.powi(4))
}

fn certificate_route(f: &BinaryForm<f64>, value: f64) -> Result<FaceReport> {
    let mut rep = FaceReport::new(FaceType::Inconclusive, value);
    // Second pass: tighter solver tolerance and a denser zero search.
    for (pass, (sdp_tol, grid)) in [(1e-10, 24usize), (1e-12, 48)].into_iter().enumerate() {
        let m = membership_value(f, sdp_tol)?;
        let zs = real_zeros_quartic(&m.gram.form(), 1e-7, grid);
        rep.certificate = Some(m.certificate.to_f64());
        rep.zeros = zs.points.clone();
        if zs.infinite {
            rep.diagnostics.push(format!("pass {pass}: certificate has a curve of zeros"));
            continue;
        }
        if zs.points.is_empty() || zs.points.len() > 8 {
            rep.diagnostics.push(format!("pass {pass}: {} certificate zeros", zs.points.len()));
            continue;
        }
        let quads: Vec<BinaryForm<f64>> = zs.points.iter().map(|p| p.quadratic()).collect();
        let mut marginal = false;
        let mut accepted = None;
        for k in 1..=quads.len().min(3) {
            let Some(d) = best_from_zeros(f, &quads, k) else { continue };
            if d.relative_residual <= FACE_RESIDUAL {
                marginal |= d.relative_residual > FACE_RESIDUAL / 10.0;
                accepted = Some(d);
                break;
            }
            marginal |= d.relative_residual <= 10.0 * FACE_RESIDUAL;
        }
        if marginal {
            rep.diagnostics.push(format!("pass {pass}: marginal residual, escalating"));
            continue;
        }
        let Some(d) = accepted else {
            rep.diagnostics.push(format!("pass {pass}: no nonnegative combination of zero quadratics reproduces f"));
            continue;
        };
        let summands = canonicalize(&d.summands);
        let bad = summands.iter().find(|q| {
            let disc = q.coeff(1) * q.coeff(1) - 4.0 * q.coeff(0) * q.coeff(2);
            disc < -1e-9 * q.coef_norm().powi(2)
        });
        if let Some(q) = bad {
            rep.diagnostics.push(format!("positive definite generator {q:?}"));
            return Ok(rep);
        }
        let (gens, weights): (Vec<_>, Vec<_>) = summands.iter().map(unit_quadratic).unzip();
        rep.face_type = match d.k() {
            1 => FaceType::F1,
            2 => FaceType::F2,
            _ => FaceType::F3,
        };
        rep.exposed = if zs.points.len() == d.k() { Exposedness::Exposed } else { Exposedness::Unknown };
        rep.generators = gens;
        rep.weights = weights;
        rep.relative_residual = Some(exact_residual(f, &summands) / f.coef_norm());
        return Ok(rep);
    }
    Ok(rep)
}

/// Classify a boundary point of the cone.
///
/// `tol` is the boundary band applied to the membership value of `f/‖f‖_B`.
/// Fails when `f` is clearly interior or clearly outside.
pub fn classify_boundary_point(f: &BinaryForm<f64>, tol: f64) -> Result<FaceReport> {
    check_octic(f)?;
    let fb = f.scale(&(1.0 / f.bombieri_norm()));
    let m = membership_value(&fb, 1e-10)?;
    if m.value > tol {
        return Err(Error::Precondition(format!("interior point (membership value {:e})", m.value)));
    }
    if m.value < -tol {
        return Err(Error::Precondition(format!("not in the cone (membership value {:e})", m.value)));
    }
    let mut rep = match exact_power_factor(&f.map(|v| f64_to_rational(*v))) {
        Some(pf) => classify_power_factor(pf, f, m.value)?,
        None => {
            // Classify a balanced representative and map the answer back.
            // A numeric factor near rounding level can be an artefact of bad
            // conditioning; keep it only when it explains f.
            let numeric = numeric_power_factor_any(f, 1e-10)
                .map(|pf| classify_power_factor(pf, f, m.value))
                .transpose()?;
            match numeric {
                Some(r) if r.face_type != FaceType::Inconclusive && r.relative_residual.is_some_and(|v| v <= FACE_RESIDUAL) => r,
                other => {
                    // Classify a balanced representative and map the answer back.
                    let (mb, h) = balance(f);
                    let mut rep = certificate_route(&h, m.value)?;
                    if let Some(mb) = mb {
                        rep = pull_back(rep, &mb, f);
                    }
                    if let Some(r) = other {
                        rep.diagnostics.splice(0..0, r.diagnostics.into_iter().map(|d| format!("power factor: {d}")));
                    }
                    rep
                }
            }
        }
    };
    if rep.certificate.is_none() {
        rep.certificate = Some(m.certificate.to_f64());
    }
    if let (Some(n), Some(res)) = (rep.face_type.generator_count(), rep.relative_residual) {
        debug_assert_eq!(rep.generators.len(), n);
        if res > FACE_RESIDUAL {
            rep.diagnostics.push(format!("reconstruction residual {res:e} above {FACE_RESIDUAL:e}"));
            rep.face_type = FaceType::Inconclusive;
        }
    }
    Ok(rep)
}

type Mat2 = [[f64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

fn unipotent(s: f64, t: f64) -> Mat2 {
    [[s.exp(), t], [0.0, (-s).exp()]]
}

/// A unimodular `M` (or `None` for the identity) roughly minimizing the
/// Bombieri norm of `f ∘ M`, together with `f ∘ M`. Orthogonal changes of
/// coordinates preserve the norm, so upper triangular `M` suffice. The
/// search is capped at condition number about 10⁴ since forms with a root
/// of multiplicity four or more have no minimizer.
fn balance(f: &BinaryForm<f64>) -> (Option<Mat2>, BinaryForm<f64>) {
    let start = f.bombieri_norm().ln();
    let mut total: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let mut g = f.clone();
    // Restart from the current form so finite differences see a well-scaled input.
    for _ in 0..6 {
        let (m, gain) = balance_step(&g);
        if gain <= 1e-12 {
            break;
        }
        total = mat_mul(&total, &m);
        if total.iter().flatten().map(|v| v * v).sum::<f64>() > 1e8 {
            break;
        }
        g = compose_exact(f, &total);
    }
    // Leave well-conditioned input untouched.
    if start - g.bombieri_norm().ln() < 2f64.ln() {
        return (None, f.clone());
    }
    (Some(total), g)
}

/// `f ∘ M` expanded over ℚ and rounded once.
fn compose_exact(f: &BinaryForm<f64>, m: &Mat2) -> BinaryForm<f64> {
    let mq = m.map(|r| r.map(f64_to_rational));
    f.map(|v| f64_to_rational(*v)).change_coords(&mq).expect("unimodular").to_f64()
}

/// Damped Newton descent of `log ‖f ∘ M‖_B`; returns `M` and the decrease.
fn balance_step(f: &BinaryForm<f64>) -> (Mat2, f64) {
    let phi = |m: &Mat2| f.change_coords(m).map(|g| g.bombieri_norm().ln()).unwrap_or(f64::INFINITY);
    let mut m: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let mut cur = phi(&m);
    let start = cur;
    let h = 1e-4;
    for _ in 0..100 {
        let at = |s: f64, t: f64| phi(&mat_mul(&m, &unipotent(s, t)));
        let (fp0, fm0, fp1, fm1) = (at(h, 0.0), at(-h, 0.0), at(0.0, h), at(0.0, -h));
        let g = [(fp0 - fm0) / (2.0 * h), (fp1 - fm1) / (2.0 * h)];
        if g[0].hypot(g[1]) < 1e-10 {
            break;
        }
        let h00 = (fp0 - 2.0 * cur + fm0) / (h * h);
        let h11 = (fp1 - 2.0 * cur + fm1) / (h * h);
        let h01 = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
        let det = h00 * h11 - h01 * h01;
        let mut step = if h00 > 0.0 && det > 0.0 {
            [-(h11 * g[0] - h01 * g[1]) / det, -(h00 * g[1] - h01 * g[0]) / det]
        } else {
            [-g[0], -g[1]]
        };
        let mut moved = false;
        for _ in 0..40 {
            let next = mat_mul(&m, &unipotent(step[0], step[1]));
            let v = phi(&next);
            if v < cur {
                m = next;
                cur = v;
                moved = true;
                break;
            }
            step = [0.5 * step[0], 0.5 * step[1]];
        }
        if !moved || m.iter().flatten().map(|v| v * v).sum::<f64>() > 1e8 {
            break;
        }
    }
    (m, start - cur)
}

/// Express a report about `f ∘ M` in the coordinates of `f`.
fn pull_back(mut rep: FaceReport, m: &Mat2, f: &BinaryForm<f64>) -> FaceReport {
    let inv: Mat2 = [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]];
    let back = |q: &BinaryForm<f64>| q.change_coords(&inv).expect("unimodular");
    rep.generators = rep.generators.iter().map(back).collect();
    rep.cofactor = rep.cofactor.as_ref().map(back);
    let mt: Mat2 = [[m[0][0], m[1][0]], [m[0][1], m[1][1]]];
    rep.certificate = rep
        .certificate
        .as_ref()
        .map(|c| DualElement::from_functional(c.functional().change_coords(&mt).expect("unimodular")));
    rep.zeros = rep
        .zeros
        .iter()
        .map(|z| {
            let q = back(&z.quadratic());
            ProjectivePointR2::new([*q.coeff(2), *q.coeff(1), *q.coeff(0)])
        })
        .collect();
    if matches!(rep.face_type, FaceType::F1 | FaceType::F2 | FaceType::F3) {
        let start: Vec<BinaryForm<f64>> =
            rep.generators.iter().zip(&rep.weights).map(|(q, w)| q.scale(&w.powf(0.25))).collect();
        if let Some(d) = polish(f, &start, 200) {
            let (gens, weights): (Vec<_>, Vec<_>) = canonicalize(&d.summands).iter().map(unit_quadratic).unzip();
            rep.generators = gens;
            rep.weights = weights;
        }
    }
    if rep.face_type != FaceType::Inconclusive {
        rep.relative_residual = rep.reconstruct().map(|r| exact_form_distance(&r, f) / f.coef_norm());
    }
    rep
}

fn check_octic(f: &BinaryForm<f64>) -> Result<()> {
    if f.degree() != 8 {
        return Err(Error::Precondition(format!("expected an octic, got degree {}", f.degree())));
    }
    if f.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    if f.is_zero() {
        return Err(Error::Precondition("zero form".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// x⁸ is not exposed.

/// Outcome of [`l8_not_exposed_check`].
#[derive(Clone, Debug, Serialize)]
pub struct L8Check {
    /// The six spanning quartics lie in `U` and vanish to order two at `(1:0:0)`.
    pub family_in_subspace: bool,
    /// `vᵀ M v = 6 F` for the parametric Gram matrix, checked exactly.
    pub gram_identity: bool,
    /// Status of "psd, family, trace 1, `a₅ = 0`".
    pub a5_zero_status: SdpStatus,
    /// `(name, max, min)` of each other coefficient over psd members of trace 1.
    pub extrema: Vec<(String, f64, f64)>,
    /// The member `c⁴` has a psd Gram matrix.
    pub pure_c4_feasible: bool,
    pub passed: bool,
}

/// Linear conditions cutting out the parametric family inside 5×5 symmetric
/// matrices (basis `ab, ac, b², bc, c²`), as `(entries, coefficient)` lists.
fn family_conditions() -> Vec<Vec<((usize, usize), f64)>> {
    vec![
        vec![((0, 0), 1.0)],
        vec![((0, 2), 1.0), ((0, 1), -1.0 / 3.0)],
        vec![((0, 3), 1.0), ((1, 2), 1.0), ((2, 2), -6.0)],
        vec![((0, 4), 1.0), ((1, 3), 1.0), ((2, 3), -3.0)],
        vec![((1, 1), 1.0), ((2, 2), -6.0)],
        vec![((3, 3), 1.0), ((2, 4), 2.0), ((1, 4), -3.0)],
    ]
}

/// `a₁ … a₆` as `(entry, divisor)`: `aᵢ = X_entry / divisor`.
const FAMILY_COEFFS: [((usize, usize), f64); 6] =
    [((0, 1), 9.0), ((1, 4), 2.0), ((2, 3), 3.0), ((2, 2), 6.0), ((4, 4), 6.0), ((3, 4), 3.0)];

/// `⟨A, X⟩ = Σ c X_ij` with `A` symmetric (off-diagonal weight split).
fn entry_matrix(terms: &[((usize, usize), f64)]) -> SymMatrix {
    let mut a = SymMatrix::zeros(5);
    for &((i, j), c) in terms {
        let w = if i == j { c } else { c / 2.0 };
        a.set(i, j, a.get(i, j) + w);
    }
    a
}

fn family_problem(c: SymMatrix) -> Result<SdpProblem> {
    let mut p = SdpProblem::new(c);
    for cond in family_conditions() {
        p.add_constraint(entry_matrix(&cond), 0.0)?;
    }
    p.add_constraint(SymMatrix::identity(5), 1.0)?;
    Ok(p)
}

/// The printed spanning set of `U ∩ I((1:0:0))₂²` and its parametric Gram
/// matrix `M(a, λ)`, over the rationals.
fn family_exact() -> (Vec<TernaryForm<Rational>>, impl Fn(&[Rational; 6], &[Rational; 3]) -> [[Rational; 5]; 5]) {
    let t = |terms: &[([u32; 3], Rational)]| TernaryForm::from_terms(4, terms.iter().cloned()).expect("quartic");
    let span = vec![
        t(&[([1, 3, 0], qi(1)), ([2, 1, 1], qi(3))]),
        t(&[([0, 2, 2], qi(1)), ([1, 0, 3], q(2, 3))]),
        t(&[([0, 3, 1], qi(1)), ([1, 1, 2], qi(3))]),
        t(&[([0, 4, 0], qi(1)), ([1, 2, 1], qi(12)), ([2, 0, 2], qi(6))]),
        t(&[([0, 0, 4], qi(1))]),
        t(&[([0, 1, 3], qi(1))]),
    ];
    let gram = |a: &[Rational; 6], l: &[Rational; 3]| {
        let z = Rational::zero();
        let k = |c: i64, v: &Rational| qi(c) * v;
        let m01 = k(9, &a[0]);
        let m02 = k(3, &a[0]);
        let m03 = k(36, &a[3]) - &l[0];
        let m04 = k(9, &a[2]) - &l[1];
        let m11 = k(36, &a[3]);
        let m14 = k(2, &a[1]);
        let m22 = k(6, &a[3]);
        let m23 = k(3, &a[2]);
        let m33 = k(6, &a[1]) - k(2, &l[2]);
        let m34 = k(3, &a[5]);
        let m44 = k(6, &a[4]);
        [
            [z.clone(), m01.clone(), m02.clone(), m03.clone(), m04.clone()],
            [m01, m11, l[0].clone(), l[1].clone(), m14.clone()],
            [m02, l[0].clone(), m22, m23.clone(), l[2].clone()],
            [m03, l[1].clone(), m23, m33, m34.clone()],
            [m04, m14, l[2].clone(), m34, m44],
        ]
    };
    (span, gram)
}

fn exact_family_checks() -> (bool, bool) {
    let (span, gram) = family_exact();
    let in_family = span.iter().all(|f| {
        in_u_exact(f) && [[4, 0, 0], [3, 1, 0], [3, 0, 1]].iter().all(|e| f.coeff(*e).is_zero())
    });
    let basis: Vec<TernaryForm<Rational>> = [[1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
        .iter()
        .map(|e| TernaryForm::from_terms(2, [(*e, qi(1))]).expect("quadratic"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut identity = true;
    for _ in 0..5 {
        let a: [Rational; 6] = std::array::from_fn(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
        let l: [Rational; 3] = std::array::from_fn(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
        let m = gram(&a, &l);
        let mut lhs = TernaryForm::zero(4);
        for i in 0..5 {
            for j in 0..5 {
                lhs = lhs.add(&basis[i].mul(&basis[j]).scale(&m[i][j])).expect("quartics");
            }
        }
        let mut rhs = TernaryForm::zero(4);
        for (ai, fi) in a.iter().zip(&span) {
            rhs = rhs.add(&fi.scale(ai)).expect("quartics");
        }
        identity &= lhs == rhs.scale(&qi(6));
    }
    (in_family, identity)
}

/// SDP verification that the only psd member of the family is a multiple
/// of `c⁴`, so no certificate isolates `x⁸`.
pub fn l8_not_exposed_check() -> Result<L8Check> {
    const TOL: f64 = 1e-7;
    let (family_in_subspace, gram_identity) = exact_family_checks();

    let mut p = family_problem(SymMatrix::zeros(5))?;
    p.add_constraint(entry_matrix(&[((4, 4), 1.0)]), 0.0)?;
    let a5_zero_status = sdp_solve(&p, 1e-9, 200)?.status;

    let names = ["a1", "a2", "a3", "a4", "a6"];
    let mut extrema = Vec::new();
    for (name, &(entry, div)) in names.iter().zip(FAMILY_COEFFS.iter().enumerate().filter(|(i, _)| *i != 4).map(|x| x.1)) {
        let c = entry_matrix(&[(entry, 1.0 / div)]);
        let max = sdp_solve(&family_problem(c.scale(-1.0))?, 1e-9, 200)?;
        let min = sdp_solve(&family_problem(c)?, 1e-9, 200)?;
        let ok = max.status == SdpStatus::Optimal && min.status == SdpStatus::Optimal;
        let (hi, lo) = if ok { (-max.primal_objective, min.primal_objective) } else { (f64::NAN, f64::NAN) };
        extrema.push((name.to_string(), hi, lo));
    }

    let mut e44 = SymMatrix::zeros(5);
    e44.set(4, 4, 1.0);
    let pure_c4_feasible = family_problem(SymMatrix::zeros(5))?
        .constraints()
        .iter()
        .all(|(a, b)| (a.dot(&e44) - b).abs() < 1e-15)
        && e44.min_eigenvalue()? >= 0.0;

    let passed = family_in_subspace
        && gram_identity
        && a5_zero_status == SdpStatus::Infeasible
        && extrema.iter().all(|(_, hi, lo)| hi.abs() <= TOL && lo.abs() <= TOL)
        && pure_c4_feasible;
    Ok(L8Check { family_in_subspace, gram_identity, a5_zero_status, extrema, pure_c4_feasible, passed })
}

// ---------------------------------------------------------------------------
// Doubly positive representations.

/// Relative residual below which a doubly-positive representation is accepted.
pub const DP_RESIDUAL: f64 = 1e-10;

/// Residual of `(p₁²+q₁²)² + (p₂²+q₂²)² − f` in the parameters `[p₁, q₁, p₂, q₂]`.
fn dp_model(f: &[f64; 9], x: &[f64; NP], jac: Option<&mut [[f64; NP]; 9]>) -> [f64; 9] {
    let mut r = [0.0; 9];
    for i in 0..9 {
        r[i] = -f[i];
    }
    let mut jac = jac;
    for half in 0..2 {
        let p = &x[6 * half..6 * half + 3];
        let qq = &x[6 * half + 3..6 * half + 6];
        let mut s = [0.0; 5];
        for i in 0..3 {
            for j in 0..3 {
                s[i + j] += p[i] * p[j] + qq[i] * qq[j];
            }
        }
        for i in 0..5 {
            for j in 0..5 {
                r[i + j] += s[i] * s[j];
            }
        }
        if let Some(jm) = jac.as_deref_mut() {
            for (off, v) in [(0, p), (3, qq)] {
                let mut sv = [0.0; 7];
                for i in 0..5 {
                    for j in 0..3 {
                        sv[i + j] += s[i] * v[j];
                    }
                }
                for k in 0..3 {
                    for i in 0..9 {
                        jm[i][6 * half + off + k] = if i >= k && i - k < 7 { 4.0 * sv[i - k] } else { 0.0 };
                    }
                }
            }
        }
    }
    r
}

fn dp_restart(fh: &[f64; 9], seed: u64, idx: u64) -> Option<[f64; NP]> {
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(seed, idx));
    let mut x = [0.0; NP];
    for v in x.iter_mut() {
        *v = StandardNormal.sample(&mut rng);
        *v *= 0.5;
    }
    let model = |x: &[f64; NP], jac: Option<&mut [[f64; NP]; 9]>| dp_model(fh, x, jac);
    let res = lm_core(NP, &mut x, 1e-15, 200, &model);
    (res <= DP_RESIDUAL).then_some(x)
}

/// Multistart search for `f = f₁² + f₂²` with `fᵢ = pᵢ² + qᵢ²` psd quartics.
/// Returns the lowest-index success among `restarts` seeded restarts.
pub fn doubly_positive_search(f: &BinaryForm<f64>, restarts: usize, seed: u64) -> Option<(BinaryForm<f64>, BinaryForm<f64>)> {
    let (fh, norm) = normalized(f)?;
    const CHUNK: u64 = 256;
    let mut start = 0u64;
    while start < restarts as u64 {
        let end = (start + CHUNK).min(restarts as u64);
        let hit = (start..end)
            .into_par_iter()
            .filter_map(|idx| dp_restart(&fh, seed, idx).map(|x| (idx, x)))
            .min_by_key(|(idx, _)| *idx);
        if let Some((_, x)) = hit {
            let s = norm.sqrt();
            let half = |h: usize| {
                let p = BinaryForm::new(x[6 * h..6 * h + 3].to_vec());
                let qq = BinaryForm::new(x[6 * h + 3..6 * h + 6].to_vec());
                p.mul(&p).add(&qq.mul(&qq)).expect("quartics").scale(&s)
            };
            let (f1, f2) = (half(0), half(1));
            let back = f1.mul(&f1).add(&f2.mul(&f2)).expect("octics");
            let rel = exact_form_distance(&back, f) / f.coef_norm();
            if rel <= 1e3 * DP_RESIDUAL {
                return Some((f1, f2));
            }
        }
        start = end;
    }
    None
}

// ---------------------------------------------------------------------------
// Refutation of double positivity.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RefutationVerdict {
    NotDoublyPositive,
    Inconclusive,
}

/// One named hypothesis and its outcome.
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct RefutationReport {
    pub input: BinaryForm<f64>,
    /// Membership value of `f / ‖f‖_B`.
    pub membership_value: f64,
    pub certificate: DualElement<f64>,
    pub zeros: Vec<ProjectivePointR2>,
    pub decomposition: Option<Decomposition>,
    /// Exact rank of the coefficient matrix of the three quadratics.
    pub collinearity_rank: Option<usize>,
    pub checks: Vec<HypothesisCheck>,
    pub identity_check: bool,
    pub verdict: RefutationVerdict,
}

impl RefutationReport {
    /// Name of the first failing hypothesis.
    pub fn failed_check(&self) -> Option<&'static str> {
        self.checks.iter().find(|c| !c.passed).map(|c| c.name)
    }
}

/// `18(p²+q²)² = (√3p+q)⁴ + (√3p−q)⁴ + 16q⁴` over `ℚ(√3)` and
/// `18(p²+q²)² = (18p⁴+36p²q²+2q⁴) + 16q⁴` over `ℚ`, for seeded random
/// rational quadratics `p, q`.
pub fn length3_identity_check(seed: u64, trials: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rq = || -> BinaryForm<Rational> {
        BinaryForm::new((0..3).map(|_| q(rng.gen_range(-20..=20), rng.gen_range(1..=7))).collect())
    };
    (0..trials).all(|_| {
        let (p, qq) = (rq(), rq());
        let sq = p.mul(&p).add(&qq.mul(&qq)).expect("quartics");
        let lhs = sq.mul(&sq).scale(&qi(18));
        let p2 = p.mul(&p);
        let q2 = qq.mul(&qq);
        let rational_rhs = p2
            .mul(&p2)
            .scale(&qi(18))
            .add(&p2.mul(&q2).scale(&qi(36)))
            .and_then(|s| s.add(&q2.mul(&q2).scale(&qi(2))))
            .and_then(|s| s.add(&q2.mul(&q2).scale(&qi(16))))
            .expect("octics");
        let lift = |f: &BinaryForm<Rational>| f.map(|c| QSqrt3::new(c.clone(), Rational::zero()));
        let (pe, qe) = (lift(&p), lift(&qq));
        let s3p = pe.scale(&QSqrt3::sqrt3());
        let plus = s3p.add(&qe).expect("quadratics").pow(4);
        let minus = s3p.sub(&qe).expect("quadratics").pow(4);
        let surd_rhs = plus
            .add(&minus)
            .and_then(|s| s.add(&qe.pow(4).scale(&QSqrt3::new(qi(16), Rational::zero()))))
            .expect("octics");
        lhs == rational_rhs && lift(&lhs) == surd_rhs
    })
}

/// Check the hypotheses under which a boundary octic cannot be written as
/// `f₁² + f₂²` with `f₁, f₂` psd quartics.
pub fn reznick_refute(f: &BinaryForm<f64>, tol: f64) -> Result<RefutationReport> {
    check_octic(f)?;
    let fb = f.scale(&(1.0 / f.bombieri_norm()));
    let m = membership_value(&fb, 1e-10)?;
    let zs = real_zeros_quartic(&m.gram.form(), 1e-7, 24);
    let certificate = m.certificate.to_f64();
    let mut checks = Vec::new();

    checks.push(HypothesisCheck {
        name: "boundary",
        passed: m.value.abs() <= tol,
        detail: format!("membership value {:e}, band {tol:e}", m.value),
    });
    let factor = power_factor(f);
    checks.push(HypothesisCheck {
        name: "no_fourth_power_linear_factor",
        passed: factor.is_none(),
        detail: match &factor {
            Some(PowerFactor::Single { l, .. }) | Some(PowerFactor::Eighth { l, .. }) => format!("l⁴ divides f for l = {l:?}"),
            Some(PowerFactor::Quartic { q, .. }) => format!("f is a multiple of ({q:?})⁴"),
            None => "none".into(),
        },
    });
    let witness = cube_divisor_witness_f64(certificate.functional(), 1e-6);
    checks.push(HypothesisCheck {
        name: "finite_zero_certificate",
        passed: witness.is_none() && !zs.infinite,
        detail: match &witness {
            Some(w) => format!("cube of {w:?} in the apolar ideal of the certificate"),
            None => format!("{} real zeros", zs.points.len()),
        },
    });
    // Seed from the certificate zeros first; fall back to random restarts.
    let quads: Vec<BinaryForm<f64>> = zs.points.iter().map(|p| p.quadratic()).collect();
    let decomposition = (quads.len() >= 3 && quads.len() <= 8)
        .then(|| best_from_zeros(f, &quads, 3))
        .flatten()
        .filter(|d| d.relative_residual <= FACE_RESIDUAL)
        .or_else(|| first_rep(f, 3, 4000, 0x5eed, FACE_RESIDUAL));
    checks.push(HypothesisCheck {
        name: "length_three",
        passed: decomposition.is_some(),
        detail: match &decomposition {
            Some(d) => format!("relative residual {:e}", d.relative_residual),
            None => "no length-3 representation found".into(),
        },
    });
    let collinearity_rank = decomposition.as_ref().map(|d| {
        let rows: Vec<Vec<Rational>> =
            d.summands.iter().map(|s| s.coeffs().iter().map(|c| f64_to_rational(*c)).collect()).collect();
        rank_exact(&ExactMatrix::from_rows(rows))
    });
    let identity_check = length3_identity_check(0x18, 8);
    let all = checks.iter().all(|c| c.passed) && identity_check;
    Ok(RefutationReport {
        input: f.clone(),
        membership_value: m.value,
        certificate,
        zeros: zs.points,
        decomposition,
        collinearity_rank,
        checks,
        identity_check,
        verdict: if all { RefutationVerdict::NotDoublyPositive } else { RefutationVerdict::Inconclusive },
    })
}

/// Default boundary band for classification and refutation.
pub const FACE_BAND: f64 = MEMBERSHIP_BAND;
