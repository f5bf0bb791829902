//! Length-increasing ladders, full-dimensionality witnesses, admissibility
//! and the dimension-count bounds on Pythagoras numbers.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, Poly2};
use crate::linalg::{det_exact, rank_exact, ExactMatrix};
use crate::scalar::{qi, Field, Rational};

// ---------------------------------------------------------------------------
// Ladders.

/// Largest `n` for which ladder levels are stored expanded.
pub const EXPANDED_LEVELS: usize = 4;

/// A ladder level, expanded or as `F_k = F_{k−1}·(y − x^r)^{2s} + 1`.
#[derive(Clone, Debug)]
pub enum LadderLevel {
    Expanded(Poly2<Rational>),
    Product { r: u64 },
}

/// `F₁ = 1`, `F_k = F_{k−1}·(y − x^{r_{k−1}})^{2s} + 1`.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub s: u32,
    pub r_seq: Vec<u64>,
    pub levels: Vec<LadderLevel>,
}

/// `r₁ = 1`, `rᵢ = 4 Σ_{k<i} r_k + 1`.
pub fn default_r_seq(len: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(len);
    let mut total = 0u64;
    for i in 0..len {
        let r = if i == 0 { 1 } else { 4 * total + 1 };
        out.push(r);
        total += r;
    }
    out
}

fn check_r_seq(r: &[u64]) -> Result<()> {
    let mut total = 0u64;
    for (i, &ri) in r.iter().enumerate() {
        if ri < 1 || (i > 0 && ri <= 4 * total) {
            return Err(Error::Input(format!("r[{i}] = {ri} violates r ≥ 1 and rᵢ > 4·Σ_(k<i) r_k = {}", 4 * total)));
        }
        total = total
            .checked_add(ri)
            .ok_or_else(|| Error::Input("r sequence overflows".into()))?;
    }
    Ok(())
}

fn binomial_factor(r: u64, s: u32) -> Result<Poly2<Rational>> {
    let r = u32::try_from(r).map_err(|_| Error::Input(format!("exponent {r} too large to expand")))?;
    Ok(Poly2::y().sub(&Poly2::monomial(r, 0, qi(1))).pow(2 * s))
}

/// `g·(y − x^r)^{2s} + 1`, provided `deg_x g < 2s·r`.
pub fn ladder_step(g: &Poly2<Rational>, r: u64, s: u32) -> Result<Poly2<Rational>> {
    let dx = g.deg_x().unwrap_or(0) as u64;
    if dx >= 2 * s as u64 * r {
        return Err(Error::Precondition(format!("deg_x g = {dx} is not below 2s·r = {}", 2 * s as u64 * r)));
    }
    Ok(g.mul(&binomial_factor(r, s)?).add(&Poly2::constant(qi(1))))
}

/// Build `F₁, …, F_n`; `r_seq` defaults to [`default_r_seq`] and must have at
/// least `n − 1` entries.
pub fn ladder_build(s: u32, n: usize, r_seq: Option<Vec<u64>>) -> Result<Ladder> {
    if s < 1 || n < 1 {
        return Err(Error::Input("s and n must be positive".into()));
    }
    let r_seq = match r_seq {
        Some(r) => {
            if r.len() + 1 < n {
                return Err(Error::Input(format!("need {} exponents, got {}", n - 1, r.len())));
            }
            check_r_seq(&r)?;
            r
        }
        None => default_r_seq(n - 1),
    };
    let mut levels = vec![LadderLevel::Expanded(Poly2::constant(qi(1)))];
    for k in 1..n {
        let r = r_seq[k - 1];
        let level = match (&levels[k - 1], n <= EXPANDED_LEVELS) {
            (LadderLevel::Expanded(prev), true) => LadderLevel::Expanded(ladder_step(prev, r, s)?),
            _ => LadderLevel::Product { r },
        };
        levels.push(level);
    }
    Ok(Ladder { s, r_seq, levels })
}

impl Ladder {
    pub fn n(&self) -> usize {
        self.levels.len()
    }

    /// `F_k(x, y)` for `1 ≤ k ≤ n`, evaluated exactly in either representation.
    pub fn eval(&self, k: usize, x: &Rational, y: &Rational) -> Rational {
        match &self.levels[k - 1] {
            LadderLevel::Expanded(p) => p.eval(x, y),
            LadderLevel::Product { r } => {
                let base = y.clone() - <Rational as Field>::pow(x, *r as u32);
                self.eval(k - 1, x, y) * <Rational as Field>::pow(&base, 2 * self.s) + Rational::one()
            }
        }
    }

    /// `2s·Σ_{i<k} rᵢ`.
    pub fn degree_formula(&self, k: usize) -> u64 {
        2 * self.s as u64 * self.r_seq[..k - 1].iter().sum::<u64>()
    }

    /// Total degree of `F_k`: read off the expansion, or from the leading
    /// term of each factor for structured levels.
    pub fn degree(&self, k: usize) -> u64 {
        match &self.levels[k - 1] {
            LadderLevel::Expanded(p) => p.total_degree().unwrap_or(0) as u64,
            LadderLevel::Product { r } => self.degree(k - 1) + 2 * self.s as u64 * r,
        }
    }

    /// `F_k(x, x^{r_{k−1}}) = 1`, checked by exact substitution for expanded
    /// levels and by exact evaluation at sample points otherwise.
    pub fn substitution_identity(&self, k: usize) -> bool {
        if k < 2 {
            return true;
        }
        let r = self.r_seq[k - 2];
        match &self.levels[k - 1] {
            LadderLevel::Expanded(p) => {
                let Ok(r) = u32::try_from(r) else { return false };
                p.substitute(&Poly2::x(), &Poly2::monomial(r, 0, qi(1))) == Poly2::constant(qi(1))
            }
            LadderLevel::Product { .. } => (-3..=3).all(|t| {
                let x = Rational::new(t.into(), 2.into());
                let y = <Rational as Field>::pow(&x, r as u32);
                self.eval(k, &x, &y).is_one()
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Full-dimensionality witnesses.

fn mono(d: u32, xdeg: u32) -> BinaryForm<Rational> {
    BinaryForm::monomial(d as usize, xdeg as usize, qi(1))
}

/// Four degree-`d` forms at which the differential of the sum-of-fourth-powers
/// map is surjective; `p₁ = x^d`, `p₂ = y^d`, and `p₃, p₄` by `d mod 3`.
pub fn full_dim_witness(d: u32) -> Result<[BinaryForm<Rational>; 4]> {
    if d < 1 {
        return Err(Error::Input("d must be positive".into()));
    }
    let (p3, p4) = match d % 3 {
        0 => (mono(d, 2 * d / 3), mono(d, d / 3)),
        2 => {
            let k = (d - 2) / 3;
            (mono(d, 2 * k + 1), mono(d, k + 1))
        }
        _ => (mono(d, (d + 2) / 3), mono(d, d).add(&mono(d, 0))?),
    };
    Ok([mono(d, d), mono(d, 0), p3, p4])
}

/// Whether `span{pᵢ³·m : m a monomial of degree 4d − 3d}` is all of `ℝ[x,y]_{4d}`,
/// by exact rank.
pub fn ideal_surjective_at(p: &[BinaryForm<Rational>], degree: usize) -> Result<bool> {
    let Some(d) = p.first().map(|q| q.degree()) else { return Ok(false) };
    if p.iter().any(|q| q.degree() != d) || 3 * d > degree {
        return Err(Error::Dimension(format!("forms of degree {d} and target degree {degree}")));
    }
    let shift = degree - 3 * d;
    let mut rows = Vec::new();
    for q in p {
        let cube = q.pow(3);
        for j in 0..=shift {
            let m: BinaryForm<Rational> = BinaryForm::monomial(shift, j, qi(1));
            rows.push(cube.mul(&m).coeffs().to_vec());
        }
    }
    Ok(rank_exact(&ExactMatrix::from_rows(rows)) == degree + 1)
}

// ---------------------------------------------------------------------------
// Admissibility.

/// Outcome of the strict admissibility test.
#[derive(Clone, Debug, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// `"a"` or `"b"` when admissible.
    pub clause: Option<&'static str>,
    /// `deg_y f`.
    pub d: Option<u32>,
    /// Largest `b` with `x^b y^d` present.
    pub b: Option<u32>,
    /// Its coefficient, as a decimal fraction string.
    pub alpha: Option<String>,
    pub reason: String,
}

/// Strict admissibility: `f` non-constant with `f(0,0) = 0`; with `d = deg_y f`
/// and `α x^b y^d` the top monomial in `x` among those of `y`-degree `d`,
/// (a) `α > 0` with `b, d` even, or (b) `b` or `d` odd.
pub fn is_strictly_admissible(f: &Poly2<Rational>) -> Admissibility {
    let fail = |reason: &str| Admissibility {
        admissible: false,
        clause: None,
        d: None,
        b: None,
        alpha: None,
        reason: reason.into(),
    };
    if f.is_constant() {
        return fail("constant polynomial");
    }
    if !f.coeff(0, 0).is_zero() {
        return fail("f(0,0) ≠ 0");
    }
    let d = f.deg_y().expect("nonzero");
    let (b, alpha) = f
        .terms()
        .filter(|((_, ye), _)| *ye == d)
        .map(|((xe, _), c)| (*xe, c.clone()))
        .max_by_key(|(xe, _)| *xe)
        .expect("a term of y-degree d");
    let (admissible, clause, reason) = if b % 2 == 1 || d % 2 == 1 {
        (true, Some("b"), "b or d odd".to_string())
    } else if alpha.is_positive() {
        (true, Some("a"), "α > 0 with b, d even".to_string())
    } else {
        (false, None, "α < 0 with b, d even".to_string())
    };
    Admissibility { admissible, clause, d: Some(d), b: Some(b), alpha: Some(alpha.to_string()), reason }
}

/// Strict admissibility of `f∘M`, `(f∘M)(x, y) = f(m₀₀x + m₀₁y, m₁₀x + m₁₁y)`.
pub fn is_admissible_via(f: &Poly2<Rational>, m: &[[Rational; 2]; 2]) -> Result<Admissibility> {
    let det = det_exact(&ExactMatrix::from_rows(vec![m[0].to_vec(), m[1].to_vec()]))?;
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(is_strictly_admissible(&f.change_coords(m)))
}

// ---------------------------------------------------------------------------
// Pythagoras bounds.

/// Dimension-count bounds for `p_{2s}(n, 2sd)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PythagorasBounds {
    /// `⌈C(n+2sd−1, 2sd) / C(n+d−1, d)⌉`.
    pub lower: BigUint,
    /// `C(n+2sd−1, 2sd)`.
    pub upper: BigUint,
    /// `(2s)^{n−1}`, the limit of the lower bound as `d → ∞`.
    pub asymptotic: BigUint,
}

impl PythagorasBounds {
    /// The unrounded quotient `C(n+2sd−1, 2sd) / C(n+d−1, d)`.
    pub fn quotient(&self, n: u64, d: u64) -> f64 {
        let den = binom(n + d - 1, d);
        let num = &self.upper;
        let scale = num.bits().max(den.bits()).saturating_sub(60);
        (num >> scale).to_f64().unwrap_or(f64::NAN) / (den >> scale).to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact binomial coefficient.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn pythagoras_bounds(n: u64, s: u64, d: u64) -> Result<PythagorasBounds> {
    if n == 0 || s == 0 || d == 0 {
        return Err(Error::Input("n, s, d must be positive".into()));
    }
    let upper = binom(n + 2 * s * d - 1, 2 * s * d);
    let den = binom(n + d - 1, d);
    let lower = (&upper + &den - BigUint::one()) / &den;
    let asymptotic = BigUint::from(2 * s).pow((n - 1) as u32);
    Ok(PythagorasBounds { lower, upper, asymptotic })
}
