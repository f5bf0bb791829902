//! Binary and ternary forms, inhomogeneous bivariate polynomials and the
//! apolarity (differentiation) pairing.
//!
//! Binary forms are dense: `coeffs[i]` is the coefficient of `x^i y^(d-i)`.
//! Ternary forms are sparse in the variables `(a, b, c)` and iterate in graded
//! lexicographic order with `a > b > c`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

fn factorial<T: Field>(n: u32) -> T {
    (1..=n as i64).fold(T::one(), |acc, k| acc * T::from_i64(k))
}

/// `n! / (n-k)!`
fn falling<T: Field>(n: u32, k: u32) -> T {
    ((n - k + 1) as i64..=n as i64).fold(T::one(), |acc, j| acc * T::from_i64(j))
}

pub fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as i64;
    let mut acc: i64 = 1;
    for j in 0..k {
        acc = acc * (n as i64 - j) / (j + 1);
    }
    acc
}

// ---------------------------------------------------------------------------
// Univariate helpers (ascending coefficient vectors).

pub(crate) mod upoly {
    use super::*;

    pub fn trim<T: Field>(p: &mut Vec<T>) {
        while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
            p.pop();
        }
        if p.is_empty() {
            p.push(T::zero());
        }
    }

    pub fn is_zero<T: Field>(p: &[T]) -> bool {
        p.iter().all(|c| c.is_zero())
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree<T: Field>(p: &[T]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }

    pub fn derivative<T: Field>(p: &[T]) -> Vec<T> {
        let mut d: Vec<T> = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * T::from_i64(i as i64))
            .collect();
        if d.is_empty() {
            d.push(T::zero());
        }
        d
    }

    pub fn div_rem<T: Field>(num: &[T], den: &[T]) -> (Vec<T>, Vec<T>) {
        let dd = degree(den).expect("division by zero polynomial");
        let mut rem: Vec<T> = num.to_vec();
        let nd = match degree(&rem) {
            Some(n) if n >= dd => n,
            _ => {
                trim(&mut rem);
                return (vec![T::zero()], rem);
            }
        };
        let mut quo = vec![T::zero(); nd - dd + 1];
        let lead = den[dd].clone();
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..=dd {
                rem[k + j] = rem[k + j].clone() - c.clone() * den[j].clone();
            }
            quo[k] = c;
        }
        rem.truncate(dd.max(1));
        trim(&mut rem);
        trim(&mut quo);
        (quo, rem)
    }

    pub fn monic<T: Field>(p: &[T]) -> Vec<T> {
        match degree(p) {
            None => vec![T::zero()],
            Some(d) => {
                let lead = p[d].clone();
                p[..=d].iter().map(|c| c.clone() / lead.clone()).collect()
            }
        }
    }

    pub fn is_one<T: Field>(p: &[T]) -> bool {
        degree(p) == Some(0) && p[0] == T::one()
    }

    /// Yun's square-free decomposition of a nonzero polynomial over an exact
    /// field: `p = lc · Π out[i]^(i+1)` with monic, pairwise coprime factors.
    pub fn squarefree<T: Field>(p: &[T]) -> Vec<Vec<T>> {
        let a = monic(p);
        let da = derivative(&a);
        let b = gcd(&a, &da);
        let mut c = div_rem(&a, &b).0;
        let mut d = sub(&div_rem(&da, &b).0, &derivative(&c));
        let mut out = Vec::new();
        while !is_one(&c) && degree(&c).is_some() {
            let ai = gcd(&c, &d);
            c = div_rem(&c, &ai).0;
            d = sub(&div_rem(&d, &ai).0, &derivative(&c));
            out.push(ai);
        }
        out
    }

    pub fn sub<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
        let n = a.len().max(b.len());
        let mut out: Vec<T> = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(T::zero);
                let y = b.get(i).cloned().unwrap_or_else(T::zero);
                x - y
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Monic gcd (exact fields).
    pub fn gcd<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !is_zero(&b) {
            let (_, r) = div_rem(&a, &b);
            a = b;
            b = r;
        }
        monic(&a)
    }
}

// ---------------------------------------------------------------------------
// Binary forms.

/// Homogeneous polynomial in `x, y` of fixed degree.
#[derive(Clone, PartialEq)]
pub struct BinaryForm<T> {
    degree: usize,
    coeffs: Vec<T>,
}

impl<T: Field> BinaryForm<T> {
    /// Form with `coeffs[i]` the coefficient of `x^i y^(d-i)`; the degree is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| T::from_i64(v)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            degree,
            coeffs: vec![T::zero(); degree + 1],
        }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^xdeg · y^(degree - xdeg)`
    pub fn monomial(degree: usize, xdeg: usize, c: T) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[xdeg] = c;
        f
    }

    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn y() -> Self {
        Self::new(vec![T::one(), T::zero()])
    }

    /// `u x + v y`
    pub fn linear(u: T, v: T) -> Self {
        Self::new(vec![v, u])
    }

    /// `a x^2 + b xy + c y^2`
    pub fn quadratic(a: T, b: T, c: T) -> Self {
        Self::new(vec![c, b, a])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, xdeg: usize) -> &T {
        &self.coeffs[xdeg]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> BinaryForm<U> {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> BinaryForm<f64> {
        self.map(|c| c.to_f64())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::Dimension(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(BinaryForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.degree + other.degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        let mut acc = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc + c.clone() * x.pow(i as u32) * y.pow((self.degree - i) as u32);
        }
        acc
    }

    pub fn derivative_x(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        Self::new(
            (1..=self.degree)
                .map(|i| self.coeffs[i].clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn derivative_y(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        Self::new(
            (0..self.degree)
                .map(|i| self.coeffs[i].clone() * T::from_i64((self.degree - i) as i64))
                .collect(),
        )
    }

    /// Apolarity pairing `<self, f>`: `self` acts on `f` by differentiation,
    /// `<x^α, x^β> = β!/(β-α)! · x^(β-α)` when `α ≤ β` and 0 otherwise.
    ///
    /// When `deg self > deg f` every monomial pairing vanishes and the result is
    /// the zero form of degree 0.
    pub fn apolar(&self, f: &Self) -> Self {
        let (e, d) = (self.degree, f.degree);
        if e > d {
            return Self::zero(0);
        }
        let mut out = vec![T::zero(); d - e + 1];
        for (ai, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let aj = e - ai;
            for (bi, b) in f.coeffs.iter().enumerate() {
                let bj = d - bi;
                if b.is_zero() || ai > bi || aj > bj {
                    continue;
                }
                let w = falling::<T>(bi as u32, ai as u32) * falling::<T>(bj as u32, aj as u32);
                out[bi - ai] = out[bi - ai].clone() + a.clone() * b.clone() * w;
            }
        }
        Self::new(out)
    }

    /// Scalar pairing of two forms of equal degree.
    pub fn pairing(&self, f: &Self) -> T {
        assert_eq!(self.degree, f.degree, "pairing needs equal degrees");
        self.coeffs
            .iter()
            .zip(&f.coeffs)
            .enumerate()
            .fold(T::zero(), |acc, (i, (a, b))| {
                acc + a.clone()
                    * b.clone()
                    * factorial::<T>(i as u32)
                    * factorial::<T>((self.degree - i) as u32)
            })
    }

    /// `f ∘ M`, i.e. `f(m00 x + m01 y, m10 x + m11 y)`.
    pub fn change_coords(&self, m: &[[T; 2]; 2]) -> Result<Self> {
        let det = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
        let singular = if T::EXACT {
            det.is_zero()
        } else {
            let scale = m.iter().flatten().map(|v| v.magnitude()).fold(0.0, f64::max);
            det.magnitude() <= 1e-14 * scale * scale
        };
        if singular {
            return Err(Error::SingularMatrix);
        }
        let lx = Self::linear(m[0][0].clone(), m[0][1].clone());
        let ly = Self::linear(m[1][0].clone(), m[1][1].clone());
        let mut out = Self::zero(self.degree);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = lx
                .pow(i as u32)
                .mul(&ly.pow((self.degree - i) as u32))
                .scale(c);
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Multiplicity of the linear factor `y`.
    pub fn y_multiplicity(&self) -> usize {
        match upoly::degree(&self.coeffs) {
            None => self.degree,
            Some(top) => self.degree - top,
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() || d.degree > self.degree {
            return None;
        }
        let out_deg = self.degree - d.degree;
        if self.is_zero() {
            return Some(Self::zero(out_deg));
        }
        if self.y_multiplicity() < d.y_multiplicity() {
            return None;
        }
        let (quo, rem) = upoly::div_rem(&self.coeffs, &d.coeffs);
        if !upoly::is_zero(&rem) {
            return None;
        }
        let mut c = quo;
        c.resize(out_deg + 1, T::zero());
        if c.len() > out_deg + 1 {
            return None;
        }
        Some(Self::new(c))
    }

    /// Monic (in the leading x-power) gcd over an exact field.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let ym = self.y_multiplicity().min(other.y_multiplicity());
        let g = upoly::gcd(&self.coeffs, &other.coeffs);
        let gd = upoly::degree(&g).unwrap_or(0);
        let mut c = g;
        c.truncate(gd + 1);
        c.resize(gd + ym + 1, T::zero());
        Self::new(c)
    }

    /// Dehomogenized polynomial `f(x, 1)` as an ascending coefficient vector.
    pub fn dehomogenize(&self) -> Vec<T> {
        let mut v = self.coeffs.clone();
        upoly::trim(&mut v);
        v
    }

    /// Square-free factorization over an exact field: `self = lc · Π gᵢ^mᵢ`
    /// with each `gᵢ` square-free, pairwise coprime and normalized (monic in
    /// `x`, or equal to `y`). Returns `(lc, [(gᵢ, mᵢ)])` sorted by multiplicity.
    pub fn squarefree_factors(&self) -> Option<(T, Vec<(BinaryForm<T>, usize)>)> {
        if !T::EXACT || self.is_zero() {
            return None;
        }
        let p = self.dehomogenize();
        let top = upoly::degree(&p).expect("nonzero");
        let lc = p[top].clone();
        let mut out = Vec::new();
        for (i, g) in upoly::squarefree(&p).into_iter().enumerate() {
            if let Some(dg) = upoly::degree(&g) {
                if dg > 0 {
                    let mut coeffs = g[..=dg].to_vec();
                    coeffs.truncate(dg + 1);
                    out.push((BinaryForm::new(coeffs), i + 1));
                }
            }
        }
        let ym = self.y_multiplicity();
        if ym > 0 {
            out.push((BinaryForm::y(), ym));
        }
        out.sort_by_key(|(_, m)| *m);
        Some((lc, out))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coef_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| {
                let v = c.to_f64();
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Bombieri norm `sqrt(Σ |f_i|^2 / C(d, i))`, invariant under orthogonal changes of coordinates.
    pub fn bombieri_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let v = c.to_f64();
                v * v / binomial(self.degree as u32, i as u32) as f64
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Inhomogeneous view of the form.
    pub fn to_poly2(&self) -> Poly2<T> {
        let mut p = Poly2::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            p.add_term((i as u32, (self.degree - i) as u32), c.clone());
        }
        p
    }
}

impl<T: Field> fmt::Debug for BinaryForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in (0..=self.degree).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})x^{}y^{}", c, i, self.degree - i)?;
        }
        if first {
            write!(f, "0[deg {}]", self.degree)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Ternary forms.

/// Exponent triple of a monomial `a^e0 b^e1 c^e2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono3(pub [u32; 3]);

impl Mono3 {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

// Graded lex with a > b > c, highest first: a^4 < a^3 b < ... < c^4 in iteration order.
impl Ord for Mono3 {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Mono3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent triples of total degree `d` in canonical order.
pub fn ternary_monomials(d: u32) -> Vec<Mono3> {
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push(Mono3([i, j, d - i - j]));
        }
    }
    out
}

/// Homogeneous polynomial in `a, b, c`.
#[derive(Clone, PartialEq)]
pub struct TernaryForm<T> {
    degree: u32,
    terms: BTreeMap<Mono3, T>,
}

impl<T: Field> TernaryForm<T> {
    pub fn zero(degree: u32) -> Self {
        TernaryForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = ([u32; 3], T)>) -> Result<Self> {
        let mut f = Self::zero(degree);
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::Input(format!("exponent {e:?} does not have degree {degree}")));
            }
            f.add_term(Mono3(e), c);
        }
        Ok(f)
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0, 0, 0];
        e[i] = 1;
        let mut f = Self::zero(1);
        f.add_term(Mono3(e), T::one());
        f
    }

    /// `u0 a + u1 b + u2 c`
    pub fn linear(u: [T; 3]) -> Self {
        let mut f = Self::zero(1);
        for (i, c) in u.into_iter().enumerate() {
            let mut e = [0, 0, 0];
            e[i] = 1;
            f.add_term(Mono3(e), c);
        }
        f
    }

    fn add_term(&mut self, m: Mono3, c: T) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono3, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: [u32; 3]) -> T {
        self.terms.get(&Mono3(e)).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dense coefficients in canonical monomial order.
    pub fn coeff_vector(&self) -> Vec<T> {
        ternary_monomials(self.degree)
            .into_iter()
            .map(|m| self.coeff(m.0))
            .collect()
    }

    pub fn from_coeff_vector(degree: u32, v: &[T]) -> Self {
        let monos = ternary_monomials(degree);
        assert_eq!(monos.len(), v.len());
        let mut f = Self::zero(degree);
        for (m, c) in monos.into_iter().zip(v) {
            f.add_term(m, c.clone());
        }
        f
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> TernaryForm<U> {
        let mut out = TernaryForm::zero(self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn to_f64(&self) -> TernaryForm<f64> {
        self.map(|c| c.to_f64())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::Dimension(format!(
                "adding ternary forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e = [m1.0[0] + m2.0[0], m1.0[1] + m2.0[1], m1.0[2] + m2.0[2]];
                out.add_term(Mono3(e), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::zero(0);
        acc.add_term(Mono3([0, 0, 0]), T::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, p: &[T; 3]) -> T {
        self.terms.iter().fold(T::zero(), |acc, (m, c)| {
            acc + c.clone() * p[0].pow(m.0[0]) * p[1].pow(m.0[1]) * p[2].pow(m.0[2])
        })
    }

    /// Partial derivative with respect to variable `i` (0 = a, 1 = b, 2 = c).
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let mut e = m.0;
            e[i] -= 1;
            out.add_term(Mono3(e), c.clone() * T::from_i64(m.0[i] as i64));
        }
        out
    }

    /// Directional derivative `Σ u_i ∂_i F`.
    pub fn directional(&self, u: &[T; 3]) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (i, ui) in u.iter().enumerate() {
            out = out.add(&self.partial(i).scale(ui)).expect("same degree");
        }
        out
    }

    /// `F(x^2, xy, y^2)`
    pub fn veronese_pullback(&self) -> BinaryForm<T> {
        let d = 2 * self.degree as usize;
        let mut out = BinaryForm::<T>::zero(d);
        for (m, c) in &self.terms {
            let xdeg = (2 * m.0[0] + m.0[1]) as usize;
            out.coeffs[xdeg] = out.coeffs[xdeg].clone() + c.clone();
        }
        out
    }

    /// Max absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficients.
    pub fn coef_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

impl<T: Field> fmt::Debug for TernaryForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0[deg {}]", self.degree);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({:?})a^{}b^{}c^{}", c, m.0[0], m.0[1], m.0[2]))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Inhomogeneous bivariate polynomials.

/// Polynomial in `x, y`, keyed by `(x-exponent, y-exponent)`.
#[derive(Clone, PartialEq)]
pub struct Poly2<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Field> Poly2<T> {
    pub fn zero() -> Self {
        Poly2 {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        let mut p = Self::zero();
        p.add_term((0, 0), c);
        p
    }

    pub fn monomial(xe: u32, ye: u32, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term((xe, ye), c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, T::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, T::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), T)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: (u32, u32), c: T) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, xe: u32, ye: u32) -> T {
        self.terms.get(&(xe, ye)).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(a, b)| a == 0 && b == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone() * s.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term((e1.0 + e2.0, e1.1 + e2.1), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(T::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self(px, py)`, expanded.
    pub fn substitute(&self, px: &Self, py: &Self) -> Self {
        let max_x = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let max_y = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        let mut xpows = vec![Self::constant(T::one())];
        for k in 1..=max_x as usize {
            let next = xpows[k - 1].mul(px);
            xpows.push(next);
        }
        let mut ypows = vec![Self::constant(T::one())];
        for k in 1..=max_y as usize {
            let next = ypows[k - 1].mul(py);
            ypows.push(next);
        }
        let mut out = Self::zero();
        for ((xe, ye), c) in &self.terms {
            let t = xpows[*xe as usize].mul(&ypows[*ye as usize]).scale(c);
            out = out.add(&t);
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0 + e.1).max()
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).max()
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.terms.iter().fold(T::zero(), |acc, ((xe, ye), c)| {
            acc + c.clone() * x.pow(*xe) * y.pow(*ye)
        })
    }

    /// `self(m00 x + m01 y, m10 x + m11 y)`
    pub fn change_coords(&self, m: &[[T; 2]; 2]) -> Self {
        let px = Self::from_terms([((1, 0), m[0][0].clone()), ((0, 1), m[0][1].clone())]);
        let py = Self::from_terms([((1, 0), m[1][0].clone()), ((0, 1), m[1][1].clone())]);
        self.substitute(&px, &py)
    }
}

impl<T: Field> fmt::Debug for Poly2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("({:?})x^{}y^{}", c, a, b))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `f(px, py)` for a binary form `f`.
pub fn substitute_binary<T: Field>(f: &BinaryForm<T>, px: &Poly2<T>, py: &Poly2<T>) -> Poly2<T> {
    f.to_poly2().substitute(px, py)
}

// ---------------------------------------------------------------------------
// Arity-tagged forms.

/// A binary or ternary form; operations across arities are rejected.
#[derive(Clone, PartialEq, Debug)]
pub enum Form<T: Field> {
    Binary(BinaryForm<T>),
    Ternary(TernaryForm<T>),
}

impl<T: Field> Form<T> {
    pub fn arity(&self) -> usize {
        match self {
            Form::Binary(_) => 2,
            Form::Ternary(_) => 3,
        }
    }
}

pub fn poly_mul<T: Field>(f: &Form<T>, g: &Form<T>) -> Result<Form<T>> {
    match (f, g) {
        (Form::Binary(a), Form::Binary(b)) => Ok(Form::Binary(a.mul(b))),
        (Form::Ternary(a), Form::Ternary(b)) => Ok(Form::Ternary(a.mul(b))),
        _ => Err(Error::ArityMismatch(f.arity(), g.arity())),
    }
}

/// Apolarity pairing `<g, f>` with `g` acting on `f` by differentiation.
pub fn apolar_pair<T: Field>(g: &Form<T>, f: &Form<T>) -> Result<Form<T>> {
    match (g, f) {
        (Form::Binary(a), Form::Binary(b)) => Ok(Form::Binary(a.apolar(b))),
        (Form::Ternary(a), Form::Ternary(b)) => Ok(Form::Ternary(ternary_apolar(a, b))),
        _ => Err(Error::ArityMismatch(g.arity(), f.arity())),
    }
}

/// Ternary apolarity pairing, same monomial rule as the binary one.
pub fn ternary_apolar<T: Field>(g: &TernaryForm<T>, f: &TernaryForm<T>) -> TernaryForm<T> {
    if g.degree > f.degree {
        return TernaryForm::zero(0);
    }
    let mut out = TernaryForm::zero(f.degree - g.degree);
    for (ma, ca) in &g.terms {
        for (mb, cb) in &f.terms {
            if (0..3).any(|i| ma.0[i] > mb.0[i]) {
                continue;
            }
            let w = (0..3).fold(T::one(), |acc, i| acc * falling::<T>(mb.0[i], ma.0[i]));
            let e = [mb.0[0] - ma.0[0], mb.0[1] - ma.0[1], mb.0[2] - ma.0[2]];
            out.add_term(Mono3(e), ca.clone() * cb.clone() * w);
        }
    }
    out
}

/// `f ∘ M` for a binary form; errors on singular `M`.
pub fn change_coords_binary<T: Field>(f: &BinaryForm<T>, m: &[[T; 2]; 2]) -> Result<BinaryForm<T>> {
    f.change_coords(m)
}

/// Inverse of a 2×2 matrix over a field.
pub fn inverse2<T: Field>(m: &[[T; 2]; 2]) -> Result<[[T; 2]; 2]> {
    let det = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok([
        [m[1][1].clone() / det.clone(), -m[0][1].clone() / det.clone()],
        [-m[1][0].clone() / det.clone(), m[0][0].clone() / det],
    ])
}

/// If `f` is a scalar multiple of `l^d` for a linear form `l`, return `l`.
///
/// Uses the normalized coefficients `a_i = f_i / C(d, i)`, which must form a
/// geometric progression. `tol` is a relative tolerance (ignored for exact fields).
pub fn as_power_of_linear<T: Field>(f: &BinaryForm<T>, tol: f64) -> Option<BinaryForm<T>> {
    let d = f.degree();
    if f.is_zero() || d == 0 {
        return None;
    }
    let a: Vec<T> = (0..=d)
        .map(|i| f.coeff(i).clone() / T::from_i64(binomial(d as u32, i as u32)))
        .collect();
    let scale = a.iter().map(|v| v.magnitude()).fold(0.0, f64::max);
    let small = |v: &T| {
        if T::EXACT {
            v.is_zero()
        } else {
            v.magnitude() <= tol * scale
        }
    };
    if small(&a[0]) && small(&a[d]) {
        return None;
    }
    // a_i = λ u^i v^(d-i); pick the endpoint with the larger magnitude as anchor.
    let (l, pred): (BinaryForm<T>, Vec<T>) = if a[0].magnitude() >= a[d].magnitude() {
        let r = a[1].clone() / a[0].clone();
        let mut p = Vec::with_capacity(d + 1);
        let mut cur = a[0].clone();
        for _ in 0..=d {
            p.push(cur.clone());
            cur = cur * r.clone();
        }
        (BinaryForm::linear(r, T::one()), p)
    } else {
        let s = a[d - 1].clone() / a[d].clone();
        let mut p = vec![T::zero(); d + 1];
        let mut cur = a[d].clone();
        for i in (0..=d).rev() {
            p[i] = cur.clone();
            cur = cur * s.clone();
        }
        (BinaryForm::linear(T::one(), s), p)
    };
    if a.iter().zip(&pred).all(|(x, y)| small(&(x.clone() - y.clone()))) {
        Some(l)
    } else {
        None
    }
}

/// Exact rational binary form from integer coefficients.
pub fn qform(c: &[i64]) -> BinaryForm<Rational> {
    BinaryForm::from_i64s(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn xq() -> BinaryForm<Rational> {
        BinaryForm::x()
    }
    fn yq() -> BinaryForm<Rational> {
        BinaryForm::y()
    }

    #[test]
    fn difference_of_squares() {
        let f = xq().add(&yq()).unwrap();
        let g = xq().sub(&yq()).unwrap();
        assert_eq!(f.mul(&g), qform(&[-1, 0, 1]));
    }

    #[test]
    fn multiply_by_one() {
        let f = qform(&[3, -1, 4, 1]);
        assert_eq!(f.mul(&BinaryForm::constant(qi(1))), f);
    }

    #[test]
    fn fourth_power_extreme_coefficients() {
        // (x^2 + xy - y^2)^4, multinomial oracle for the extremes and the middle.
        let f = BinaryForm::quadratic(qi(1), qi(1), qi(-1)).pow(4);
        assert_eq!(f.coeff(8), &qi(1));
        assert_eq!(f.coeff(0), &qi(1));
        // x^4 y^4: sum over (j,k,l) with 2j+k = 4, j+k+l = 4 of 4!/(j!k!l!) 1^j 1^k (-1)^l
        let mut oracle = 0i64;
        for j in 0..=4i64 {
            for k in 0..=4 - j {
                let l = 4 - j - k;
                if 2 * j + k == 4 {
                    let fact = |n: i64| (1..=n).product::<i64>().max(1);
                    let sign = if l % 2 == 0 { 1 } else { -1 };
                    oracle += sign * 24 / (fact(j) * fact(k) * fact(l));
                }
            }
        }
        assert_eq!(f.coeff(4), &qi(oracle));
    }

    #[test]
    fn substitution_kills_vanishing_binomial() {
        // (y - x^2)^4 + 1 with y -> x^2
        let base = Poly2::y().sub(&Poly2::monomial(2, 0, qi(1)));
        let f = base.pow(4).add(&Poly2::constant(qi(1)));
        let out = f.substitute(&Poly2::x(), &Poly2::monomial(2, 0, qi(1)));
        assert_eq!(out, Poly2::constant(qi(1)));
        let x8 = BinaryForm::monomial(8, 8, qi(1));
        assert_eq!(substitute_binary(&x8, &Poly2::x(), &Poly2::y()), x8.to_poly2());
    }

    #[test]
    fn apolar_examples() {
        let x8 = BinaryForm::monomial(8, 8, qi(1));
        assert_eq!(x8.apolar(&x8), BinaryForm::constant(qi(40320)));
        assert!(xq().apolar(&BinaryForm::monomial(3, 0, qi(1))).is_zero());
        let xy = BinaryForm::monomial(2, 1, qi(1));
        let x2y2 = BinaryForm::monomial(4, 2, qi(1));
        assert_eq!(xy.apolar(&x2y2), BinaryForm::monomial(2, 1, qi(4)));
        assert_eq!(x8.pairing(&x8), qi(40320));
    }

    #[test]
    fn apolar_arity_mismatch() {
        let b = Form::Binary(xq());
        let t = Form::Ternary(TernaryForm::<Rational>::var(0));
        assert_eq!(apolar_pair(&b, &t), Err(Error::ArityMismatch(2, 3)));
        assert_eq!(poly_mul(&t, &b), Err(Error::ArityMismatch(3, 2)));
    }

    #[test]
    fn ternary_apolar_matches_differentiation() {
        let a = TernaryForm::<Rational>::var(0);
        let b = TernaryForm::<Rational>::var(1);
        let f = a.pow(2).mul(&b);
        // d/da (a^2 b) = 2ab
        assert_eq!(ternary_apolar(&a, &f), a.mul(&b).scale(&qi(2)));
    }

    #[test]
    fn change_coords_examples() {
        let x8 = BinaryForm::monomial(8, 8, qi(1));
        let swap = [[qi(0), qi(1)], [qi(1), qi(0)]];
        assert_eq!(x8.change_coords(&swap).unwrap(), BinaryForm::monomial(8, 0, qi(1)));
        let f = qform(&[-1, 0, 1]);
        let m = [[qi(1), qi(1)], [qi(1), qi(-1)]];
        assert_eq!(f.change_coords(&m).unwrap(), BinaryForm::monomial(2, 1, qi(4)));
        let sing = [[qi(1), qi(2)], [qi(2), qi(4)]];
        assert_eq!(f.change_coords(&sing), Err(Error::SingularMatrix));
    }

    #[test]
    fn gcd_and_division() {
        let l1 = BinaryForm::linear(qi(1), qi(2));
        let l2 = BinaryForm::linear(qi(3), qi(-1));
        let f = l1.pow(3).mul(&l2).mul(&yq());
        let g = l1.pow(2).mul(&yq().pow(2));
        let h = f.gcd(&g);
        // monic in x: l1^2 * y up to scaling
        let expected = l1.pow(2).mul(&yq());
        assert!(h.div_exact(&expected).is_some() && expected.div_exact(&h).is_some());
        assert_eq!(f.div_exact(&l1.pow(3)).unwrap(), l2.mul(&yq()));
        assert!(f.div_exact(&l2.pow(2)).is_none());
        let y4 = yq().pow(4);
        assert!(yq().pow(3).mul(&xq()).div_exact(&y4).is_none());
    }

    #[test]
    fn powers_of_linear_forms() {
        let l = BinaryForm::linear(qi(2), qi(-3));
        let f = l.pow(5).scale(&q(7, 3));
        let r = as_power_of_linear(&f, 0.0).unwrap();
        assert!(r.pow(5).div_exact(&l.pow(5)).is_some());
        assert_eq!(as_power_of_linear(&BinaryForm::monomial(4, 4, qi(1)), 0.0).unwrap(), xq());
        assert_eq!(as_power_of_linear(&BinaryForm::monomial(4, 0, qi(2)), 0.0).unwrap(), yq());
        assert!(as_power_of_linear(&qform(&[1, 0, 1]), 0.0).is_none());
        assert!(as_power_of_linear(&BinaryForm::monomial(2, 1, qi(1)), 0.0).is_none());
        let g = BinaryForm::<f64>::linear(1.0, 0.5).pow(4);
        assert!(as_power_of_linear(&g, 1e-12).is_some());
    }

    #[test]
    fn veronese_pullback_of_conic_vanishes() {
        let a = TernaryForm::<Rational>::var(0);
        let b = TernaryForm::<Rational>::var(1);
        let c = TernaryForm::<Rational>::var(2);
        let conic = b.pow(2).sub(&a.mul(&c)).unwrap();
        assert!(conic.veronese_pullback().is_zero());
        assert_eq!(a.pow(4).veronese_pullback(), BinaryForm::monomial(8, 8, qi(1)));
    }

    #[test]
    fn ternary_monomial_order() {
        let m = ternary_monomials(4);
        assert_eq!(m.len(), 15);
        assert_eq!(m[0].0, [4, 0, 0]);
        assert_eq!(m[1].0, [3, 1, 0]);
        assert_eq!(m[2].0, [3, 0, 1]);
        assert_eq!(m[3].0, [2, 2, 0]);
        assert_eq!(m[14].0, [0, 0, 4]);
        let f = TernaryForm::from_coeff_vector(4, &(0..15).map(qi).collect::<Vec<_>>());
        let keys: Vec<Mono3> = f.terms().map(|(m, _)| *m).collect();
        assert_eq!(keys, m[1..].to_vec());
    }

    #[test]
    fn directional_derivative() {
        let a = TernaryForm::<Rational>::var(0);
        let b = TernaryForm::<Rational>::var(1);
        let f = a.pow(2).mul(&b);
        let d = f.directional(&[qi(1), q(1, 2), qi(0)]);
        let expected = a.mul(&b).scale(&qi(2)).add(&a.pow(2).scale(&q(1, 2))).unwrap();
        assert_eq!(d, expected);
    }
}
