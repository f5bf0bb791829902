//! A small exact parser for polynomials such as `x^8 - 2*x^4*y^4`.
//!
//! ```text
//! poly    := term (('+' | '-') term)*
//! term    := ['+' | '-'] factor (['*'] factor)*
//! factor  := atom ['^' uint]
//! atom    := number | var | '(' poly ')'
//! number  := digits ['.' digits] ['/' digits]
//! var     := 'x' | 'y' | 'z' | 'a' | 'b' | 'c'
//! ```
//!
//! Whitespace is ignored. Decimals are read exactly (`0.1` is `1/10`).
//! Variables `x, y, z` and `a, b, c` name the same three slots and may not
//! be mixed in one expression.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, Form, Poly2, TernaryForm};
use crate::scalar::Rational;

/// Sparse polynomial in up to three variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub terms: BTreeMap<[u32; 3], Rational>,
    /// The variables were written `a, b, c`.
    pub abc: bool,
}

impl Parsed {
    fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0, 0, 0], c);
        }
        Parsed { terms, abc: false }
    }

    fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Parsed { terms: BTreeMap::from([(e, Rational::one())]), abc: false }
    }

    fn add(mut self, other: &Parsed, sign: i64) -> Self {
        for (e, c) in &other.terms {
            let entry = self.terms.entry(*e).or_insert_with(Rational::zero);
            *entry += c * Rational::from_integer(sign.into());
            if entry.is_zero() {
                self.terms.remove(e);
            }
        }
        self
    }

    fn mul(&self, other: &Parsed) -> Self {
        let mut out = Parsed { terms: BTreeMap::new(), abc: false };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let entry = out.terms.entry(e).or_insert_with(Rational::zero);
                *entry += c1 * c2;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    fn pow(&self, n: u32) -> Self {
        (0..n).fold(Parsed::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.dedup();
        d
    }

    fn uses(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    /// A homogeneous form in `x, y` of the given degree (or the degree of its terms).
    pub fn to_binary(&self, degree: Option<usize>) -> Result<BinaryForm<Rational>> {
        if self.uses(2) {
            return Err(Error::Input("binary form uses a third variable".into()));
        }
        let degs = self.degrees();
        let d = match (degree, degs.as_slice()) {
            (Some(d), []) => d,
            (Some(d), [e]) if *e as usize == d => d,
            (None, [e]) => *e as usize,
            (None, []) => return Err(Error::Input("zero polynomial needs an explicit degree".into())),
            _ => return Err(Error::Input(format!("not homogeneous of the expected degree (degrees {degs:?})"))),
        };
        let mut c = vec![Rational::zero(); d + 1];
        for (e, v) in &self.terms {
            c[e[0] as usize] = v.clone();
        }
        Ok(BinaryForm::new(c))
    }

    pub fn to_ternary(&self, degree: Option<u32>) -> Result<TernaryForm<Rational>> {
        let degs = self.degrees();
        let d = match (degree, degs.as_slice()) {
            (Some(d), []) => d,
            (Some(d), [e]) if *e == d => d,
            (None, [e]) => *e,
            _ => return Err(Error::Input(format!("not homogeneous of the expected degree (degrees {degs:?})"))),
        };
        TernaryForm::from_terms(d, self.terms.iter().map(|(e, c)| (*e, c.clone())))
    }

    /// Ternary when written in `a, b, c` or when `z` occurs, binary otherwise.
    pub fn to_form(&self) -> Result<Form<Rational>> {
        if self.abc || self.uses(2) {
            Ok(Form::Ternary(self.to_ternary(None)?))
        } else {
            Ok(Form::Binary(self.to_binary(None)?))
        }
    }

    /// An inhomogeneous polynomial in `x, y`.
    pub fn to_poly2(&self) -> Result<Poly2<Rational>> {
        if self.uses(2) {
            return Err(Error::Input("bivariate polynomial uses a third variable".into()));
        }
        Ok(Poly2::from_terms(self.terms.iter().map(|(e, c)| ((e[0], e[1]), c.clone()))))
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    family: Option<u8>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Input(format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    fn poly(&mut self) -> Result<Parsed> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term_unsigned()?;
            acc = acc.add(&t, if op == b'+' { 1 } else { -1 });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Parsed> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Parsed::constant(Rational::zero()).add(&self.term_unsigned()?, -1))
            }
            Some(b'+') => {
                self.pos += 1;
                self.term_unsigned()
            }
            _ => self.term_unsigned(),
        }
    }

    fn term_unsigned(&mut self) -> Result<Parsed> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Parsed> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.digits();
            let n: u32 = e.parse().map_err(|_| self.err("expected an exponent"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Parsed> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number().map(Parsed::constant),
            Some(c) => {
                let (slot, family) = match c {
                    b'x' | b'y' | b'z' => ((c - b'x') as usize, b'x'),
                    b'a' | b'b' | b'c' => ((c - b'a') as usize, b'a'),
                    _ => return Err(self.err(&format!("unexpected character '{}'", c as char))),
                };
                if self.family.is_some_and(|f| f != family) {
                    return Err(self.err("variables x,y,z and a,b,c are mixed"));
                }
                self.family = Some(family);
                self.pos += 1;
                Ok(Parsed::var(slot))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Rational> {
        let int = self.digits().to_string();
        let mut frac = String::new();
        if self.s.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac = self.digits().to_string();
        }
        if int.is_empty() && frac.is_empty() {
            return Err(self.err("expected a number"));
        }
        let digits: BigInt = format!("{int}{frac}").parse().expect("digits");
        let mut value = Rational::new(digits, BigInt::from(10u32).pow(frac.len() as u32));
        self.skip_ws();
        if self.s.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            self.skip_ws();
            let d = self.digits();
            let den: BigInt = d.parse().map_err(|_| self.err("expected a denominator"))?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            value /= Rational::from_integer(den);
        }
        Ok(value)
    }
}

/// Parse an expression.
pub fn parse_polynomial(s: &str) -> Result<Parsed> {
    let mut p = Parser { s: s.as_bytes(), pos: 0, family: None };
    let mut out = p.poly()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    out.abc = p.family == Some(b'a');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::qform;
    use crate::scalar::q;

    #[test]
    fn octic() {
        let f = parse_polynomial("x^8 - 2*x^4*y^4").unwrap().to_binary(None).unwrap();
        assert_eq!(f, qform(&[0, 0, 0, 0, -2, 0, 0, 0, 1]));
    }

    #[test]
    fn powers_and_fractions() {
        let f = parse_polynomial("(x + 2y)^2 + 0.5 x y - 1/3 y^2").unwrap().to_binary(None).unwrap();
        assert_eq!(f, BinaryForm::new(vec![q(11, 3), q(9, 2), q(1, 1)]));
    }

    #[test]
    fn errors() {
        assert!(parse_polynomial("x^").is_err());
        assert!(parse_polynomial("x + a").is_err());
        assert!(parse_polynomial("x^2 + y").unwrap().to_binary(None).is_err());
        assert!(parse_polynomial("(x").is_err());
    }

    #[test]
    fn arity_from_variables() {
        assert_eq!(parse_polynomial("a^4").unwrap().to_form().unwrap().arity(), 3);
        assert_eq!(parse_polynomial("x^4").unwrap().to_form().unwrap().arity(), 2);
        assert_eq!(parse_polynomial("x^3 z").unwrap().to_form().unwrap().arity(), 3);
    }
}
