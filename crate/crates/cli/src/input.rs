use std::io::Read;

use powercone::forms::{BinaryForm, Form, Poly2};
use powercone::json::{form_from_json, ParsedForm};
use powercone::parse::parse_polynomial;
use powercone::scalar::{f64_to_rational, Rational};
use powercone::{Error, Result};
use serde_json::Value;

use crate::args::Input;

pub fn read_text(input: &Input) -> Result<String> {
    let path = input.file.as_ref().map(|p| p.display().to_string()).or_else(|| input.input.clone());
    match path.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Input(format!("reading stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Input(format!("reading {p}: {e}"))),
    }
}

fn is_json(s: &str) -> bool {
    matches!(s.trim_start().chars().next(), Some('{' | '['))
}

fn parse_json(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

/// One form, as canonical JSON or an expression.
pub fn form(text: &str) -> Result<ParsedForm> {
    if is_json(text) {
        form_from_json(&parse_json(text)?)
    } else {
        Ok(ParsedForm::Exact(parse_polynomial(text)?.to_form()?))
    }
}

/// Several forms: a JSON array of canonical forms, or expressions separated by `;`.
pub fn forms(text: &str) -> Result<Vec<ParsedForm>> {
    if is_json(text) {
        match parse_json(text)? {
            Value::Array(items) => items.iter().map(form_from_json).collect(),
            _ => Err(Error::Input("expected a JSON array of forms".into())),
        }
    } else {
        text.split(';').map(form).collect()
    }
}

pub fn binary_f64(f: &ParsedForm) -> Result<BinaryForm<f64>> {
    f.binary_f64()
}

/// Exact binary form; floating coefficients are taken as the dyadic rationals they are.
pub fn binary_exact(f: &ParsedForm) -> Result<BinaryForm<Rational>> {
    match f {
        ParsedForm::Exact(Form::Binary(b)) => Ok(b.clone()),
        ParsedForm::Float(Form::Binary(b)) => Ok(b.map(|v| f64_to_rational(*v))),
        _ => Err(Error::ArityMismatch(2, 3)),
    }
}

pub fn octic(f: &ParsedForm) -> Result<BinaryForm<f64>> {
    let b = binary_f64(f)?;
    if b.degree() != 8 {
        return Err(Error::Input(format!("expected a binary octic, got degree {}", b.degree())));
    }
    Ok(b)
}

/// A bivariate polynomial given as an expression (not necessarily homogeneous).
pub fn poly2(text: &str) -> Result<Poly2<Rational>> {
    if is_json(text) {
        return Err(Error::Input("bivariate polynomials are read as expressions".into()));
    }
    parse_polynomial(text)?.to_poly2()
}

pub fn rational(s: &str) -> Result<Rational> {
    let p = parse_polynomial(s)?;
    match p.terms.len() {
        0 => Ok(Rational::from_integer(0.into())),
        1 if p.terms.contains_key(&[0, 0, 0]) => Ok(p.terms[&[0, 0, 0]].clone()),
        _ => Err(Error::Input(format!("expected a number, got {s}"))),
    }
}

/// Rows separated by `;`, entries by `,`.
pub fn rational_rows<const R: usize, const C: usize>(s: &str) -> Result<[[Rational; C]; R]> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != R {
        return Err(Error::Input(format!("expected {R} rows separated by ';', got {}", rows.len())));
    }
    let mut out: [[Rational; C]; R] = std::array::from_fn(|_| std::array::from_fn(|_| Rational::from_integer(0.into())));
    for (i, row) in rows.iter().enumerate() {
        let entries: Vec<&str> = row.split(',').collect();
        if entries.len() != C {
            return Err(Error::Input(format!("row {i} needs {C} entries separated by ',', got {}", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            out[i][j] = rational(e)?;
        }
    }
    Ok(out)
}
