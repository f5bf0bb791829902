//! Canonical JSON encoding of forms:
//! `{"arity":2|3, "degree":d, "terms":[{"exp":[..], "num":"..", "den":".."}]}`,
//! with `{"coef": <double>}` in place of `num`/`den` for floating forms.
//!
//! Terms are emitted nonzero only, binary ascending in the `x`-degree and
//! ternary in graded lexicographic order (`a > b > c`). Keys are sorted.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, Form, TernaryForm};
use crate::scalar::{rational_to_f64, Field, Rational};

/// Scalars with a canonical JSON term encoding.
pub trait JsonCoef: Field {
    fn encode(&self, term: &mut Map<String, Value>);
}

impl JsonCoef for Rational {
    fn encode(&self, term: &mut Map<String, Value>) {
        term.insert("num".into(), Value::String(self.numer().to_string()));
        term.insert("den".into(), Value::String(self.denom().to_string()));
    }
}

impl JsonCoef for f64 {
    fn encode(&self, term: &mut Map<String, Value>) {
        term.insert("coef".into(), json!(self));
    }
}

fn term<T: JsonCoef>(exp: &[u32], c: &T) -> Value {
    let mut m = Map::new();
    m.insert("exp".into(), json!(exp));
    c.encode(&mut m);
    Value::Object(m)
}

pub fn binary_to_json<T: JsonCoef>(f: &BinaryForm<T>) -> Value {
    let d = f.degree() as u32;
    let terms: Vec<Value> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| term(&[i as u32, d - i as u32], c))
        .collect();
    json!({"arity": 2, "degree": d, "terms": terms})
}

pub fn ternary_to_json<T: JsonCoef>(f: &TernaryForm<T>) -> Value {
    let terms: Vec<Value> = f.terms().filter(|(_, c)| !c.is_zero()).map(|(m, c)| term(&m.0, c)).collect();
    json!({"arity": 3, "degree": f.degree(), "terms": terms})
}

pub fn form_to_json<T: JsonCoef>(f: &Form<T>) -> Value {
    match f {
        Form::Binary(b) => binary_to_json(b),
        Form::Ternary(t) => ternary_to_json(t),
    }
}

/// A decoded form, exact or floating as in the input.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedForm {
    Exact(Form<Rational>),
    Float(Form<f64>),
}

impl ParsedForm {
    pub fn arity(&self) -> usize {
        match self {
            ParsedForm::Exact(f) => f.arity(),
            ParsedForm::Float(f) => f.arity(),
        }
    }

    /// The binary form with round-to-nearest conversion of exact coefficients.
    pub fn binary_f64(&self) -> Result<BinaryForm<f64>> {
        match self {
            ParsedForm::Exact(Form::Binary(b)) => Ok(b.map(rational_to_f64)),
            ParsedForm::Float(Form::Binary(b)) => Ok(b.clone()),
            _ => Err(Error::ArityMismatch(2, 3)),
        }
    }

    pub fn binary_exact(&self) -> Option<&BinaryForm<Rational>> {
        match self {
            ParsedForm::Exact(Form::Binary(b)) => Some(b),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ParsedForm::Exact(f) => form_to_json(f),
            ParsedForm::Float(f) => form_to_json(f),
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn get_u32(v: &Value, key: &str) -> Result<u32> {
    v.get(key)
        .and_then(Value::as_u64)
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| bad(format!("missing or invalid \"{key}\"")))
}

fn parse_int(v: Option<&Value>, key: &str) -> Result<BigInt> {
    match v {
        Some(Value::String(s)) => s.parse().map_err(|_| bad(format!("\"{key}\" is not a decimal integer: {s}"))),
        Some(Value::Number(n)) if n.is_i64() => Ok(BigInt::from(n.as_i64().expect("checked"))),
        _ => Err(bad(format!("missing or invalid \"{key}\""))),
    }
}

enum Coef {
    Exact(Rational),
    Float(f64),
}

fn parse_term(t: &Value, arity: usize, degree: u32) -> Result<(Vec<u32>, Coef)> {
    let obj = t.as_object().ok_or_else(|| bad("term is not an object"))?;
    for k in obj.keys() {
        if !matches!(k.as_str(), "exp" | "num" | "den" | "coef") {
            return Err(bad(format!("unknown term key \"{k}\"")));
        }
    }
    let exp: Vec<u32> = obj
        .get("exp")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("term without \"exp\""))?
        .iter()
        .map(|e| e.as_u64().and_then(|n| u32::try_from(n).ok()))
        .collect::<Option<_>>()
        .ok_or_else(|| bad("exponents must be nonnegative integers"))?;
    if exp.len() != arity || exp.iter().sum::<u32>() != degree {
        return Err(bad(format!("exponent {exp:?} does not match arity {arity} and degree {degree}")));
    }
    let exact = obj.contains_key("num") || obj.contains_key("den");
    let coef = match (exact, obj.get("coef")) {
        (true, Some(_)) => return Err(bad("term mixes num/den with coef")),
        (true, None) => {
            let num = parse_int(obj.get("num"), "num")?;
            let den = match obj.get("den") {
                None => BigInt::one(),
                v => parse_int(v, "den")?,
            };
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            Coef::Exact(Rational::new(num, den))
        }
        (false, Some(c)) => {
            let v = c.as_f64().ok_or_else(|| bad("coef is not a number"))?;
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            Coef::Float(v)
        }
        (false, None) => return Err(bad("term without coefficient")),
    };
    Ok((exp, coef))
}

/// Decode a canonical form. All terms must agree on exact versus floating.
pub fn form_from_json(v: &Value) -> Result<ParsedForm> {
    let obj = v.as_object().ok_or_else(|| bad("form is not an object"))?;
    for k in obj.keys() {
        if !matches!(k.as_str(), "arity" | "degree" | "terms") {
            return Err(bad(format!("unknown form key \"{k}\"")));
        }
    }
    let arity = get_u32(v, "arity")? as usize;
    let degree = get_u32(v, "degree")?;
    if arity != 2 && arity != 3 {
        return Err(bad(format!("arity must be 2 or 3, got {arity}")));
    }
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing \"terms\""))?;
    let parsed = terms.iter().map(|t| parse_term(t, arity, degree)).collect::<Result<Vec<_>>>()?;
    let mut seen = std::collections::BTreeSet::new();
    for (e, _) in &parsed {
        if !seen.insert(e.clone()) {
            return Err(bad(format!("duplicate exponent {e:?}")));
        }
    }
    let float = parsed.iter().any(|(_, c)| matches!(c, Coef::Float(_)));
    if float && parsed.iter().any(|(_, c)| matches!(c, Coef::Exact(_))) {
        return Err(bad("form mixes exact and floating coefficients"));
    }
    fn build<T: Field>(arity: usize, degree: u32, terms: Vec<(Vec<u32>, T)>) -> Result<Form<T>> {
        if arity == 2 {
            let mut c = vec![T::zero(); degree as usize + 1];
            for (e, v) in terms {
                c[e[0] as usize] = v;
            }
            Ok(Form::Binary(BinaryForm::new(c)))
        } else {
            Ok(Form::Ternary(TernaryForm::from_terms(degree, terms.into_iter().map(|(e, v)| ([e[0], e[1], e[2]], v)))?))
        }
    }
    if float {
        let t = parsed.into_iter().map(|(e, c)| (e, if let Coef::Float(v) = c { v } else { unreachable!() })).collect();
        Ok(ParsedForm::Float(build(arity, degree, t)?))
    } else {
        let t = parsed.into_iter().map(|(e, c)| (e, if let Coef::Exact(v) = c { v } else { unreachable!() })).collect();
        Ok(ParsedForm::Exact(build(arity, degree, t)?))
    }
}

/// Decode from a JSON string.
pub fn form_from_str(s: &str) -> Result<ParsedForm> {
    let v: Value = serde_json::from_str(s).map_err(|e| bad(format!("malformed JSON: {e}")))?;
    form_from_json(&v)
}
