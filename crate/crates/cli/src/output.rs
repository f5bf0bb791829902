use std::io::Write;

use powercone::Error;
use serde_json::{json, Value};

use crate::args::Format;

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Input(_) | Error::NonFinite => "input",
        Error::ArityMismatch(..) | Error::Dimension(_) | Error::OutOfRange(_) => "shape",
        Error::Precondition(_) | Error::NotInSubspace | Error::CommonFactor | Error::Degenerate(_) => "precondition",
        Error::SingularMatrix | Error::NotSquare(..) | Error::Numerical(_) => "numerical",
    }
}

fn text_lines(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) if !is_form(v) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text_lines(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                text_lines(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(format!("{prefix}: {}", scalar_text(v))),
    }
}

fn is_form(v: &Value) -> bool {
    v.get("arity").is_some() && v.get("terms").is_some()
}

/// Forms print as sums of monomials.
fn scalar_text(v: &Value) -> String {
    if !is_form(v) {
        return v.to_string();
    }
    let vars: &[&str] = if v["arity"] == 2 { &["x", "y"] } else { &["a", "b", "c"] };
    let terms: Vec<String> = v["terms"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|t| {
            let c = match (t.get("num"), t.get("den")) {
                (Some(n), Some(d)) if d == "1" => n.as_str().unwrap_or("?").to_string(),
                (Some(n), Some(d)) => format!("{}/{}", n.as_str().unwrap_or("?"), d.as_str().unwrap_or("?")),
                _ => t["coef"].to_string(),
            };
            let mono: Vec<String> = t["exp"]
                .as_array()
                .into_iter()
                .flatten()
                .zip(vars)
                .filter_map(|(e, x)| match e.as_u64() {
                    Some(0) => None,
                    Some(1) => Some(x.to_string()),
                    Some(k) => Some(format!("{x}^{k}")),
                    None => None,
                })
                .collect();
            if mono.is_empty() {
                c
            } else {
                format!("{c}*{}", mono.join("*"))
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Write to stdout; a closed pipe is not an error.
fn put(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}").and_then(|_| out.flush());
}

pub fn emit(command: &str, v: &Value, format: Format) {
    match format {
        Format::Json => put(&serde_json::to_string_pretty(v).expect("json")),
        Format::Text => {
            let mut lines = vec![format!("command: {command}")];
            text_lines("", v, &mut lines);
            put(&lines.join("\n"));
        }
    }
}

pub fn error(kind: &str, message: &str, format: Format) {
    match format {
        Format::Json => put(&json!({"error": {"kind": kind, "message": message.trim_end()}}).to_string()),
        Format::Text => eprintln!("error ({kind}): {}", message.trim_end()),
    }
}
