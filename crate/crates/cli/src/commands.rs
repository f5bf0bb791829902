use powercone::apolar::{apolar_ideal, catalecticant, cube_divisor_witness, hilbert_function_ci};
use powercone::boundary::{four_zero_system, jacobian_singular_values, on_boundary_hypersurface, sample_on_g, BoundaryClass, Triple};
use powercone::catalog::{example_c, example_points, example_triple};
use powercone::constructions::{is_admissible_via, is_strictly_admissible, ladder_build, pythagoras_bounds, LadderLevel, PythagorasBounds};
use powercone::decompose::{decompose_length4, find_all_real_reps, Decomposition};
use powercone::dualcone::{eval_map, functional_of_quartic, u_relations, DualElement, ProjectivePointR2};
use powercone::faces::{classify_boundary_point, doubly_positive_search, reznick_refute, FaceType, RefutationVerdict};
use powercone::forms::{BinaryForm, Form};
use powercone::json::{binary_to_json, form_to_json, ternary_to_json, JsonCoef};
use powercone::linalg::rank_exact;
use powercone::scalar::{Field, Rational};
use powercone::sdp::{membership_quartic_cone, membership_value, SdpStatus};
use powercone::{Error, Result};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, Config};
use crate::input;

/// Whether an answer is decisive (exit 0) or marginal (exit 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Decisive,
    Inconclusive,
}

const SOLVER_TOL: f64 = 1e-8;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn certificate_json<T: JsonCoef>(c: &DualElement<T>) -> Value {
    json!({"functional": binary_to_json(c.functional()), "quartic": ternary_to_json(c.quartic())})
}

fn forms_json<T: JsonCoef>(fs: &[BinaryForm<T>]) -> Value {
    Value::Array(fs.iter().map(binary_to_json).collect())
}

fn decomposition_json(d: &Decomposition) -> Value {
    json!({
        "summands": forms_json(&d.summands),
        "residual_norm": d.residual_norm,
        "relative_residual": d.relative_residual,
    })
}

fn zeros_json(z: &[ProjectivePointR2]) -> Value {
    to_value(&z)
}

/// Exact integers as JSON numbers when they fit in 64 bits, decimal strings otherwise.
fn big(n: &impl ToString) -> Value {
    let s = n.to_string();
    s.parse::<u64>().map(Value::from).unwrap_or(Value::String(s))
}

pub fn run(cmd: &Command, cfg: &Config) -> Result<(Value, Outcome)> {
    let restarts = cfg.restarts as usize;
    match cmd {
        Command::Member(inp) => {
            let f = input::binary_f64(&input::form(&input::read_text(inp)?)?)?;
            member(&f, cfg)
        }
        Command::Decompose { input: inp, k } => {
            let f = input::octic(&input::form(&input::read_text(inp)?)?)?;
            let reps = if *k == 4 {
                vec![decompose_length4(&f, SOLVER_TOL)?]
            } else {
                find_all_real_reps(&f, *k as usize, restarts, cfg.seed, SOLVER_TOL)
            };
            let outcome = if reps.is_empty() { Outcome::Inconclusive } else { Outcome::Decisive };
            Ok((
                json!({
                    "k": k,
                    "restarts": restarts,
                    "seed": cfg.seed,
                    "count": reps.len(),
                    "representations": reps.iter().map(decomposition_json).collect::<Vec<_>>(),
                }),
                outcome,
            ))
        }
        Command::Classify(inp) => {
            let f = input::octic(&input::form(&input::read_text(inp)?)?)?;
            let r = classify_boundary_point(&f, cfg.tol)?;
            let outcome = if r.face_type == FaceType::Inconclusive { Outcome::Inconclusive } else { Outcome::Decisive };
            Ok((
                json!({
                    "face_type": to_value(&r.face_type),
                    "exposed": to_value(&r.exposed),
                    "generators": forms_json(&r.generators),
                    "weights": r.weights,
                    "cofactor": r.cofactor.as_ref().map(binary_to_json),
                    "certificate": r.certificate.as_ref().map(certificate_json),
                    "zeros": zeros_json(&r.zeros),
                    "membership_value": r.membership_value,
                    "relative_residual": r.relative_residual,
                    "diagnostics": r.diagnostics,
                }),
                outcome,
            ))
        }
        Command::Reznick(inp) => {
            let f = input::octic(&input::form(&input::read_text(inp)?)?)?;
            let r = reznick_refute(&f, cfg.tol)?;
            let dp = doubly_positive_search(&f, restarts, cfg.seed);
            let outcome = match r.verdict {
                RefutationVerdict::NotDoublyPositive if dp.is_none() => Outcome::Decisive,
                _ => Outcome::Inconclusive,
            };
            Ok((
                json!({
                    "verdict": to_value(&r.verdict),
                    "failed_check": r.failed_check(),
                    "checks": to_value(&r.checks),
                    "identity_check": r.identity_check,
                    "membership_value": r.membership_value,
                    "certificate": certificate_json(&r.certificate),
                    "zeros": zeros_json(&r.zeros),
                    "decomposition": r.decomposition.as_ref().map(decomposition_json),
                    "collinearity_rank": r.collinearity_rank,
                    "doubly_positive_search": {
                        "restarts": restarts,
                        "seed": cfg.seed,
                        "found": dp.is_some(),
                        "squares": dp.map(|(a, b)| forms_json(&[a, b])),
                    },
                }),
                outcome,
            ))
        }
        Command::Apolar(inp) => {
            let l = input::binary_exact(&input::form(&input::read_text(inp)?)?)?;
            apolar(&l)
        }
        Command::DualQuartic(inp) => {
            let f = input::form(&input::read_text(inp)?)?;
            dual_quartic(&f)
        }
        Command::BoundarySystem { points, example } => {
            if *example {
                let c = example_c(cfg.precision_bits);
                let sys = four_zero_system(&example_points(c.clone()))?;
                Ok((
                    json!({
                        "points": "example",
                        "precision_bits": cfg.precision_bits,
                        "c": c.to_f64(),
                        "det15": sys.det15.to_f64(),
                        "det15_relative": sys.det15_relative,
                        "singular": sys.det15_relative <= cfg.tol,
                    }),
                    Outcome::Decisive,
                ))
            } else {
                let pts = input::rational_rows::<3, 3>(points.as_deref().expect("clap requires points"))?;
                let sys = four_zero_system(&pts)?;
                let gram: Vec<Vec<String>> = sys.gram_family.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
                Ok((
                    json!({
                        "points": pts.iter().map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "det15": sys.det15.to_string(),
                        "det15_relative": sys.det15_relative,
                        "singular": sys.det15.is_zero(),
                        "gram_family": gram,
                        "gram_det": sys.gram_det.to_string(),
                        "charpoly_coeffs": sys.charpoly_coeffs.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    }),
                    Outcome::Decisive,
                ))
            }
        }
        Command::OnG { input: inp, sample, example } => {
            let (t, class) = if *sample {
                let t = sample_on_g(cfg.seed).ok_or_else(|| Error::Numerical("no sign change of the boundary factor found".into()))?;
                let class = on_boundary_hypersurface(&t, cfg.tol);
                (t, class)
            } else if *example {
                let [a, b, c] = example_triple(example_c(cfg.precision_bits).to_f64());
                let t = Triple::new(a, b, c);
                let class = on_boundary_hypersurface(&t, cfg.tol);
                (t, class)
            } else {
                let fs = input::forms(&input::read_text(inp)?)?;
                if fs.len() != 3 {
                    return Err(Error::Input(format!("expected three quadratics, got {}", fs.len())));
                }
                let q: Vec<BinaryForm<f64>> = fs.iter().map(input::binary_f64).collect::<Result<_>>()?;
                if q.iter().any(|f| f.degree() != 2) {
                    return Err(Error::Input("expected binary quadratics".into()));
                }
                let t = Triple::new(q[0].clone(), q[1].clone(), q[2].clone());
                // Exact inputs are decided exactly.
                let class = if fs.iter().all(|f| f.binary_exact().is_some()) {
                    let e: Vec<BinaryForm<Rational>> = fs.iter().map(|f| f.binary_exact().cloned().expect("exact")).collect();
                    on_boundary_hypersurface(&Triple::new(e[0].clone(), e[1].clone(), e[2].clone()), cfg.tol)
                } else {
                    on_boundary_hypersurface(&t, cfg.tol)
                };
                (t, class)
            };
            let s = jacobian_singular_values(&t);
            let outcome = if class == BoundaryClass::DependentTriple { Outcome::Inconclusive } else { Outcome::Decisive };
            Ok((
                json!({
                    "triple": forms_json(&t.q),
                    "class": to_value(&class),
                    "singular_values": s,
                    "gap": (s[8] > 0.0).then(|| s[7] / s[8]),
                    "coefficient_det": t.coefficient_det(),
                }),
                outcome,
            ))
        }
        Command::Ladder { s, n, r } => {
            let l = ladder_build(*s, *n as usize, r.clone())?;
            let levels: Vec<Value> = (1..=l.n())
                .map(|k| {
                    let terms = match &l.levels[k - 1] {
                        LadderLevel::Expanded(p) => Some(p.num_terms()),
                        LadderLevel::Product { .. } => None,
                    };
                    json!({
                        "k": k,
                        "degree": l.degree(k),
                        "degree_formula": l.degree_formula(k),
                        "substitution_identity": l.substitution_identity(k),
                        "expanded_terms": terms,
                    })
                })
                .collect();
            let ok = (1..=l.n()).all(|k| l.substitution_identity(k) && l.degree(k) == l.degree_formula(k));
            Ok((
                json!({"s": s, "n": n, "r_seq": l.r_seq, "levels": levels, "identities_hold": ok}),
                if ok { Outcome::Decisive } else { Outcome::Inconclusive },
            ))
        }
        Command::Bounds { n, s, d } => {
            let b: PythagorasBounds = pythagoras_bounds(*n, *s, *d)?;
            Ok((
                json!({
                    "n": n, "s": s, "d": d,
                    "lower": big(&b.lower),
                    "upper": big(&b.upper),
                    "asymptotic": big(&b.asymptotic),
                    "quotient": b.quotient(*n, *d),
                }),
                Outcome::Decisive,
            ))
        }
        Command::Admissible { input: inp, via } => {
            let f = input::poly2(&input::read_text(inp)?)?;
            let a = match via {
                Some(m) => is_admissible_via(&f, &input::rational_rows::<2, 2>(m)?)?,
                None => is_strictly_admissible(&f),
            };
            Ok((to_value(&a), Outcome::Decisive))
        }
    }
}

fn status_str(s: SdpStatus) -> Value {
    to_value(&s)
}

fn member(f: &BinaryForm<f64>, cfg: &Config) -> Result<(Value, Outcome)> {
    let decide = |value: f64, status: SdpStatus| -> (Option<bool>, Outcome) {
        if status != SdpStatus::Optimal || value.abs() <= cfg.tol {
            (None, Outcome::Inconclusive)
        } else {
            (Some(value > 0.0), Outcome::Decisive)
        }
    };
    match f.degree() {
        8 => {
            let m = membership_value(f, SOLVER_TOL)?;
            let (member, outcome) = decide(m.value, m.status);
            Ok((
                json!({
                    "cone": "sums of fourth powers of binary quadratics",
                    "value": m.value,
                    "relative_value": m.relative_value,
                    "member": member,
                    "band": cfg.tol,
                    "status": status_str(m.status),
                    "certificate": certificate_json(&m.certificate),
                    "certificate_value": m.certificate_value,
                    "certificate_min_eigenvalue": m.certificate_min_eigenvalue,
                    "psd_exact": m.psd_exact,
                }),
                outcome,
            ))
        }
        4 => {
            let m = membership_quartic_cone(f, SOLVER_TOL)?;
            let (member, outcome) = decide(m.value, m.status);
            Ok((
                json!({
                    "cone": "sums of fourth powers of binary linear forms",
                    "value": m.value,
                    "member": member,
                    "band": cfg.tol,
                    "status": status_str(m.status),
                    "certificate": {"functional": binary_to_json(&m.certificate)},
                }),
                outcome,
            ))
        }
        d => Err(Error::Input(format!("membership needs a binary octic or quartic, got degree {d}"))),
    }
}

fn apolar(l: &BinaryForm<Rational>) -> Result<(Value, Outcome)> {
    if l.is_zero() {
        return Err(Error::Input("the zero form has no apolar ideal".into()));
    }
    let ideal = apolar_ideal(l)?;
    let hilbert = hilbert_function_ci(&ideal.gen_low, &ideal.gen_high)?;
    let ranks: Vec<usize> = (0..=l.degree()).map(|k| catalecticant(l, k).map(|m| rank_exact(&m))).collect::<Result<_>>()?;
    let (d1, d2) = ideal.degrees();
    Ok((
        json!({
            "form": binary_to_json(l),
            "gen_low": binary_to_json(&ideal.gen_low),
            "gen_high": binary_to_json(&ideal.gen_high),
            "degrees": [d1, d2],
            "hilbert_function": hilbert,
            "catalecticant_ranks": ranks,
            "cube_divisor": cube_divisor_witness(l).as_ref().map(binary_to_json),
        }),
        Outcome::Decisive,
    ))
}

fn dual_quartic(f: &powercone::json::ParsedForm) -> Result<(Value, Outcome)> {
    use powercone::json::ParsedForm::{Exact, Float};
    fn go<T: JsonCoef>(f: &Form<T>, tol: f64) -> Result<Value> {
        match f {
            Form::Binary(l) => {
                if l.degree() != 8 {
                    return Err(Error::Input(format!("expected an octic functional, got degree {}", l.degree())));
                }
                Ok(json!({"functional": binary_to_json(l), "quartic": ternary_to_json(&eval_map(l)), "in_u": true}))
            }
            Form::Ternary(q) => {
                if q.degree() != 4 {
                    return Err(Error::Input(format!("expected a ternary quartic, got degree {}", q.degree())));
                }
                let rel: Vec<f64> = u_relations(q).iter().map(|v| v.to_f64()).collect();
                let l = functional_of_quartic(q, tol).ok();
                Ok(json!({
                    "quartic": form_to_json(f),
                    "in_u": l.is_some(),
                    "u_relations": rel,
                    "functional": l.as_ref().map(binary_to_json),
                }))
            }
        }
    }
    let v = match f {
        Exact(e) => go(e, 0.0)?,
        Float(x) => go(x, 1e-9)?,
    };
    Ok((v, Outcome::Decisive))
}
