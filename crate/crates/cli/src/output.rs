//! JSON rendering. Integers are always decimal strings.

use std::fmt::Display;

use inertia_core::abelian::{FgAbGroup, Subgroup};
use inertia_core::entropy::{EntropyReport, EntropyValue};
use inertia_core::mahler::MahlerResult;
use inertia_core::poly::IntPolynomial;
use inertia_core::rational::{RationalEndo, RationalLattice};
use inertia_core::Index;
use serde_json::{json, Map, Value};

pub fn int(x: impl Display) -> Value {
    Value::String(x.to_string())
}

pub fn index(i: &Index) -> Value {
    match i.value() {
        Some(n) => int(n),
        None => Value::String("infinite".into()),
    }
}

pub fn group(g: &FgAbGroup) -> Value {
    json!({
        "invariant_factors": g.invariant_factors().iter().map(int).collect::<Vec<_>>(),
        "free_rank": int(g.free_rank()),
        "display": g.to_string(),
        "order": index(&g.order()),
    })
}

pub fn subgroup(h: &Subgroup) -> Value {
    let basis: Vec<Value> = h.generators().iter().map(|g| Value::Array(g.coords().iter().map(int).collect())).collect();
    json!({ "basis": basis, "rank": int(h.rank()), "order": index(&h.order()) })
}

pub fn rational_lattice(l: &RationalLattice) -> Value {
    let basis: Vec<Value> = l.basis().iter().map(|r| Value::Array(r.iter().map(int).collect())).collect();
    json!({ "basis": basis, "rank": int(l.rank()) })
}

pub fn int_matrix(m: &[Vec<num_bigint::BigInt>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

pub fn rational_endo(phi: &RationalEndo) -> Value {
    Value::Array(phi.matrix().iter().map(|r| Value::Array(r.iter().map(int).collect())).collect())
}

pub fn poly(f: &IntPolynomial) -> Value {
    json!({ "coefficients": f.coeffs().iter().map(int).collect::<Vec<_>>(), "display": f.to_string() })
}

pub fn entropy_value(v: &EntropyValue) -> Value {
    match v {
        EntropyValue::LogOf(q) => json!({ "log_of": q.to_string() }),
        EntropyValue::Integer(n) => json!({ "integer": int(n) }),
        EntropyValue::Certified { value, error_bound } => json!({ "value": value, "error_bound": error_bound }),
    }
}

pub fn entropy(r: &EntropyReport) -> Value {
    let mut m = Map::new();
    m.insert("value".into(), entropy_value(&r.value));
    m.insert("path".into(), serde_json::to_value(r.path).unwrap());
    m.insert("steps_used".into(), int(r.steps_used));
    m.insert("heuristic".into(), Value::Bool(r.heuristic));
    if r.heuristic {
        m.insert(
            "heuristic_reason".into(),
            Value::String("stationarity declared after a window of equal indices; no closed form available".into()),
        );
    }
    if let Some(cc) = &r.cross_check {
        m.insert(
            "cross_check".into(),
            json!({
                "path": serde_json::to_value(cc.path).unwrap(),
                "value": entropy_value(&cc.value),
                "agree": cc.agree,
            }),
        );
    }
    Value::Object(m)
}

pub fn mahler(f: &IntPolynomial, m: &MahlerResult) -> Value {
    let value = match &m.log_of {
        Some(r) => json!({ "log_of": r.to_string() }),
        None => json!({ "value": m.value, "error_bound": m.error_bound }),
    };
    json!({
        "polynomial": poly(f),
        "measure": value,
        "exact": m.exact,
        "roots_outside": int(m.roots_outside),
    })
}

/// Indented `key: value` lines.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_array() && !y.is_object()))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_text(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
