//! The shared JSON element format: an array of `[coefficient, monomial]` pairs with
//! the coefficient as `"p/q"` or `"k mod p"` and the monomial as
//! `{"a": [[u, v, exp]], "e": [[i, j, exp]], "x": [[i, exp]], "y": [[i, exp]]}`
//! (absent keys are empty). Terms appear in the canonical term order.
//!
//! Noncommutative elements are serialized through their exponent vectors; reading
//! back goes through the owning algebra's `from_ordered_poly`.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::polyseries::{Field, Monomial, Poly, ScalarError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("variable {0} has no serialized form")]
    Unserializable(Var),
    #[error("malformed element JSON: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub fn poly_to_json(p: &Poly) -> Result<Value, SerializeError> {
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let mut obj = Map::new();
        for &(v, e) in m.pairs() {
            let (key, entry) = match v {
                Var::A(u, w) => ("a", json!([u, w, e])),
                Var::E(i, j) => ("e", json!([i, j, e])),
                Var::X(i) => ("x", json!([i, e])),
                Var::Y(i) => ("y", json!([i, e])),
                other => return Err(SerializeError::Unserializable(other)),
            };
            obj.entry(key)
                .or_insert_with(|| Value::Array(Vec::new()))
                .as_array_mut()
                .expect("array")
                .push(entry);
        }
        terms.push(json!([c.to_string(), Value::Object(obj)]));
    }
    Ok(Value::Array(terms))
}

fn malformed(what: impl Into<String>) -> SerializeError {
    SerializeError::Malformed(what.into())
}

fn index(v: &Value) -> Result<u8, SerializeError> {
    v.as_u64()
        .and_then(|k| u8::try_from(k).ok())
        .filter(|&k| k > 0)
        .ok_or_else(|| malformed(format!("bad index {v}")))
}

fn exponent(v: &Value) -> Result<u32, SerializeError> {
    v.as_u64()
        .and_then(|k| u32::try_from(k).ok())
        .ok_or_else(|| malformed(format!("bad exponent {v}")))
}

pub fn poly_from_json(field: Field, v: &Value) -> Result<Poly, SerializeError> {
    let terms = v.as_array().ok_or_else(|| malformed("expected an array of terms"))?;
    let mut out = Poly::zero(field);
    for t in terms {
        let pair = t
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| malformed("expected [coefficient, monomial]"))?;
        let coef = pair[0]
            .as_str()
            .ok_or_else(|| malformed("coefficient must be a string"))?;
        let c = field.parse(coef)?;
        let obj = pair[1]
            .as_object()
            .ok_or_else(|| malformed("monomial must be an object"))?;
        let mut factors = Vec::new();
        for (key, entries) in obj {
            let entries = entries
                .as_array()
                .ok_or_else(|| malformed(format!("{key} must be an array")))?;
            for e in entries {
                let e = e
                    .as_array()
                    .ok_or_else(|| malformed(format!("bad {key} entry")))?;
                let factor = match (key.as_str(), e.len()) {
                    ("a", 3) => (Var::A(index(&e[0])?, index(&e[1])?), exponent(&e[2])?),
                    ("e", 3) => (Var::E(index(&e[0])?, index(&e[1])?), exponent(&e[2])?),
                    ("x", 2) => (Var::X(index(&e[0])?), exponent(&e[1])?),
                    ("y", 2) => (Var::Y(index(&e[0])?), exponent(&e[1])?),
                    _ => return Err(malformed(format!("bad {key} entry"))),
                };
                factors.push(factor);
            }
        }
        out.add_term(Monomial::from_pairs(factors), c);
    }
    Ok(out)
}
