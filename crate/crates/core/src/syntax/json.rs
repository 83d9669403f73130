//! JSON AST: one object per node with a `kind` discriminator, rationals as
//! `{"num": "..", "den": ".."}`, infinities as the strings `"oo"` / `"-oo"`.

use serde_json::{json, Map, Value};

use super::{Atom, BoolExpr, ExtLinExpr, GuardedTerm, LinExpr, Quantifier, Quantity, Rel, Var};
use crate::error::{Error, Result};
use crate::numerics::Rational;

fn rational_to_json(q: &Rational) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

fn extlin_to_json(e: &ExtLinExpr) -> Value {
    match e {
        ExtLinExpr::NegInf => json!("-oo"),
        ExtLinExpr::PosInf => json!("oo"),
        ExtLinExpr::Fin(e) => {
            let coeffs: Map<String, Value> =
                e.coeffs().iter().map(|(x, q)| (x.name().to_string(), rational_to_json(q))).collect();
            json!({ "kind": "linear", "constant": rational_to_json(e.constant_part()), "coeffs": coeffs })
        }
    }
}

fn bool_to_json(e: &BoolExpr) -> Value {
    match e {
        BoolExpr::True => json!({ "kind": "true" }),
        BoolExpr::False => json!({ "kind": "false" }),
        BoolExpr::Atom(a) => json!({
            "kind": "atom",
            "lhs": extlin_to_json(&a.lhs),
            "rel": a.rel.symbol(),
            "rhs": extlin_to_json(&a.rhs),
        }),
        BoolExpr::Not(a) => json!({ "kind": "not", "arg": bool_to_json(a) }),
        BoolExpr::And(a, b) => json!({ "kind": "and", "lhs": bool_to_json(a), "rhs": bool_to_json(b) }),
        BoolExpr::Or(a, b) => json!({ "kind": "or", "lhs": bool_to_json(a), "rhs": bool_to_json(b) }),
    }
}

pub fn quantity_to_json(q: &Quantity) -> Value {
    let prefix: Vec<Value> = q
        .prefix
        .iter()
        .map(|(quant, x)| json!({ "kind": "binder", "quantifier": quant.keyword(), "var": x.name() }))
        .collect();
    let body: Vec<Value> = q
        .body
        .iter()
        .map(|t| json!({ "kind": "term", "guard": bool_to_json(&t.guard), "value": extlin_to_json(&t.value) }))
        .collect();
    json!({ "kind": "quantity", "prefix": prefix, "body": body })
}

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Json(msg.into()))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::Json(format!("missing field `{name}`")))
}

fn kind(v: &Value) -> Result<&str> {
    field(v, "kind")?.as_str().ok_or_else(|| Error::Json("`kind` must be a string".into()))
}

fn var_from_json(v: &Value) -> Result<Var> {
    match v.as_str() {
        Some(s) if Var::is_valid(s) => Ok(Var::new(s)),
        _ => bad(format!("invalid variable {v}")),
    }
}

fn rational_from_json(v: &Value) -> Result<Rational> {
    let part = |name| -> Result<num_bigint::BigInt> {
        field(v, name)?
            .as_str()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Json(format!("`{name}` must be an integer string")))
    };
    let den = part("den")?;
    if num_traits::Zero::is_zero(&den) {
        return bad("zero denominator");
    }
    Ok(Rational::new(part("num")?, den))
}

fn extlin_from_json(v: &Value) -> Result<ExtLinExpr> {
    match v {
        Value::String(s) if s == "oo" => Ok(ExtLinExpr::PosInf),
        Value::String(s) if s == "-oo" => Ok(ExtLinExpr::NegInf),
        Value::Object(_) if kind(v)? == "linear" => {
            let constant = rational_from_json(field(v, "constant")?)?;
            let coeffs = field(v, "coeffs")?
                .as_object()
                .ok_or_else(|| Error::Json("`coeffs` must be an object".into()))?;
            let mut terms = Vec::new();
            for (name, q) in coeffs {
                terms.push((var_from_json(&Value::String(name.clone()))?, rational_from_json(q)?));
            }
            Ok(ExtLinExpr::Fin(LinExpr::from_parts(constant, terms)))
        }
        _ => bad(format!("expected extended linear expression, found {v}")),
    }
}

fn bool_from_json(v: &Value) -> Result<BoolExpr> {
    Ok(match kind(v)? {
        "true" => BoolExpr::True,
        "false" => BoolExpr::False,
        "atom" => {
            let rel = match field(v, "rel")?.as_str() {
                Some("<") => Rel::Lt,
                Some("<=") => Rel::Le,
                Some(">") => Rel::Gt,
                Some(">=") => Rel::Ge,
                _ => return bad("`rel` must be one of <, <=, >, >="),
            };
            BoolExpr::Atom(Atom {
                lhs: extlin_from_json(field(v, "lhs")?)?,
                rel,
                rhs: extlin_from_json(field(v, "rhs")?)?,
            })
        }
        "not" => BoolExpr::not(bool_from_json(field(v, "arg")?)?),
        "and" => BoolExpr::and(bool_from_json(field(v, "lhs")?)?, bool_from_json(field(v, "rhs")?)?),
        "or" => BoolExpr::or(bool_from_json(field(v, "lhs")?)?, bool_from_json(field(v, "rhs")?)?),
        other => return bad(format!("unknown guard kind `{other}`")),
    })
}

pub fn quantity_from_json(v: &Value) -> Result<Quantity> {
    if kind(v)? != "quantity" {
        return bad("top-level node must have kind `quantity`");
    }
    let mut prefix = Vec::new();
    for b in field(v, "prefix")?.as_array().ok_or_else(|| Error::Json("`prefix` must be an array".into()))? {
        let quant = match field(b, "quantifier")?.as_str() {
            Some("sup") => Quantifier::Sup,
            Some("inf") => Quantifier::Inf,
            _ => return bad("`quantifier` must be `sup` or `inf`"),
        };
        let x = var_from_json(field(b, "var")?)?;
        if prefix.iter().any(|(_, y)| *y == x) {
            return Err(Error::DuplicateBinder(x));
        }
        prefix.push((quant, x));
    }
    let mut body = Vec::new();
    for t in field(v, "body")?.as_array().ok_or_else(|| Error::Json("`body` must be an array".into()))? {
        body.push(GuardedTerm::new(bool_from_json(field(t, "guard")?)?, extlin_from_json(field(t, "value")?)?));
    }
    if body.is_empty() {
        return bad("`body` must not be empty");
    }
    Ok(Quantity::new(prefix, body))
}
