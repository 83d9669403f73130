//! Browser bindings. Each export is a thin wrapper over a plain function so
//! the logic can be tested natively.

use std::str::FromStr;

use num_traits::ToPrimitive;
use wasm_bindgen::prelude::*;

use quantelim::cli::parse_input;
use quantelim::interpolate::{strongest_interpolant, weakest_interpolant};
use quantelim::numerics::{ExtRat, Rational};
use quantelim::oracle::eval_body;
use quantelim::qelim::{elim_with, ElimOptions};
use quantelim::syntax::{print_quantity, Valuation, Var};

fn simplified(src: &str) -> Result<quantelim::syntax::Quantity, String> {
    let q = parse_input(src).map_err(|e| e.to_string())?;
    elim_with(&q, ElimOptions { simplify: true, jobs: None }).map_err(|e| e.to_string())
}

pub fn eliminate_text(src: &str) -> Result<String, String> {
    simplified(src).map(|q| print_quantity(&q))
}

pub fn interpolate_text(f: &str, g: &str, strongest: bool) -> Result<String, String> {
    let f = parse_input(f).map_err(|e| e.to_string())?;
    let g = parse_input(g).map_err(|e| e.to_string())?;
    let r = if strongest { strongest_interpolant(&f, &g) } else { weakest_interpolant(&f, &g) };
    r.map(|q| print_quantity(&q)).map_err(|e| e.to_string())
}

fn parse_bindings(text: &str) -> Result<Valuation, String> {
    let mut sigma = Valuation::new();
    for b in text.split(',').map(str::trim).filter(|b| !b.is_empty()) {
        let (name, value) = b.split_once('=').ok_or_else(|| format!("bad binding `{b}`"))?;
        let (name, value) = (name.trim(), value.trim());
        if !Var::is_valid(name) {
            return Err(format!("bad variable `{name}`"));
        }
        let q = Rational::from_str(value).map_err(|_| format!("bad value `{value}`"))?;
        sigma.set(Var::new(name), q);
    }
    Ok(sigma)
}

/// Values of the eliminated quantity along `var` in `[lo, hi]`, the other
/// variables fixed by `fixed`. Infinities map to `±Infinity`.
pub fn slice_values(src: &str, var: &str, lo: f64, hi: f64, steps: usize, fixed: &str) -> Result<Vec<f64>, String> {
    if !Var::is_valid(var) {
        return Err(format!("bad variable `{var}`"));
    }
    let q = simplified(src)?;
    let mut sigma = parse_bindings(fixed)?;
    let x = Var::new(var);
    let steps = steps.max(1);
    (0..=steps)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / steps as f64;
            let at = Rational::from_float(t).ok_or("bad range")?;
            sigma.set(x.clone(), at);
            Ok(match eval_body(&sigma, &q.body).map_err(|e| e.to_string())? {
                ExtRat::NegInf => f64::NEG_INFINITY,
                ExtRat::PosInf => f64::INFINITY,
                ExtRat::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            })
        })
        .collect()
}

#[wasm_bindgen]
pub fn eliminate(src: &str) -> Result<String, JsValue> {
    eliminate_text(src).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn interpolate(f: &str, g: &str, strongest: bool) -> Result<String, JsValue> {
    interpolate_text(f, g, strongest).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn slice(src: &str, var: &str, lo: f64, hi: f64, steps: usize, fixed: &str) -> Result<Vec<f64>, JsValue> {
    slice_values(src, var, lo, hi, steps, fixed).map_err(|e| JsValue::from_str(&e))
}
