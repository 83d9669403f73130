use num_traits::{One, Signed, Zero};

use super::{Atom, BoolExpr, ExtLinExpr, GuardedTerm, LinExpr, Quantity};
use crate::numerics::{fmt_rational, Rational};

pub fn print_quantity(q: &Quantity) -> String {
    let mut out = String::new();
    for (quant, x) in &q.prefix {
        out.push_str(quant.keyword());
        out.push(' ');
        out.push_str(x.name());
        out.push_str(" : ");
    }
    let terms: Vec<String> = q.body.iter().map(print_term).collect();
    out.push_str(&terms.join(" + "));
    out
}

pub(crate) fn print_term(t: &GuardedTerm) -> String {
    let value = print_extlin(&t.value);
    let needs_parens = match &t.value {
        ExtLinExpr::Fin(e) => e.coeffs().len() + usize::from(!e.constant_part().is_zero()) > 1 || value.starts_with('-'),
        ExtLinExpr::NegInf => true,
        ExtLinExpr::PosInf => false,
    };
    if needs_parens {
        format!("[{}] * ({value})", print_bool(&t.guard))
    } else {
        format!("[{}] * {value}", print_bool(&t.guard))
    }
}

pub(crate) fn print_extlin(e: &ExtLinExpr) -> String {
    match e {
        ExtLinExpr::NegInf => "-oo".to_string(),
        ExtLinExpr::PosInf => "oo".to_string(),
        ExtLinExpr::Fin(e) => print_lin(e),
    }
}

fn print_lin(e: &LinExpr) -> String {
    let mut out = String::new();
    let mut push = |coeff: &Rational, var: Option<&str>| {
        let negative = coeff.is_negative();
        let mag = coeff.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        match var {
            Some(x) if mag.is_one() => out.push_str(x),
            Some(x) => {
                out.push_str(&fmt_rational(&mag));
                out.push('*');
                out.push_str(x);
            }
            None => out.push_str(&fmt_rational(&mag)),
        }
    };
    for (x, q) in e.coeffs() {
        push(q, Some(x.name()));
    }
    if !e.constant_part().is_zero() {
        push(e.constant_part(), None);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_atom(a: &Atom) -> String {
    format!("{} {} {}", print_extlin(&a.lhs), a.rel.symbol(), print_extlin(&a.rhs))
}

fn precedence(e: &BoolExpr) -> u8 {
    match e {
        BoolExpr::Or(..) => 1,
        BoolExpr::And(..) => 2,
        BoolExpr::Atom(_) => 3,
        BoolExpr::Not(_) | BoolExpr::True | BoolExpr::False => 4,
    }
}

/// Renders a guard with the minimal parentheses that still re-parse to the
/// same tree (binary connectives nest to the left).
pub fn print_bool(e: &BoolExpr) -> String {
    match e {
        BoolExpr::True => "true".to_string(),
        BoolExpr::False => "false".to_string(),
        BoolExpr::Atom(a) => print_atom(a),
        BoolExpr::Not(inner) => {
            if precedence(inner) >= 4 {
                format!("!{}", print_bool(inner))
            } else {
                format!("!({})", print_bool(inner))
            }
        }
        BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
            let (op, p) = if matches!(e, BoolExpr::And(..)) { ("&&", 2) } else { ("||", 1) };
            let left = if precedence(a) < p { format!("({})", print_bool(a)) } else { print_bool(a) };
            let right = if precedence(b) <= p { format!("({})", print_bool(b)) } else { print_bool(b) };
            format!("{left} {op} {right}")
        }
    }
}
