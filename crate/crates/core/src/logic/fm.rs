//! Fourier–Motzkin elimination over normalized strict/non-strict
//! inequalities `d·v + c > 0` / `d·v + c >= 0`, used for satisfiability and
//! witnesses.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::numerics::Rational;
use crate::syntax::{Atom, BoolExpr, ExtLinExpr, LinExpr, Rel, Valuation, Var};

/// Direction `d` with first coefficient ±1 mapped to the tightest known
/// `(c, strict)`: `d·v + c > 0` when strict, `>= 0` otherwise.
#[derive(Clone, Debug, Default)]
pub(crate) struct System {
    rows: BTreeMap<BTreeMap<Var, Rational>, (Rational, bool)>,
}

enum Row {
    Const(bool),
    Ineq(BTreeMap<Var, Rational>, Rational, bool),
}

fn normalize(expr: LinExpr, strict: bool) -> Row {
    let Some(lead) = expr.coeffs().values().next().cloned() else {
        let c = expr.constant_part();
        return Row::Const(if strict { c.is_positive() } else { !c.is_negative() });
    };
    let scale = Rational::one() / lead.abs();
    let e = expr.scale(&scale);
    Row::Ineq(e.coeffs().clone(), e.constant_part().clone(), strict)
}

impl System {
    /// Adds a row; `false` if it is constantly false.
    fn add(&mut self, expr: LinExpr, strict: bool) -> bool {
        match normalize(expr, strict) {
            Row::Const(v) => v,
            Row::Ineq(dir, c, strict) => {
                match self.rows.get_mut(&dir) {
                    Some((c0, s0)) => {
                        // smaller constant is tighter; strict wins ties
                        if c < *c0 || (c == *c0 && strict && !*s0) {
                            *c0 = c;
                            *s0 = strict;
                        }
                    }
                    None => {
                        self.rows.insert(dir, (c, strict));
                    }
                }
                true
            }
        }
    }

    fn rows(&self) -> impl Iterator<Item = (LinExpr, bool)> + '_ {
        self.rows
            .iter()
            .map(|(dir, (c, strict))| (LinExpr::from_parts(c.clone(), dir.iter().map(|(x, q)| (x.clone(), q.clone()))), *strict))
    }

    fn vars(&self) -> BTreeSet<Var> {
        self.rows.keys().flat_map(|d| d.keys().cloned()).collect()
    }
}

pub(crate) fn system_of_atoms<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Option<System> {
    let mut sys = System::default();
    for a in atoms {
        let ok = match (&a.lhs, &a.rhs) {
            (ExtLinExpr::Fin(l), ExtLinExpr::Fin(r)) => {
                let (expr, strict) = match a.rel {
                    Rel::Lt => (r.sub(l), true),
                    Rel::Le => (r.sub(l), false),
                    Rel::Gt => (l.sub(r), true),
                    Rel::Ge => (l.sub(r), false),
                };
                sys.add(expr, strict)
            }
            // an infinite side always folds to a constant
            _ => super::fold_atom(a) == BoolExpr::True,
        };
        if !ok {
            return None;
        }
    }
    Some(sys)
}

/// Projects `x` out of the system; `None` if a constant contradiction arises.
fn eliminate(sys: &System, x: &Var) -> Option<System> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut out = System::default();
    for (expr, strict) in sys.rows() {
        let c = expr.coeff(x);
        if c.is_zero() {
            out.add(expr, strict);
        } else if c.is_positive() {
            lower.push((expr.scale(&(Rational::one() / c)), strict));
        } else {
            upper.push((expr.scale(&(Rational::one() / -c)), strict));
        }
    }
    for (lo, ls) in &lower {
        for (up, us) in &upper {
            if !out.add(lo.add(up), *ls || *us) {
                return None;
            }
        }
    }
    Some(out)
}

fn cost(sys: &System, x: &Var) -> usize {
    let (mut pos, mut neg) = (0, 0);
    for dir in sys.rows.keys() {
        match dir.get(x) {
            Some(q) if q.is_positive() => pos += 1,
            Some(_) => neg += 1,
            None => {}
        }
    }
    pos * neg
}

pub(crate) fn satisfiable(mut sys: System) -> bool {
    loop {
        // cheapest projection first; ties broken by name
        let Some(x) = sys.vars().into_iter().min_by_key(|x| cost(&sys, x)) else {
            // only constant rows remain, and those were checked on insertion
            return true;
        };
        match eliminate(&sys, &x) {
            Some(next) => sys = next,
            None => return false,
        }
    }
}

/// Back-substitutes through the elimination stages (lexicographic order),
/// choosing the midpoint of each residual interval, bound ± 1 when
/// one-sided and 0 when free.
pub(crate) fn witness(sys: System) -> Option<Valuation> {
    let order: Vec<Var> = sys.vars().into_iter().collect();
    let mut stages = Vec::with_capacity(order.len());
    let mut cur = sys;
    for x in &order {
        let next = eliminate(&cur, x)?;
        stages.push(std::mem::replace(&mut cur, next));
    }
    let mut values: BTreeMap<Var, Rational> = BTreeMap::new();
    for (x, stage) in order.iter().zip(stages.iter()).rev() {
        let mut lo: Option<(Rational, bool)> = None;
        let mut hi: Option<(Rational, bool)> = None;
        for (expr, strict) in stage.rows() {
            let c = expr.coeff(x);
            if c.is_zero() {
                continue;
            }
            // c·x + rest (>|>=) 0
            let rest_expr = expr.without(x);
            let mut rest = rest_expr.constant_part().clone();
            for (y, q) in rest_expr.coeffs() {
                rest += q * &values[y];
            }
            let bound = -rest / &c;
            if c.is_positive() {
                if lo.as_ref().is_none_or(|(b, s)| bound > *b || (bound == *b && strict && !s)) {
                    lo = Some((bound, strict));
                }
            } else if hi.as_ref().is_none_or(|(b, s)| bound < *b || (bound == *b && strict && !s)) {
                hi = Some((bound, strict));
            }
        }
        let one = Rational::one();
        let v = match (lo, hi) {
            (Some((l, _)), Some((h, _))) if l == h => l,
            (Some((l, _)), Some((h, _))) => (l + h) / Rational::from_integer(2.into()),
            (Some((l, _)), None) => l + one,
            (None, Some((h, _))) => h - one,
            (None, None) => Rational::zero(),
        };
        values.insert(x.clone(), v);
    }
    Some(values.into_iter().collect())
}
