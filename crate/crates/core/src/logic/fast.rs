//! Fourier–Motzkin satisfiability over machine integers. Rows are
//! `d·v + c > 0` (or `>= 0`) with `d` a primitive integer vector and `c` a
//! reduced fraction. Any overflow abandons the attempt so the caller can fall
//! back to the arbitrary-precision version.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::syntax::{Atom, BoolExpr, ExtLinExpr, LinExpr, Rel, Var};

pub(crate) struct Overflow;

type Res<T> = Result<T, Overflow>;

fn mul(a: i128, b: i128) -> Res<i128> {
    a.checked_mul(b).ok_or(Overflow)
}

fn add(a: i128, b: i128) -> Res<i128> {
    a.checked_add(b).ok_or(Overflow)
}

fn gcd(a: i128, b: i128) -> Res<i128> {
    i128::try_from(a.unsigned_abs().gcd(&b.unsigned_abs())).map_err(|_| Overflow)
}

/// Constant part `num/den` with `den > 0`.
#[derive(Clone, Copy)]
struct Bound {
    num: i128,
    den: i128,
    strict: bool,
}

#[derive(Default)]
struct System {
    rows: HashMap<Vec<i128>, Bound>,
}

impl System {
    /// Adds `coeffs·v + c (>|>=) 0`; `Ok(false)` if it is constantly false.
    fn add(&mut self, coeffs: Vec<i128>, c: i128, strict: bool) -> Res<bool> {
        let mut g = 0;
        for &q in &coeffs {
            g = gcd(g, q)?;
        }
        if g == 0 {
            return Ok(if strict { c > 0 } else { c >= 0 });
        }
        let dir: Vec<i128> = coeffs.iter().map(|q| q / g).collect();
        let h = gcd(c, g)?;
        let new = Bound { num: c / h, den: g / h, strict };
        match self.rows.get_mut(&dir) {
            Some(old) => {
                let lhs = mul(new.num, old.den)?;
                let rhs = mul(old.num, new.den)?;
                if lhs < rhs || (lhs == rhs && strict && !old.strict) {
                    *old = new;
                }
            }
            None => {
                self.rows.insert(dir, new);
            }
        }
        Ok(true)
    }

    /// Projects out coordinate `x`; `Ok(None)` on a constant contradiction.
    fn eliminate(self, x: usize) -> Res<Option<System>> {
        let mut out = System::default();
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for (dir, b) in self.rows {
            // integer form: den·dir·v + num
            let scaled = dir.iter().map(|&q| mul(q, b.den)).collect::<Res<Vec<_>>>()?;
            match dir[x].signum() {
                0 => {
                    if !out.add(scaled, b.num, b.strict)? {
                        return Ok(None);
                    }
                }
                1 => lower.push((scaled, b.num, b.strict)),
                _ => upper.push((scaled, b.num, b.strict)),
            }
        }
        for (lo, lc, ls) in &lower {
            for (up, uc, us) in &upper {
                let a = lo[x];
                let b = -up[x];
                let mut coeffs = Vec::with_capacity(lo.len());
                for (l, u) in lo.iter().zip(up) {
                    coeffs.push(add(mul(b, *l)?, mul(a, *u)?)?);
                }
                let c = add(mul(b, *lc)?, mul(a, *uc)?)?;
                if !out.add(coeffs, c, *ls || *us)? {
                    return Ok(None);
                }
            }
        }
        Ok(Some(out))
    }

    fn cheapest(&self, n: usize) -> Option<usize> {
        let mut counts = vec![(0usize, 0usize); n];
        for dir in self.rows.keys() {
            for (k, q) in dir.iter().enumerate() {
                match q.signum() {
                    1 => counts[k].0 += 1,
                    -1 => counts[k].1 += 1,
                    _ => {}
                }
            }
        }
        (0..n)
            .filter(|&k| counts[k].0 + counts[k].1 > 0)
            .min_by_key(|&k| counts[k].0 * counts[k].1)
    }
}

fn integer_row(e: &LinExpr, index: &[&Var]) -> Res<(Vec<i128>, i128)> {
    let mut lcm = e.constant_part().denom().clone();
    for q in e.coeffs().values() {
        lcm = lcm.lcm(q.denom());
    }
    let scale = |q: &crate::numerics::Rational| (q.numer() * (&lcm / q.denom())).to_i128().ok_or(Overflow);
    let mut coeffs = vec![0; index.len()];
    for (x, q) in e.coeffs() {
        let k = index.binary_search(&x).expect("indexed variable");
        coeffs[k] = scale(q)?;
    }
    Ok((coeffs, scale(e.constant_part())?))
}

/// An atom translated to an integer row over a fixed variable order.
#[derive(Clone, Debug)]
pub(crate) enum Prepared {
    Const(bool),
    Row(Vec<i128>, i128, bool),
}

/// `index` must be sorted and contain every variable of `a`.
pub(crate) fn prepare(a: &Atom, index: &[&Var]) -> Res<Prepared> {
    let (expr, strict) = match (&a.lhs, &a.rhs) {
        (ExtLinExpr::Fin(l), ExtLinExpr::Fin(r)) => match a.rel {
            Rel::Lt => (r.sub(l), true),
            Rel::Le => (r.sub(l), false),
            Rel::Gt => (l.sub(r), true),
            Rel::Ge => (l.sub(r), false),
        },
        _ => return Ok(Prepared::Const(super::fold_atom(a) == BoolExpr::True)),
    };
    let (coeffs, c) = integer_row(&expr, index)?;
    Ok(Prepared::Row(coeffs, c, strict))
}

pub(crate) fn satisfiable_prepared<'a>(rows: impl IntoIterator<Item = &'a Prepared>) -> Res<bool> {
    let mut sys = System::default();
    let mut n = 0;
    for row in rows {
        match row {
            Prepared::Const(true) => {}
            Prepared::Const(false) => return Ok(false),
            Prepared::Row(coeffs, c, strict) => {
                n = coeffs.len();
                if !sys.add(coeffs.clone(), *c, *strict)? {
                    return Ok(false);
                }
            }
        }
    }
    while let Some(x) = sys.cheapest(n) {
        match sys.eliminate(x)? {
            Some(next) => sys = next,
            None => return Ok(false),
        }
    }
    Ok(true)
}

pub(crate) fn satisfiable(atoms: &[Atom]) -> Res<bool> {
    let mut vars: Vec<&Var> = atoms.iter().flat_map(|a| a.vars()).collect();
    vars.sort();
    vars.dedup();
    let rows = atoms.iter().map(|a| prepare(a, &vars)).collect::<Res<Vec<_>>>()?;
    satisfiable_prepared(&rows)
}
