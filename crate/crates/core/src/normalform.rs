//! Partitioning form, guarded normal form w.r.t. a variable, and the
//! well-formedness check on infinite summands.

use crate::error::{Error, Result};
use crate::logic::table::AtomTable;
use crate::logic::{bool_sat, disjuncts_of, dnf_and, dnf_to_bool, fold_bool, isolate, to_dnf};
use crate::syntax::{body_vars, BoolExpr, Disjunct, ExtLinExpr, GuardedTerm, Quantity, Var};

/// Two summands whose guards overlap while one is `oo` and the other `-oo`
/// (0-based indices, `i < j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::WellFormedness(v.i, v.j)
    }
}

pub fn check_well_formed(q: &Quantity) -> Result<(), Violation> {
    check_body(&q.body)
}

pub fn check_body(body: &[GuardedTerm]) -> Result<(), Violation> {
    for (i, a) in body.iter().enumerate() {
        for (j, b) in body.iter().enumerate().skip(i + 1) {
            let clash = matches!(
                (&a.value, &b.value),
                (ExtLinExpr::PosInf, ExtLinExpr::NegInf) | (ExtLinExpr::NegInf, ExtLinExpr::PosInf)
            );
            if clash && bool_sat(&BoolExpr::and(a.guard.clone(), b.guard.clone())) {
                return Err(Violation { i, j });
            }
        }
    }
    Ok(())
}

/// Exactly one guard holds at every valuation: the guards are pairwise
/// disjoint and together cover the space.
pub fn is_partitioning(body: &[GuardedTerm]) -> bool {
    let mut table = AtomTable::new(body_vars(body));
    let guards: Vec<Vec<Vec<usize>>> = body
        .iter()
        .map(|t| to_dnf(&fold_bool(&t.guard)).iter().map(|d| d.atoms.iter().map(|a| table.id(a)).collect()).collect())
        .collect();
    for (i, a) in guards.iter().enumerate() {
        for b in &guards[i + 1..] {
            for (c, d) in a.iter().flat_map(|c| b.iter().map(move |d| (c, d))) {
                if table.sat(&[&c[..], &d[..]].concat()) {
                    return false;
                }
            }
        }
    }
    let all: Vec<&[usize]> = guards.iter().flatten().map(Vec::as_slice).collect();
    covers(&table, &mut Vec::new(), &all)
}

/// Whether the conjunctions in `ds` cover the region `space`, which must be
/// satisfiable. The first one meeting the region is cut out and the rest of
/// the region, split into disjoint pieces, is checked against the remaining
/// conjunctions that meet it.
fn covers(table: &AtomTable, space: &mut Vec<usize>, ds: &[&[usize]]) -> bool {
    let live: Vec<&[usize]> = ds.iter().copied().filter(|d| table.sat(&[&space[..], d].concat())).collect();
    let Some((d, rest)) = live.split_first() else {
        return false;
    };
    let depth = space.len();
    for &a in d.iter() {
        let before = space.len();
        space.push(a ^ 1);
        let ok = !table.sat(space) || covers(table, space, rest);
        space.truncate(before);
        if !ok {
            return false;
        }
        space.push(a);
    }
    space.truncate(depth);
    true
}

/// Splits the valuation space by the truth pattern of all guards. Each
/// satisfiable pattern becomes one summand carrying the sum of the values
/// selected by it.
pub fn make_partitioning(body: &[GuardedTerm]) -> Result<Vec<GuardedTerm>> {
    let choices: Vec<[(BoolExpr, Vec<Disjunct>); 2]> = body
        .iter()
        .map(|t| {
            let neg = t.guard.clone().negated();
            let neg_dnf = to_dnf(&neg);
            [(t.guard.clone(), to_dnf(&t.guard)), (neg, neg_dnf)]
        })
        .collect();
    let mut out = Vec::new();
    let mut picks = Vec::with_capacity(body.len());
    enumerate(body, &choices, &mut picks, vec![Disjunct::default()], &mut out)?;
    if out.is_empty() {
        out.push(GuardedTerm::new(BoolExpr::True, ExtLinExpr::zero()));
    }
    Ok(out)
}

fn enumerate(
    body: &[GuardedTerm],
    choices: &[[(BoolExpr, Vec<Disjunct>); 2]],
    picks: &mut Vec<bool>,
    region: Vec<Disjunct>,
    out: &mut Vec<GuardedTerm>,
) -> Result<()> {
    let k = picks.len();
    if k == body.len() {
        let guard = BoolExpr::and_all(picks.iter().zip(choices).map(|(&p, c)| c[usize::from(!p)].0.clone()));
        let mut value = ExtLinExpr::zero();
        for (t, _) in body.iter().zip(picks.iter()).filter(|(_, &p)| p) {
            value = value.add(&t.value).ok_or(Error::UndefinedSum)?;
        }
        out.push(GuardedTerm::new(guard, value));
        return Ok(());
    }
    for pick in [true, false] {
        let next = dnf_and(&region, &choices[k][usize::from(!pick)].1);
        if next.is_empty() {
            continue;
        }
        picks.push(pick);
        enumerate(body, choices, picks, next, out)?;
        picks.pop();
    }
    Ok(())
}

/// Puts every guard into DNF with all atoms mentioning `x` isolated.
/// Unsatisfiable summands are dropped.
pub fn isolate_body(body: Vec<GuardedTerm>, x: &Var) -> Vec<GuardedTerm> {
    let out: Vec<GuardedTerm> = body
        .into_iter()
        .filter_map(|t| {
            let ds = disjuncts_of(&t.guard);
            if ds.is_empty() {
                return None;
            }
            let ds: Vec<Disjunct> = ds
                .into_iter()
                .map(|d| {
                    let mut atoms = Vec::with_capacity(d.atoms.len());
                    for a in d.atoms {
                        let a = isolate(&a, x);
                        if !atoms.contains(&a) {
                            atoms.push(a);
                        }
                    }
                    Disjunct::new(atoms)
                })
                .collect();
            Some(GuardedTerm::new(dnf_to_bool(&ds), t.value))
        })
        .collect();
    if out.is_empty() {
        vec![GuardedTerm::new(BoolExpr::True, ExtLinExpr::zero())]
    } else {
        out
    }
}

/// Guarded normal form of the body of `q` w.r.t. `x`; the prefix is kept.
pub fn to_gnf(q: &Quantity, x: &Var) -> Result<Quantity> {
    let body = if is_partitioning(&q.body) { q.body.clone() } else { make_partitioning(&q.body)? };
    Ok(Quantity::new(q.prefix.clone(), isolate_body(body, x)))
}
