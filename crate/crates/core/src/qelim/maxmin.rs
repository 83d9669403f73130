//! Pointwise maximum / minimum of partitioning bodies.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::logic::table::AtomTable;
use crate::logic::{disjuncts_of, dnf_and, fold_atom, to_dnf};
use crate::normalform::is_partitioning;
use crate::syntax::{body_vars, Atom, BoolExpr, Disjunct, ExtLinExpr, GuardedTerm, Rel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Extremum {
    Max,
    Min,
}

pub fn max_of(bodies: &[Vec<GuardedTerm>]) -> Result<Vec<GuardedTerm>> {
    checked(bodies, Extremum::Max)
}

pub fn min_of(bodies: &[Vec<GuardedTerm>]) -> Result<Vec<GuardedTerm>> {
    checked(bodies, Extremum::Min)
}

fn checked(bodies: &[Vec<GuardedTerm>], ext: Extremum) -> Result<Vec<GuardedTerm>> {
    if let Some(k) = bodies.iter().position(|b| !is_partitioning(b)) {
        return Err(Error::NotPartitioning(k));
    }
    Ok(extremum(bodies, ext))
}

struct Piece<'a> {
    term: &'a GuardedTerm,
    dnf: Vec<Disjunct>,
}

/// For every choice of one summand per body and every index `i`, the region
/// where the chosen summand of body `i` is the first extremal one. Callers
/// guarantee that every body is partitioning.
pub(crate) fn extremum(bodies: &[Vec<GuardedTerm>], ext: Extremum) -> Vec<GuardedTerm> {
    if bodies.is_empty() {
        let neutral = match ext {
            Extremum::Max => ExtLinExpr::NegInf,
            Extremum::Min => ExtLinExpr::PosInf,
        };
        return vec![GuardedTerm::new(BoolExpr::True, neutral)];
    }
    if bodies.len() == 1 {
        return bodies[0].clone();
    }
    let pieces: Vec<Vec<Piece>> = bodies
        .iter()
        .map(|b| {
            b.iter()
                .map(|t| Piece { term: t, dnf: to_dnf(&t.guard) })
                .filter(|p| !p.dnf.is_empty())
                .collect()
        })
        .collect();
    let chunks: Vec<Vec<GuardedTerm>> = pieces[0]
        .par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut chosen = vec![first];
            descend(&pieces, ext, &mut chosen, first.dnf.clone(), &mut out);
            out
        })
        .collect();
    let out: Vec<GuardedTerm> = chunks.into_iter().flatten().collect();
    if out.is_empty() {
        // only reachable for an empty valuation space
        vec![GuardedTerm::new(BoolExpr::True, ExtLinExpr::zero())]
    } else {
        out
    }
}

fn descend<'a>(
    pieces: &'a [Vec<Piece<'a>>],
    ext: Extremum,
    chosen: &mut Vec<&'a Piece<'a>>,
    region: Vec<Disjunct>,
    out: &mut Vec<GuardedTerm>,
) {
    let k = chosen.len();
    if k == pieces.len() {
        emit(ext, chosen, &region, out);
        return;
    }
    for p in &pieces[k] {
        let next = dnf_and(&region, &p.dnf);
        if next.is_empty() {
            continue;
        }
        chosen.push(p);
        descend(pieces, ext, chosen, next, out);
        chosen.pop();
    }
}

fn emit(ext: Extremum, chosen: &[&Piece], region: &[Disjunct], out: &mut Vec<GuardedTerm>) {
    let (before, after) = match ext {
        Extremum::Max => (Rel::Gt, Rel::Ge),
        Extremum::Min => (Rel::Lt, Rel::Le),
    };
    'candidates: for (i, pick) in chosen.iter().enumerate() {
        let a = &pick.term.value;
        let mut cmp = Vec::new();
        for (k, other) in chosen.iter().enumerate().filter(|(k, _)| *k != i) {
            let rel = if k < i { before } else { after };
            match fold_atom(&Atom { lhs: a.clone(), rel, rhs: other.term.value.clone() }) {
                BoolExpr::True => {}
                BoolExpr::False => continue 'candidates,
                BoolExpr::Atom(atom) => cmp.push(atom),
                _ => unreachable!(),
            }
        }
        if !cmp.is_empty() && dnf_and(region, &[Disjunct::new(cmp.clone())]).is_empty() {
            continue;
        }
        let guard = BoolExpr::and_all(
            chosen.iter().map(|p| p.term.guard.clone()).chain(cmp.into_iter().map(BoolExpr::Atom)),
        );
        out.push(GuardedTerm::new(guard, a.clone()));
    }
}

/// Pointwise extremum of many partitioning bodies without forming their
/// product. The space is kept as a list of disjoint conjunctions, each
/// carrying the best value seen so far; every non-neutral summand of every
/// body splits the pieces it overlaps. Empty pieces are pruned as soon as
/// they appear, and summands are merged by value at the end.
pub(crate) fn sweep_extremum(bodies: &[Vec<GuardedTerm>], ext: Extremum) -> Vec<GuardedTerm> {
    let neutral = match ext {
        Extremum::Max => ExtLinExpr::NegInf,
        Extremum::Min => ExtLinExpr::PosInf,
    };
    // strict, so that ties keep the earlier value
    let better = match ext {
        Extremum::Max => Rel::Gt,
        Extremum::Min => Rel::Lt,
    };
    let mut table = AtomTable::new(bodies.iter().flat_map(|b| body_vars(b)));
    let mut pieces: Vec<(Vec<usize>, ExtLinExpr)> = vec![(Vec::new(), neutral.clone())];
    for t in bodies.iter().flatten().filter(|t| t.value != neutral) {
        for d in disjuncts_of(&t.guard) {
            let g: Vec<usize> = d.atoms.iter().map(|a| table.id(a)).collect();
            let mut next = Vec::with_capacity(pieces.len());
            for (h, u) in pieces {
                split(&mut table, h, u, &g, &t.value, better, &mut next);
            }
            pieces = next;
        }
    }
    let mut merged: Vec<(ExtLinExpr, Vec<BoolExpr>)> = vec![(neutral, Vec::new())];
    for (ids, v) in pieces {
        let guard = BoolExpr::and_all(tighten(&table, ids).into_iter().map(|k| BoolExpr::Atom(table.atom(k).clone())));
        match merged.iter_mut().find(|(w, _)| *w == v) {
            Some((_, gs)) => gs.push(guard),
            None => merged.push((v, vec![guard])),
        }
    }
    merged
        .into_iter()
        .filter(|(_, gs)| !gs.is_empty())
        .map(|(v, gs)| GuardedTerm::new(BoolExpr::or_all(gs), v))
        .collect()
}

fn with(ids: &[usize], k: usize) -> Vec<usize> {
    let mut v = ids.to_vec();
    v.push(k);
    v
}

/// Refines piece `h` (value `u`) by the candidate `g` (value `v`).
fn split(
    table: &mut AtomTable,
    h: Vec<usize>,
    u: ExtLinExpr,
    g: &[usize],
    v: &ExtLinExpr,
    better: Rel,
    out: &mut Vec<(Vec<usize>, ExtLinExpr)>,
) {
    let mut both = h.clone();
    both.extend(g.iter().filter(|k| !h.contains(k)));
    if !table.sat(&both) {
        out.push((h, u));
        return;
    }
    // the part of h outside g, cut into disjoint conjunctions
    let mut inside = h;
    for &k in g {
        if inside.contains(&k) {
            continue;
        }
        let outside = with(&inside, k ^ 1);
        if table.sat(&outside) {
            out.push((outside, u.clone()));
            inside.push(k);
        }
        // otherwise the atom is implied and need not be recorded
    }
    match fold_atom(&Atom { lhs: v.clone(), rel: better, rhs: u.clone() }) {
        BoolExpr::True => out.push((inside, v.clone())),
        BoolExpr::False => out.push((inside, u)),
        BoolExpr::Atom(c) => {
            let c = table.id(&c);
            let wins = with(&inside, c);
            let loses = with(&inside, c ^ 1);
            if table.sat(&wins) {
                out.push((wins, v.clone()));
                if table.sat(&loses) {
                    out.push((loses, u));
                }
            } else {
                out.push((inside, u));
            }
        }
        _ => unreachable!(),
    }
}

/// Drops atoms implied by the others.
fn tighten(table: &AtomTable, mut ids: Vec<usize>) -> Vec<usize> {
    let mut k = 0;
    while k < ids.len() {
        let a = ids.remove(k);
        if table.sat(&with(&ids, a ^ 1)) {
            ids.insert(k, a);
            k += 1;
        }
    }
    ids
}
