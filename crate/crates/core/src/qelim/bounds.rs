//! Bounds of a variable in a disjunct and the guards built from them.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::logic::{fold_atom, is_isolated, negate_atom, bool_sat};
use crate::syntax::{print_atom, Atom, BoolExpr, Disjunct, ExtLinExpr, GuardedTerm, Quantifier, Rel, Var};

/// The expressions bounding `x` in a disjunct, split by relation. Each list
/// keeps first-occurrence order; the defaults `-oo` / `oo` come last in the
/// non-strict lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSets {
    pub strict_upper: Vec<ExtLinExpr>,
    pub nonstrict_upper: Vec<ExtLinExpr>,
    pub strict_lower: Vec<ExtLinExpr>,
    pub nonstrict_lower: Vec<ExtLinExpr>,
}

impl BoundSets {
    /// `U`: strict upper bounds followed by non-strict ones.
    pub fn upper(&self) -> Vec<ExtLinExpr> {
        self.strict_upper.iter().chain(&self.nonstrict_upper).cloned().collect()
    }

    /// `L`: strict lower bounds followed by non-strict ones.
    pub fn lower(&self) -> Vec<ExtLinExpr> {
        self.strict_lower.iter().chain(&self.nonstrict_lower).cloned().collect()
    }

    fn lower_with_strictness(&self) -> impl Iterator<Item = (&ExtLinExpr, bool)> {
        self.strict_lower.iter().map(|b| (b, true)).chain(self.nonstrict_lower.iter().map(|b| (b, false)))
    }

    fn upper_with_strictness(&self) -> impl Iterator<Item = (&ExtLinExpr, bool)> {
        self.strict_upper.iter().map(|b| (b, true)).chain(self.nonstrict_upper.iter().map(|b| (b, false)))
    }
}

fn push_unique(list: &mut Vec<ExtLinExpr>, e: ExtLinExpr) {
    if !list.contains(&e) {
        list.push(e);
    }
}

fn not_isolated(a: &Atom, x: &Var) -> Error {
    Error::NotIsolated { atom: print_atom(a), var: x.clone() }
}

pub fn bounds(d: &Disjunct, x: &Var) -> Result<BoundSets> {
    let mut b = BoundSets {
        strict_upper: Vec::new(),
        nonstrict_upper: Vec::new(),
        strict_lower: Vec::new(),
        nonstrict_lower: Vec::new(),
    };
    for a in d.atoms.iter().filter(|a| a.mentions(x)) {
        if !is_isolated(a, x) {
            return Err(not_isolated(a, x));
        }
        let list = match a.rel {
            Rel::Lt => &mut b.strict_upper,
            Rel::Le => &mut b.nonstrict_upper,
            Rel::Gt => &mut b.strict_lower,
            Rel::Ge => &mut b.nonstrict_lower,
        };
        push_unique(list, a.rhs.clone());
    }
    push_unique(&mut b.nonstrict_upper, ExtLinExpr::PosInf);
    push_unique(&mut b.nonstrict_lower, ExtLinExpr::NegInf);
    Ok(b)
}

fn folded(lhs: &ExtLinExpr, rel: Rel, rhs: &ExtLinExpr) -> BoolExpr {
    fold_atom(&Atom { lhs: lhs.clone(), rel, rhs: rhs.clone() })
}

/// Condition on the remaining variables under which some value of `x`
/// satisfies `d`.
pub fn phi_exists(d: &Disjunct, x: &Var) -> Result<BoolExpr> {
    let b = bounds(d, x)?;
    let mut parts = Vec::new();
    for (lo, lo_strict) in b.lower_with_strictness() {
        for (up, up_strict) in b.upper_with_strictness() {
            let rel = if lo_strict || up_strict { Rel::Lt } else { Rel::Le };
            parts.push(folded(lo, rel, up));
        }
    }
    parts.extend(d.atoms.iter().filter(|a| !a.mentions(x)).map(fold_atom));
    Ok(BoolExpr::and_all(parts))
}

fn select(list: &[ExtLinExpr], i: usize, before: Rel, after: Rel) -> Result<BoolExpr> {
    if i == 0 || i > list.len() {
        return Err(Error::IndexOutOfRange { index: i, len: list.len() });
    }
    let pick = &list[i - 1];
    let parts = list.iter().enumerate().filter(|(k, _)| *k != i - 1).map(|(k, other)| {
        folded(pick, if k < i - 1 { before } else { after }, other)
    });
    Ok(BoolExpr::and_all(parts.collect::<Vec<_>>()))
}

/// Holds iff the `i`-th (1-based) element of `U` is the first least upper
/// bound.
pub fn phi_sup(b: &BoundSets, i: usize) -> Result<BoolExpr> {
    select(&b.upper(), i, Rel::Lt, Rel::Le)
}

/// Holds iff the `i`-th (1-based) element of `L` is the first greatest lower
/// bound.
pub fn phi_inf(b: &BoundSets, i: usize) -> Result<BoolExpr> {
    select(&b.lower(), i, Rel::Gt, Rel::Ge)
}

/// Replaces `x` by `a` in `e`; an infinite `a` makes the result infinite
/// with the sign of `x` in `e`.
pub fn subst_inf(e: &ExtLinExpr, x: &Var, a: &ExtLinExpr) -> ExtLinExpr {
    let Some(fin) = e.as_fin().filter(|f| f.mentions(x)) else {
        return e.clone();
    };
    let positive = fin.coeff(x).is_positive();
    match a {
        ExtLinExpr::PosInf if positive => ExtLinExpr::PosInf,
        ExtLinExpr::PosInf => ExtLinExpr::NegInf,
        ExtLinExpr::NegInf if positive => ExtLinExpr::NegInf,
        ExtLinExpr::NegInf => ExtLinExpr::PosInf,
        ExtLinExpr::Fin(b) => ExtLinExpr::Fin(fin.substitute(x, b)),
    }
}

/// Negation that complements a lone atom instead of wrapping it.
pub(crate) fn negate_guard(g: &BoolExpr) -> BoolExpr {
    match g {
        BoolExpr::Atom(a) => BoolExpr::Atom(negate_atom(a)),
        other => other.clone().negated(),
    }
}

/// Quantifier-free equivalent of `sup x` (resp. `inf x`) over the
/// quantity that is `e` on `d` and `-oo` (resp. `oo`) elsewhere.
pub fn elim_disjunct(q: Quantifier, d: &Disjunct, e: &ExtLinExpr, x: &Var) -> Result<Vec<GuardedTerm>> {
    let b = bounds(d, x)?;
    let exists = phi_exists(d, x)?;
    let neutral = match q {
        Quantifier::Sup => ExtLinExpr::NegInf,
        Quantifier::Inf => ExtLinExpr::PosInf,
    };
    let mut out = Vec::new();
    let outside = negate_guard(&exists);
    if bool_sat(&outside) {
        out.push(GuardedTerm::new(outside, neutral.clone()));
    }
    let mut push = |guard: BoolExpr, value: ExtLinExpr| {
        if bool_sat(&guard) {
            out.push(GuardedTerm::new(guard, value));
        }
    };
    match crate::syntax::occurs_positively(e, x) {
        None => push(exists.clone(), e.clone()),
        Some(positive) => {
            // sup of an increasing piece sits at the least upper bound
            let use_upper = positive == (q == Quantifier::Sup);
            let list = if use_upper { b.upper() } else { b.lower() };
            for (k, bound) in list.iter().enumerate() {
                let sel = if use_upper { phi_sup(&b, k + 1)? } else { phi_inf(&b, k + 1)? };
                push(BoolExpr::and_all([exists.clone(), sel]), subst_inf(e, x, bound));
            }
        }
    }
    if out.is_empty() {
        out.push(GuardedTerm::new(BoolExpr::True, neutral));
    }
    Ok(out)
}
