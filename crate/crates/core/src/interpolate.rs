//! Quantitative entailment and strongest / weakest Craig interpolants by
//! projecting out the non-shared variables.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::logic::bool_witness;
use crate::normalform::{check_well_formed, is_partitioning, make_partitioning};
use crate::numerics::Rational;
use crate::qelim::{elim_with, simplify, ElimOptions};
use crate::syntax::{free_vars, Atom, BoolExpr, ExtLinExpr, GuardedTerm, Quantifier, Quantity, Rel, Valuation, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entailment {
    Yes,
    /// A valuation where the left side is strictly larger.
    No(Valuation),
}

/// Quantifier-free, partitioning and simplified form of `q`.
fn flatten(q: &Quantity) -> Result<Vec<GuardedTerm>> {
    let out = elim_with(q, ElimOptions { simplify: true, jobs: None })?;
    let body = if is_partitioning(&out.body) { out.body } else { make_partitioning(&out.body)? };
    Ok(body)
}

/// Decides `f ⊨ g`, i.e. `f(σ) <= g(σ)` at every valuation.
pub fn entails(f: &Quantity, g: &Quantity) -> Result<Entailment> {
    check_well_formed(f)?;
    check_well_formed(g)?;
    let lhs = flatten(f)?;
    let rhs = flatten(g)?;
    let vars: BTreeSet<Var> = free_vars(f).into_iter().chain(free_vars(g)).collect();
    for a in &lhs {
        for b in &rhs {
            let region = match (&a.value, &b.value) {
                (ExtLinExpr::NegInf, _) | (_, ExtLinExpr::PosInf) => continue,
                (ExtLinExpr::PosInf, _) | (_, ExtLinExpr::NegInf) => BoolExpr::and(a.guard.clone(), b.guard.clone()),
                (x, y) => BoolExpr::and_all([
                    a.guard.clone(),
                    b.guard.clone(),
                    BoolExpr::Atom(Atom { lhs: x.clone(), rel: Rel::Gt, rhs: y.clone() }),
                ]),
            };
            if let Some(mut sigma) = bool_witness(&region) {
                for x in &vars {
                    if !sigma.contains(x) {
                        sigma.set(x.clone(), Rational::zero());
                    }
                }
                return Ok(Entailment::No(sigma));
            }
        }
    }
    Ok(Entailment::Yes)
}

fn require_entailment(f: &Quantity, g: &Quantity) -> Result<()> {
    match entails(f, g)? {
        Entailment::Yes => Ok(()),
        Entailment::No(sigma) => Err(Error::NotEntailed(sigma)),
    }
}

/// Eliminates `quant vars : q` after making the body partitioning and
/// simplifying it. Binders are added outside the existing prefix, in
/// lexicographic order.
fn project(q: &Quantity, quant: Quantifier, vars: BTreeSet<Var>) -> Result<Quantity> {
    let body = if is_partitioning(&q.body) { q.body.clone() } else { make_partitioning(&q.body)? };
    let body = simplify(&body);
    let prefix = vars.into_iter().map(|x| (quant, x)).chain(q.prefix.iter().cloned()).collect();
    elim_with(&Quantity::new(prefix, body), ElimOptions { simplify: true, jobs: None })
}

/// `Elim(sup x1 ... sup xn : f)` with `{x1..xn} = FV(f) \ FV(g)`.
pub fn strongest_interpolant(f: &Quantity, g: &Quantity) -> Result<Quantity> {
    require_entailment(f, g)?;
    let shared = free_vars(g);
    let own = free_vars(f).into_iter().filter(|x| !shared.contains(x)).collect();
    project(f, Quantifier::Sup, own)
}

/// `Elim(inf y1 ... inf ym : g)` with `{y1..ym} = FV(g) \ FV(f)`.
pub fn weakest_interpolant(f: &Quantity, g: &Quantity) -> Result<Quantity> {
    require_entailment(f, g)?;
    let shared = free_vars(f);
    let own = free_vars(g).into_iter().filter(|x| !shared.contains(x)).collect();
    project(g, Quantifier::Inf, own)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{equiv_sample, eval_quantity, Equivalence};
    use crate::syntax::parse_quantity;

    fn q(src: &str) -> Quantity {
        parse_quantity(src).unwrap()
    }

    const F: &str = "[x >= 0] * x + [x >= 0 && y <= x] * y";
    const G: &str = "[x >= 0 && z >= x] * (2*x + z + 1) + [z < x] * oo";

    #[test]
    fn craig_pair_entails() {
        assert_eq!(entails(&q(F), &q(G)).unwrap(), Entailment::Yes);
        assert_eq!(entails(&q(F), &q(F)).unwrap(), Entailment::Yes);
        let Entailment::No(sigma) = entails(&q(G), &q(F)).unwrap() else { panic!("reverse must fail") };
        assert!(eval_quantity(&sigma, &q(G)).unwrap() > eval_quantity(&sigma, &q(F)).unwrap());
        assert!(matches!(entails(&q("[true]*1"), &q("[true]*0")).unwrap(), Entailment::No(_)));
    }

    #[test]
    fn craig_interpolants() {
        let s = strongest_interpolant(&q(F), &q(G)).unwrap();
        let w = weakest_interpolant(&q(F), &q(G)).unwrap();
        assert_eq!(equiv_sample(&s, &q("[x >= 0] * (2*x)"), 500, 1).unwrap(), Equivalence::Equal);
        assert_eq!(equiv_sample(&w, &q("[x >= 0] * (3*x + 1)"), 500, 2).unwrap(), Equivalence::Equal);
        for (a, b) in [(&q(F), &s), (&s, &w), (&w, &q(G))] {
            assert_eq!(entails(a, b).unwrap(), Entailment::Yes);
        }
        let shared: BTreeSet<Var> = [Var::new("x")].into_iter().collect();
        assert!(free_vars(&s).is_subset(&shared) && free_vars(&w).is_subset(&shared));
    }

    #[test]
    fn shared_variables_only_means_plain_elimination() {
        let f = q("[x > 0] * x + [x <= 0] * 0");
        let g = q("[x > 0] * (x + 1) + [x <= 0] * 1");
        let s = strongest_interpolant(&f, &g).unwrap();
        assert_eq!(equiv_sample(&s, &f, 200, 3).unwrap(), Equivalence::Equal);
        let w = weakest_interpolant(&f, &g).unwrap();
        assert_eq!(equiv_sample(&w, &g, 200, 3).unwrap(), Equivalence::Equal);
    }

    #[test]
    fn non_entailing_pair_is_rejected() {
        assert!(matches!(strongest_interpolant(&q("[true]*1"), &q("[true]*0")), Err(Error::NotEntailed(_))));
    }
}
