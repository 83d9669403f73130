//! Boolean-level algorithms over linear inequalities: evaluation, constant
//! folding, variable isolation, DNF conversion and Fourier–Motzkin
//! satisfiability with witness extraction.

pub(crate) mod fast;
pub(crate) mod fm;
pub(crate) mod table;

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::numerics::{ext_cmp, Rational};
use crate::syntax::{lin_eval, Atom, BoolExpr, Disjunct, ExtLinExpr, LinExpr, Valuation, Var};

pub fn atom_eval(sigma: &Valuation, a: &Atom) -> Result<bool> {
    let l = lin_eval(sigma, &a.lhs)?;
    let r = lin_eval(sigma, &a.rhs)?;
    Ok(a.rel.holds(ext_cmp(&l, &r)))
}

pub fn bool_eval(sigma: &Valuation, e: &BoolExpr) -> Result<bool> {
    Ok(match e {
        BoolExpr::True => true,
        BoolExpr::False => false,
        BoolExpr::Atom(a) => atom_eval(sigma, a)?,
        BoolExpr::Not(e) => !bool_eval(sigma, e)?,
        BoolExpr::And(a, b) => bool_eval(sigma, a)? && bool_eval(sigma, b)?,
        BoolExpr::Or(a, b) => bool_eval(sigma, a)? || bool_eval(sigma, b)?,
    })
}

pub fn negate_atom(a: &Atom) -> Atom {
    Atom { lhs: a.lhs.clone(), rel: a.rel.complement(), rhs: a.rhs.clone() }
}

/// Replaces atoms that are decidable without a valuation by `True`/`False`:
/// atoms whose sides differ by a constant, and atoms with an infinite side
/// (a finite expression is never equal to `±oo`). Everything else is
/// returned as `BoolExpr::Atom`.
pub fn fold_atom(a: &Atom) -> BoolExpr {
    use ExtLinExpr::*;
    let truth = match (&a.lhs, &a.rhs) {
        (Fin(l), Fin(r)) => {
            let d = l.sub(r);
            if !d.is_constant() {
                return BoolExpr::Atom(a.clone());
            }
            a.rel.holds(d.constant_part().cmp(&Rational::zero()))
        }
        // a finite side compares like a finite constant against an infinity
        (Fin(_), r) => a.rel.holds(ext_cmp(&crate::numerics::ExtRat::zero(), &r.as_const().unwrap())),
        (l, Fin(_)) => a.rel.holds(ext_cmp(&l.as_const().unwrap(), &crate::numerics::ExtRat::zero())),
        (l, r) => a.rel.holds(ext_cmp(&l.as_const().unwrap(), &r.as_const().unwrap())),
    };
    if truth {
        BoolExpr::True
    } else {
        BoolExpr::False
    }
}

/// Folds every atom of a guard and propagates the constants.
pub fn fold_bool(e: &BoolExpr) -> BoolExpr {
    match e {
        BoolExpr::True | BoolExpr::False => e.clone(),
        BoolExpr::Atom(a) => fold_atom(a),
        BoolExpr::Not(inner) => fold_bool(inner).negated(),
        BoolExpr::And(a, b) => BoolExpr::and_all([fold_bool(a), fold_bool(b)]),
        BoolExpr::Or(a, b) => BoolExpr::or_all([fold_bool(a), fold_bool(b)]),
    }
}

/// Rewrites `a` as `x rel' b` with `x ∉ FVars(b)`. Atoms not mentioning `x`
/// are returned unchanged; atoms in which `x` cancels are returned in the
/// x-free form `rest rel -c`.
pub fn isolate(a: &Atom, x: &Var) -> Atom {
    if !a.mentions(x) {
        return a.clone();
    }
    match (&a.lhs, &a.rhs) {
        (ExtLinExpr::Fin(l), ExtLinExpr::Fin(r)) => {
            // l - r rel 0  ⇔  c·x + rest rel 0
            let d = l.sub(r);
            let c = d.coeff(x);
            let rest = d.without(x);
            if c.is_zero() {
                let konst = rest.constant_part().clone();
                let vars = rest.sub(&LinExpr::constant(konst.clone()));
                return Atom::new(vars, a.rel, LinExpr::constant(-konst));
            }
            let bound = rest.scale(&(-Rational::one() / &c));
            let rel = if c.is_positive() { a.rel } else { a.rel.flip() };
            Atom::new(LinExpr::var(x), rel, bound)
        }
        // x on the finite side, an infinity on the other
        (ExtLinExpr::Fin(l), inf) => {
            let c = l.coeff(x);
            if c.is_positive() {
                Atom { lhs: LinExpr::var(x).into(), rel: a.rel, rhs: inf.clone() }
            } else {
                Atom { lhs: LinExpr::var(x).into(), rel: a.rel.flip(), rhs: inf.neg() }
            }
        }
        (inf, ExtLinExpr::Fin(r)) => isolate(&Atom { lhs: r.clone().into(), rel: a.rel.flip(), rhs: inf.clone() }, x),
        _ => a.clone(),
    }
}

/// True iff `a` has the isolated shape `x rel b` with `x ∉ FVars(b)`.
pub fn is_isolated(a: &Atom, x: &Var) -> bool {
    let lhs_is_x = matches!(&a.lhs, ExtLinExpr::Fin(l)
        if l.constant_part().is_zero() && l.coeffs().len() == 1 && l.coeff(x).is_one());
    lhs_is_x && !a.rhs.mentions(x)
}

pub fn disjunct_sat(d: &Disjunct) -> bool {
    atoms_sat(&d.atoms)
}

pub fn atoms_sat(atoms: &[Atom]) -> bool {
    if let Ok(verdict) = fast::satisfiable(atoms) {
        return verdict;
    }
    match fm::system_of_atoms(atoms) {
        None => false,
        Some(sys) => fm::satisfiable(sys),
    }
}

pub fn fm_witness(d: &Disjunct) -> Option<Valuation> {
    fm::witness(fm::system_of_atoms(&d.atoms)?)
}

pub fn bool_sat(e: &BoolExpr) -> bool {
    bool_witness(e).is_some()
}

/// A satisfying valuation for `e`, if any. Variables of `e` left
/// unconstrained are set to 0.
///
/// Tableau search: conjunctions are expanded eagerly, and every node keeps a
/// model of its collected literals. If that model already satisfies `e` the
/// search stops. Otherwise pending disjunctions are simplified against the
/// literals (refuted literals dropped, entailed disjunctions discharged,
/// unit disjunctions forced) before the smallest one is branched on.
pub fn bool_witness(e: &BoolExpr) -> Option<Valuation> {
    let vars: Vec<Var> = e.vars().into_iter().collect();
    search(&Tableau { root: e, vars: &vars }, vec![(e, false)], Vec::new(), Vec::new())
}

struct Tableau<'a> {
    root: &'a BoolExpr,
    vars: &'a [Var],
}

type Lit<'a> = (&'a BoolExpr, bool);

fn literal(lit: Lit) -> Option<Atom> {
    match lit {
        (BoolExpr::Atom(a), false) => Some(a.clone()),
        (BoolExpr::Atom(a), true) => Some(negate_atom(a)),
        _ => None,
    }
}

fn flatten_or<'a>(lit: Lit<'a>, out: &mut Vec<Lit<'a>>) {
    match lit {
        (BoolExpr::Or(a, b), false) | (BoolExpr::And(a, b), true) => {
            flatten_or((a, lit.1), out);
            flatten_or((b, lit.1), out);
        }
        (BoolExpr::Not(inner), neg) => flatten_or((inner, !neg), out),
        _ => out.push(lit),
    }
}

fn with_atom(atoms: &[Atom], a: Atom) -> Vec<Atom> {
    let mut v = atoms.to_vec();
    v.push(a);
    v
}

fn model(t: &Tableau, atoms: &[Atom]) -> Option<Valuation> {
    let mut w = fm::witness(fm::system_of_atoms(atoms)?)?;
    for x in t.vars {
        if !w.contains(x) {
            w.set(x.clone(), Rational::zero());
        }
    }
    Some(w)
}

fn search<'a>(t: &Tableau<'a>, mut todo: Vec<Lit<'a>>, mut atoms: Vec<Atom>, mut ors: Vec<Vec<Lit<'a>>>) -> Option<Valuation> {
    let mut w: Option<Valuation> = None;
    loop {
        let before = atoms.len();
        while let Some((e, neg)) = todo.pop() {
            match (e, neg) {
                (BoolExpr::True, false) | (BoolExpr::False, true) => {}
                (BoolExpr::True, true) | (BoolExpr::False, false) => return None,
                (BoolExpr::Atom(_), _) => {
                    let lit = literal((e, neg)).unwrap();
                    match fold_atom(&lit) {
                        BoolExpr::True => {}
                        BoolExpr::False => return None,
                        _ => {
                            if !atoms.contains(&lit) {
                                atoms.push(lit);
                            }
                        }
                    }
                }
                (BoolExpr::Not(inner), neg) => todo.push((inner, !neg)),
                (BoolExpr::And(a, b), false) | (BoolExpr::Or(a, b), true) => {
                    todo.push((b, neg));
                    todo.push((a, neg));
                }
                _ => {
                    let mut items = Vec::new();
                    flatten_or((e, neg), &mut items);
                    ors.push(items);
                }
            }
        }
        if w.is_none() || atoms.len() > before {
            let m = model(t, &atoms)?;
            if bool_eval(&m, t.root).unwrap_or(false) {
                return Some(m);
            }
            w = Some(m);
        }
        let m = w.as_ref().unwrap();
        let mut remaining = Vec::with_capacity(ors.len());
        for or in ors.drain(..) {
            let mut items = Vec::with_capacity(or.len());
            let mut discharged = false;
            for lit in or {
                let Some(a) = literal(lit) else {
                    items.push(lit);
                    continue;
                };
                match fold_atom(&a) {
                    BoolExpr::True => {
                        discharged = true;
                        break;
                    }
                    BoolExpr::False => continue,
                    _ => {}
                }
                if atoms.contains(&a) {
                    discharged = true;
                    break;
                }
                // the model settles one of the two checks
                if atom_eval(m, &a).unwrap_or(false) {
                    if !atoms_sat(&with_atom(&atoms, negate_atom(&a))) {
                        discharged = true;
                        break;
                    }
                    items.push(lit);
                } else if atoms_sat(&with_atom(&atoms, a)) {
                    items.push(lit);
                }
            }
            if discharged {
                continue;
            }
            match items.len() {
                0 => return None,
                1 => todo.push(items[0]),
                _ => remaining.push(items),
            }
        }
        ors = remaining;
        if todo.is_empty() {
            break;
        }
    }
    let Some(pick) = (0..ors.len()).min_by_key(|&k| ors[k].len()) else {
        return w;
    };
    let branch = ors.swap_remove(pick);
    for (k, lit) in branch.iter().enumerate() {
        // later alternatives exclude the earlier ones
        let mut todo = vec![*lit];
        todo.extend(branch[..k].iter().map(|&(e, neg)| (e, !neg)));
        if let Some(found) = search(t, todo, atoms.clone(), ors.clone()) {
            return Some(found);
        }
    }
    None
}

/// Disjunctive normal form with eager pruning of unsatisfiable disjuncts and
/// structural deduplication. The empty list is `false`.
pub fn to_dnf(e: &BoolExpr) -> Vec<Disjunct> {
    dnf(e, false).into_iter().map(Disjunct::new).collect()
}

/// Conjoins two DNFs, pruning unsatisfiable products.
pub fn dnf_and(a: &[Disjunct], b: &[Disjunct]) -> Vec<Disjunct> {
    let a: Vec<Vec<Atom>> = a.iter().map(|d| d.atoms.clone()).collect();
    let b: Vec<Vec<Atom>> = b.iter().map(|d| d.atoms.clone()).collect();
    product(a, b).into_iter().map(Disjunct::new).collect()
}

fn dnf(e: &BoolExpr, negated: bool) -> Vec<Vec<Atom>> {
    match e {
        BoolExpr::True => if negated { vec![] } else { vec![vec![]] },
        BoolExpr::False => if negated { vec![vec![]] } else { vec![] },
        BoolExpr::Atom(a) => {
            let a = if negated { negate_atom(a) } else { a.clone() };
            match fold_atom(&a) {
                BoolExpr::True => vec![vec![]],
                BoolExpr::False => vec![],
                _ => vec![vec![a]],
            }
        }
        BoolExpr::Not(inner) => dnf(inner, !negated),
        BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
            let conjunctive = matches!(e, BoolExpr::And(..)) != negated;
            let left = dnf(a, negated);
            if conjunctive {
                if left.is_empty() {
                    return left;
                }
                product(left, dnf(b, negated))
            } else {
                union(left, dnf(b, negated))
            }
        }
    }
}

fn dedup_key(atoms: &[Atom]) -> Vec<Atom> {
    let mut key = atoms.to_vec();
    key.sort();
    key
}

fn union(mut left: Vec<Vec<Atom>>, right: Vec<Vec<Atom>>) -> Vec<Vec<Atom>> {
    let mut seen: HashSet<Vec<Atom>> = left.iter().map(|d| dedup_key(d)).collect();
    for d in right {
        if seen.insert(dedup_key(&d)) {
            left.push(d);
        }
    }
    left
}

fn product(left: Vec<Vec<Atom>>, right: Vec<Vec<Atom>>) -> Vec<Vec<Atom>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for l in &left {
        for r in &right {
            let mut merged = l.clone();
            let mut grew = false;
            for a in r {
                if !merged.contains(a) {
                    merged.push(a.clone());
                    grew = true;
                }
            }
            let novel = grew && merged.len() > r.len();
            if novel && !atoms_sat(&merged) {
                continue;
            }
            if seen.insert(dedup_key(&merged)) {
                out.push(merged);
            }
        }
    }
    out
}

/// The disjuncts of a guard already in DNF shape (`Or` of `And` of atoms),
/// without satisfiability checks. Falls back to [`to_dnf`] otherwise.
pub fn disjuncts_of(e: &BoolExpr) -> Vec<Disjunct> {
    fn conj(e: &BoolExpr, out: &mut Vec<Atom>) -> bool {
        match e {
            BoolExpr::True => true,
            BoolExpr::Atom(a) => {
                out.push(a.clone());
                true
            }
            BoolExpr::And(a, b) => conj(a, out) && conj(b, out),
            _ => false,
        }
    }
    fn disj(e: &BoolExpr, out: &mut Vec<Disjunct>) -> bool {
        match e {
            BoolExpr::False => true,
            BoolExpr::Or(a, b) => disj(a, out) && disj(b, out),
            other => {
                let mut atoms = Vec::new();
                let ok = conj(other, &mut atoms);
                out.push(Disjunct::new(atoms));
                ok
            }
        }
    }
    let mut out = Vec::new();
    if disj(e, &mut out) {
        out
    } else {
        to_dnf(e)
    }
}

/// Rebuilds a guard from disjuncts as a left-nested `Or` of `And`s.
pub fn dnf_to_bool(ds: &[Disjunct]) -> BoolExpr {
    BoolExpr::or_all(ds.iter().map(Disjunct::to_bool))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};
    use crate::syntax::{parse_quantity, Rel};
    use proptest::prelude::*;

    fn v(s: &str) -> Var {
        Var::new(s)
    }

    fn guard(src: &str) -> BoolExpr {
        parse_quantity(&format!("[{src}] * 0")).unwrap().body.remove(0).guard
    }

    fn atom(src: &str) -> Atom {
        match guard(src) {
            BoolExpr::Atom(a) => a,
            other => panic!("not an atom: {other:?}"),
        }
    }

    fn disjunct(src: &str) -> Disjunct {
        let mut atoms = Vec::new();
        guard(src).for_each_atom(&mut |a| atoms.push(a.clone()));
        Disjunct::new(atoms)
    }

    fn sigma(pairs: &[(&str, Rational)]) -> Valuation {
        pairs.iter().map(|(x, q)| (v(x), q.clone())).collect()
    }

    #[test]
    fn atom_eval_examples() {
        assert!(atom_eval(&sigma(&[("x", int(3))]), &atom("x < oo")).unwrap());
        assert!(!atom_eval(&sigma(&[("y", int(1))]), &atom("2*y >= 3")).unwrap());
        assert!(!atom_eval(&Valuation::new(), &atom("-oo < -oo")).unwrap());
    }

    #[test]
    fn negate_atom_examples() {
        assert_eq!(negate_atom(&atom("x < 3")), atom("x >= 3"));
        assert_eq!(negate_atom(&atom("y >= -oo")), atom("y < -oo"));
        assert_eq!(negate_atom(&negate_atom(&atom("x <= 0"))), atom("x <= 0"));
    }

    #[test]
    fn fold_examples() {
        assert_eq!(fold_atom(&atom("-oo <= oo")), BoolExpr::True);
        assert_eq!(fold_atom(&atom("3 < 2")), BoolExpr::False);
        assert_eq!(fold_atom(&atom("y < oo")), BoolExpr::True);
        assert_eq!(fold_atom(&atom("y >= oo")), BoolExpr::False);
        assert_eq!(fold_atom(&atom("y > -oo")), BoolExpr::True);
        assert_eq!(fold_atom(&atom("oo <= oo")), BoolExpr::True);
        assert_eq!(fold_atom(&atom("y + 2 <= y + 2")), BoolExpr::True);
        assert_eq!(fold_atom(&atom("y < z")), BoolExpr::Atom(atom("y < z")));
    }

    #[test]
    fn isolate_examples() {
        let x = v("x");
        assert_eq!(isolate(&atom("-x >= y3"), &x), atom("x <= -y3"));
        assert_eq!(isolate(&atom("x - 2 < y1"), &x), atom("x < y1 + 2"));
        assert_eq!(isolate(&atom("2*x + y <= 4 + x - y"), &x), atom("x <= 4 - 2*y"));
        assert_eq!(isolate(&atom("2*x < 4"), &x), atom("x < 2"));
        assert_eq!(isolate(&atom("y < 1"), &x), atom("y < 1"));
        assert_eq!(isolate(&atom("x + y < x + 1"), &x), atom("y < 1"));
        assert_eq!(isolate(&atom("-x + y < oo"), &x), atom("x > -oo"));
        assert!(is_isolated(&isolate(&atom("3*x >= 2*y - x"), &x), &x));
    }

    #[test]
    fn dnf_examples() {
        // second summand of the running example after partitioning
        let phi = guard("!(y1 >= z -> (x - 2 < y1 && -x >= y3 && x >= y2))");
        let ds = to_dnf(&phi);
        assert_eq!(ds.len(), 3);
        assert!(ds.iter().all(|d| d.atoms.len() == 2));
        assert_eq!(to_dnf(&guard("x < 1")), vec![disjunct("x < 1")]);
        assert!(to_dnf(&guard("x < 0 && x > 1")).is_empty());
        assert!(to_dnf(&BoolExpr::False).is_empty());
        assert_eq!(to_dnf(&guard("x < 1 || x < 1")).len(), 1);
    }

    #[test]
    fn sat_examples() {
        assert!(!disjunct_sat(&disjunct("x < 0 && x > 1")));
        assert!(disjunct_sat(&disjunct("x >= 0 && x <= -y3")));
        assert!(disjunct_sat(&Disjunct::default()));
        assert!(!disjunct_sat(&disjunct("x < y && y < z && z <= x")));
        assert!(disjunct_sat(&disjunct("x <= y && y <= z && z <= x")));
        assert!(!bool_sat(&BoolExpr::False));
        assert!(bool_sat(&guard("y2 < y1 + 2 && y2 <= -y3")));
        assert!(bool_sat(&guard("x < 0 || x > 1")));
    }

    #[test]
    fn witness_examples() {
        let w = fm_witness(&disjunct("x > 0 && x < 2")).unwrap();
        assert_eq!(w.get(&v("x")).unwrap(), &int(1));
        assert!(fm_witness(&disjunct("x < 0 && x > 1")).is_none());
        assert_eq!(fm_witness(&Disjunct::default()).unwrap(), Valuation::new());
        let w = fm_witness(&disjunct("x > 1/3 && x <= 1/3 + y && y < 1")).unwrap();
        assert!(atom_eval(&w, &atom("x > 1/3")).unwrap());
        assert!(atom_eval(&w, &atom("x <= 1/3 + y")).unwrap());
        assert_eq!(fm_witness(&disjunct("x >= 2 && x <= 2")).unwrap().get(&v("x")).unwrap(), &int(2));
        assert_eq!(fm_witness(&disjunct("x > 5/2")).unwrap().get(&v("x")).unwrap(), &rat(7, 2));
    }

    // ---- property tests -------------------------------------------------

    fn lin_strategy(vars: &'static [&'static str]) -> impl Strategy<Value = LinExpr> {
        (proptest::collection::vec(-3i64..=3, vars.len()), -3i64..=3).prop_map(move |(cs, k)| {
            LinExpr::from_parts(int(k), vars.iter().zip(cs).map(|(x, c)| (v(x), int(c))))
        })
    }

    fn rel_strategy() -> impl Strategy<Value = Rel> {
        prop_oneof![Just(Rel::Lt), Just(Rel::Le), Just(Rel::Gt), Just(Rel::Ge)]
    }

    fn atom_strategy() -> impl Strategy<Value = Atom> {
        (lin_strategy(&["x", "y", "z"]), rel_strategy(), lin_strategy(&["x", "y", "z"]))
            .prop_map(|(l, r, h)| Atom::new(l, r, h))
    }

    fn bool_strategy() -> impl Strategy<Value = BoolExpr> {
        let leaf = atom_strategy().prop_map(BoolExpr::Atom);
        leaf.prop_recursive(3, 6, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(BoolExpr::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| BoolExpr::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| BoolExpr::or(a, b)),
            ]
        })
    }

    fn valuation_strategy() -> impl Strategy<Value = Valuation> {
        proptest::collection::vec((-40i64..=40, prop_oneof![Just(1i64), Just(2), Just(4)]), 3).prop_map(|vals| {
            ["x", "y", "z"].iter().zip(vals).map(|(x, (n, d))| (v(x), rat(n, d))).collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn dnf_is_equivalent(phi in bool_strategy(), sigmas in proptest::collection::vec(valuation_strategy(), 50)) {
            let ds = to_dnf(&phi);
            for s in &sigmas {
                let direct = bool_eval(s, &phi).unwrap();
                let via = ds.iter().any(|d| d.atoms.iter().all(|a| atom_eval(s, a).unwrap()));
                prop_assert_eq!(direct, via);
            }
        }

        #[test]
        fn isolate_preserves_truth(a in atom_strategy(), s in valuation_strategy()) {
            for x in ["x", "y", "z"] {
                let iso = isolate(&a, &v(x));
                prop_assert_eq!(atom_eval(&s, &a).unwrap(), atom_eval(&s, &iso).unwrap());
                if iso.mentions(&v(x)) {
                    prop_assert!(is_isolated(&iso, &v(x)));
                }
            }
        }

        #[test]
        fn witness_agrees_with_sat(atoms in proptest::collection::vec(atom_strategy(), 1..5)) {
            let d = Disjunct::new(atoms);
            match fm_witness(&d) {
                Some(mut w) => {
                    prop_assert!(disjunct_sat(&d));
                    for x in ["x", "y", "z"] {
                        if !w.contains(&v(x)) { w.set(v(x), Rational::zero()); }
                    }
                    for a in &d.atoms {
                        prop_assert!(atom_eval(&w, a).unwrap());
                    }
                }
                None => prop_assert!(!disjunct_sat(&d)),
            }
        }
    }

    /// Quarter-integer grid over [-5, 5]² compared with the FM verdict on
    /// two-variable disjuncts with integer bounds in [-3, 3].
    #[test]
    fn sat_agrees_with_grid_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let grid: Vec<Rational> = (-20..=20).map(|n| rat(n, 4)).collect();
        let rels = [Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge];
        for _ in 0..300 {
            let n = rng.gen_range(1..=4);
            let atoms: Vec<Atom> = (0..n)
                .map(|_| {
                    let lhs = LinExpr::from_parts(
                        int(0),
                        [(v("x"), int(rng.gen_range(-2..=2))), (v("y"), int(rng.gen_range(-2..=2)))],
                    );
                    Atom::new(lhs, rels[rng.gen_range(0..4)], LinExpr::constant(int(rng.gen_range(-3..=3))))
                })
                .collect();
            let d = Disjunct::new(atoms);
            let verdict = disjunct_sat(&d);
            let grid_hit = grid.iter().any(|a| {
                grid.iter().any(|b| {
                    let s = sigma(&[("x", a.clone()), ("y", b.clone())]);
                    d.atoms.iter().all(|at| atom_eval(&s, at).unwrap())
                })
            });
            if grid_hit {
                assert!(verdict, "grid found a point but FM says unsat: {d:?}");
            } else if verdict {
                let mut w = fm_witness(&d).expect("sat verdict has a witness");
                for x in ["x", "y"] {
                    if !w.contains(&v(x)) {
                        w.set(v(x), Rational::zero());
                    }
                }
                assert!(d.atoms.iter().all(|at| atom_eval(&w, at).unwrap()), "bad witness for {d:?}");
            }
        }
    }
}
