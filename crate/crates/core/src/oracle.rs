//! Direct semantics and brute-force reference procedures used to check the
//! symbolic engine: exact evaluation, sup/inf over one variable by region
//! analysis, random instances and sampled equivalence.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::logic::bool_eval;
use crate::normalform::{check_body, make_partitioning};
use crate::numerics::{ext_add, rat, ExtRat, Rational};
use crate::syntax::{
    free_vars, lin_eval, Atom, BoolExpr, ExtLinExpr, GuardedTerm, LinExpr, Quantifier, Quantity, Rel, Valuation,
    Var,
};

pub fn eval_body(sigma: &Valuation, body: &[GuardedTerm]) -> Result<ExtRat> {
    let mut acc = ExtRat::zero();
    for t in body {
        if bool_eval(sigma, &t.guard)? {
            acc = ext_add(&acc, &lin_eval(sigma, &t.value)?)?;
        }
    }
    Ok(acc)
}

/// Value of `q` at `sigma`. A single binder is resolved by region analysis;
/// deeper prefixes are eliminated symbolically first.
pub fn eval_quantity(sigma: &Valuation, q: &Quantity) -> Result<ExtRat> {
    match q.prefix.as_slice() {
        [] => eval_body(sigma, &q.body),
        [(quant, x)] => oracle(*quant, sigma, x, &q.body),
        _ => eval_body(sigma, &crate::qelim::elim(q)?.body),
    }
}

pub fn oracle_sup(sigma: &Valuation, x: &Var, body: &[GuardedTerm]) -> Result<ExtRat> {
    oracle(Quantifier::Sup, sigma, x, body)
}

pub fn oracle_inf(sigma: &Valuation, x: &Var, body: &[GuardedTerm]) -> Result<ExtRat> {
    oracle(Quantifier::Inf, sigma, x, body)
}

/// The point where `a` switches truth as `x` varies, all other variables
/// fixed by `sigma`.
fn breakpoint(sigma: &Valuation, a: &Atom, x: &Var) -> Result<Option<Rational>> {
    let (Some(l), Some(r)) = (a.lhs.as_fin(), a.rhs.as_fin()) else {
        return Ok(None);
    };
    let d = l.sub(r);
    let c = d.coeff(x);
    if c.is_zero() {
        return Ok(None);
    }
    let rest = d.without(x).eval(sigma)?;
    Ok(Some(-rest / c))
}

pub fn breakpoints(sigma: &Valuation, x: &Var, body: &[GuardedTerm]) -> Result<Vec<Rational>> {
    let mut points = BTreeSet::new();
    let mut err = None;
    for t in body {
        t.guard.for_each_atom(&mut |a| match breakpoint(sigma, a, x) {
            Ok(Some(p)) => {
                points.insert(p);
            }
            Ok(None) => {}
            Err(e) => err = Some(e),
        });
    }
    match err {
        Some(e) => Err(e),
        None => Ok(points.into_iter().collect()),
    }
}

/// Sum of the values active at `sigma`, kept symbolic in `x`.
fn active_value(sigma: &Valuation, body: &[GuardedTerm]) -> Result<ExtLinExpr> {
    let mut acc = ExtLinExpr::zero();
    for t in body {
        if bool_eval(sigma, &t.guard)? {
            acc = acc.add(&t.value).ok_or(Error::UndefinedSum)?;
        }
    }
    Ok(acc)
}

enum Region {
    Point(Rational),
    Open(Option<Rational>, Option<Rational>),
}

fn oracle(q: Quantifier, sigma: &Valuation, x: &Var, body: &[GuardedTerm]) -> Result<ExtRat> {
    let pts = breakpoints(sigma, x, body)?;
    let mut regions = Vec::new();
    if pts.is_empty() {
        regions.push(Region::Open(None, None));
    } else {
        regions.push(Region::Open(None, Some(pts[0].clone())));
        for (k, p) in pts.iter().enumerate() {
            regions.push(Region::Point(p.clone()));
            regions.push(Region::Open(Some(p.clone()), pts.get(k + 1).cloned()));
        }
    }
    let two = Rational::from_integer(2.into());
    let mut best: Option<ExtRat> = None;
    for region in regions {
        let sample = match &region {
            Region::Point(p) => p.clone(),
            Region::Open(None, None) => Rational::zero(),
            Region::Open(None, Some(b)) => b - Rational::one(),
            Region::Open(Some(a), None) => a + Rational::one(),
            Region::Open(Some(a), Some(b)) => (a + b) / &two,
        };
        let at = sigma.with(x, sample.clone());
        let value = active_value(&at, body)?;
        let candidate = match value {
            ExtLinExpr::NegInf => ExtRat::NegInf,
            ExtLinExpr::PosInf => ExtRat::PosInf,
            ExtLinExpr::Fin(e) => {
                let slope = e.coeff(x);
                let eval_at = |p: &Rational| -> Result<ExtRat> { Ok(ExtRat::Finite(e.eval(&sigma.with(x, p.clone()))?)) };
                // limit of the piece at an open end: towards +oo it grows iff the slope is positive
                let limit = |end: &Option<Rational>, towards_pos: bool| -> Result<ExtRat> {
                    Ok(match end {
                        Some(p) => eval_at(p)?,
                        None if slope.is_zero() => eval_at(&sample)?,
                        None if slope.is_positive() == towards_pos => ExtRat::PosInf,
                        None => ExtRat::NegInf,
                    })
                };
                match &region {
                    Region::Point(p) => eval_at(p)?,
                    Region::Open(lo, hi) => {
                        let (a, b) = (limit(lo, false)?, limit(hi, true)?);
                        match q {
                            Quantifier::Sup => a.max(b),
                            Quantifier::Inf => a.min(b),
                        }
                    }
                }
            }
        };
        best = Some(match (best, q) {
            (None, _) => candidate,
            (Some(b), Quantifier::Sup) => b.max(candidate),
            (Some(b), Quantifier::Inf) => b.min(candidate),
        });
    }
    Ok(best.expect("at least one region"))
}

// ---- random instances ---------------------------------------------------

#[derive(Clone, Debug)]
pub struct RandomParams {
    pub vars: usize,
    pub summands: usize,
    pub atoms_per_guard: usize,
    pub coeff_bound: i64,
    pub infinity_prob: f64,
    /// Number of binders; they bind `x0`, `x1`, ... with `x0` outermost.
    pub quantifiers: usize,
    pub partitioning: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            vars: 3,
            summands: 3,
            atoms_per_guard: 3,
            coeff_bound: 3,
            infinity_prob: 0.1,
            quantifiers: 1,
            partitioning: false,
        }
    }
}

pub fn var_name(i: usize) -> Var {
    Var::new(&format!("x{i}"))
}

fn random_lin(rng: &mut ChaCha8Rng, p: &RandomParams, with_vars: bool) -> LinExpr {
    let b = p.coeff_bound;
    let coeffs: Vec<(Var, Rational)> = if with_vars {
        (0..p.vars).map(|i| (var_name(i), Rational::from_integer(rng.gen_range(-b..=b).into()))).collect()
    } else {
        Vec::new()
    };
    LinExpr::from_parts(Rational::from_integer(rng.gen_range(-b..=b).into()), coeffs)
}

fn random_atom(rng: &mut ChaCha8Rng, p: &RandomParams) -> Atom {
    let rel = *[Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge].choose(rng).unwrap();
    let mut lhs = random_lin(rng, p, true);
    if lhs.is_constant() {
        lhs = lhs.add(&LinExpr::var(&var_name(rng.gen_range(0..p.vars))));
    }
    let with_vars = rng.gen_bool(0.3);
    let rhs = random_lin(rng, p, with_vars);
    Atom::new(lhs, rel, rhs)
}

fn random_guard(rng: &mut ChaCha8Rng, p: &RandomParams, atoms: usize) -> BoolExpr {
    if atoms == 0 {
        return BoolExpr::True;
    }
    if atoms == 1 {
        let a = BoolExpr::Atom(random_atom(rng, p));
        return if rng.gen_bool(0.15) { BoolExpr::not(a) } else { a };
    }
    let left = rng.gen_range(1..atoms);
    let l = random_guard(rng, p, left);
    let r = random_guard(rng, p, atoms - left);
    let e = if rng.gen_bool(0.6) { BoolExpr::and(l, r) } else { BoolExpr::or(l, r) };
    if rng.gen_bool(0.1) {
        BoolExpr::not(e)
    } else {
        e
    }
}

fn random_value(rng: &mut ChaCha8Rng, p: &RandomParams) -> ExtLinExpr {
    if rng.gen_bool(p.infinity_prob) {
        if rng.gen_bool(0.5) {
            ExtLinExpr::PosInf
        } else {
            ExtLinExpr::NegInf
        }
    } else {
        ExtLinExpr::Fin(random_lin(rng, p, true))
    }
}

/// A deterministic pseudo-random well-formed quantity.
pub fn random_quantity(p: &RandomParams, seed: u64) -> Quantity {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut body: Vec<GuardedTerm> = (0..p.summands.max(1))
        .map(|_| {
            let atoms = rng.gen_range(1..=p.atoms_per_guard.max(1));
            GuardedTerm::new(random_guard(&mut rng, p, atoms), random_value(&mut rng, p))
        })
        .collect();
    while let Err(v) = check_body(&body) {
        body[v.j].value = ExtLinExpr::Fin(random_lin(&mut rng, p, true));
    }
    if p.partitioning {
        body = make_partitioning(&body).expect("well-formed body");
    }
    let prefix = (0..p.quantifiers.min(p.vars))
        .map(|i| (if rng.gen_bool(0.5) { Quantifier::Sup } else { Quantifier::Inf }, var_name(i)))
        .collect();
    Quantity::new(prefix, body)
}

/// Coordinates in [-10, 10] with denominators in {1, 2, 4, 8}.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    let den = *[1i64, 2, 4, 8].choose(rng).unwrap();
    rat(rng.gen_range(-10 * den..=10 * den), den)
}

pub fn random_valuation(rng: &mut impl Rng, vars: &BTreeSet<Var>) -> Valuation {
    vars.iter().map(|x| (x.clone(), random_rational(rng))).collect()
}

// ---- sampled equivalence ------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    Differ(Valuation),
}

fn atoms_of(q: &Quantity) -> Vec<Atom> {
    let mut out = Vec::new();
    for t in &q.body {
        t.guard.for_each_atom(&mut |a| {
            if !a.lhs.is_infinite() && !a.rhs.is_infinite() {
                out.push(a.clone())
            }
        });
    }
    out
}

/// Moves one coordinate of `sigma` onto (or next to) the boundary of a
/// random atom.
fn snap_to_boundary(rng: &mut ChaCha8Rng, sigma: &mut Valuation, atoms: &[Atom]) -> Result<()> {
    let Some(a) = atoms.choose(rng) else { return Ok(()) };
    let vars: Vec<Var> = a.vars().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let Some(y) = vars.choose(rng) else { return Ok(()) };
    if let Some(p) = breakpoint(sigma, a, y)? {
        let nudge = *[0i64, 0, 1, -1].choose(rng).unwrap();
        sigma.set(y.clone(), p + rat(nudge, 8));
    }
    Ok(())
}

/// Compares `f` and `g` at `n` pseudo-random valuations, about half of them
/// pushed onto guard boundaries.
pub fn equiv_sample(f: &Quantity, g: &Quantity, n: usize, seed: u64) -> Result<Equivalence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: BTreeSet<Var> = free_vars(f).union(&free_vars(g)).cloned().collect();
    let mut atoms = atoms_of(f);
    atoms.extend(atoms_of(g));
    for _ in 0..n {
        let mut sigma = random_valuation(&mut rng, &vars);
        if rng.gen_bool(0.5) {
            for _ in 0..rng.gen_range(1..=2) {
                snap_to_boundary(&mut rng, &mut sigma, &atoms)?;
            }
        }
        if eval_quantity(&sigma, f)? != eval_quantity(&sigma, g)? {
            return Ok(Equivalence::Differ(sigma));
        }
    }
    Ok(Equivalence::Equal)
}
