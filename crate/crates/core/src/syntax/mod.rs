//! The quantity language: linear expressions, guards, guarded terms and
//! quantified bodies, together with the parser, printer and JSON AST codec.

mod json;
mod parser;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{ExtRat, Rational};

pub use json::{quantity_from_json, quantity_to_json};
pub use parser::parse_quantity;
pub use print::{print_atom, print_bool, print_quantity};

/// A variable name matching `[A-Za-z_][A-Za-z0-9_]*`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        debug_assert!(Self::is_valid(name), "invalid variable name {name:?}");
        Var(Arc::from(name))
    }

    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `constant + Σ coeff·var`, with no zero coefficient stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinExpr {
    constant: Rational,
    coeffs: BTreeMap<Var, Rational>,
}

impl LinExpr {
    pub fn constant(q: Rational) -> Self {
        LinExpr { constant: q, coeffs: BTreeMap::new() }
    }

    pub fn var(x: &Var) -> Self {
        Self::term(Rational::from_integer(1.into()), x)
    }

    pub fn term(q: Rational, x: &Var) -> Self {
        let mut e = LinExpr::default();
        e.add_term(q, x);
        e
    }

    pub fn from_parts(constant: Rational, coeffs: impl IntoIterator<Item = (Var, Rational)>) -> Self {
        let mut e = LinExpr::constant(constant);
        for (x, q) in coeffs {
            e.add_term(q, &x);
        }
        e
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, x: &Var) -> Rational {
        self.coeffs.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mentions(&self, x: &Var) -> bool {
        self.coeffs.contains_key(x)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coeffs.keys()
    }

    fn add_term(&mut self, q: Rational, x: &Var) {
        if q.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(x.clone()).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.coeffs.remove(x);
        }
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (x, q) in &other.coeffs {
            out.add_term(q.clone(), x);
        }
        out
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, q: &Rational) -> LinExpr {
        if q.is_zero() {
            return LinExpr::default();
        }
        LinExpr {
            constant: &self.constant * q,
            coeffs: self.coeffs.iter().map(|(x, c)| (x.clone(), c * q)).collect(),
        }
    }

    pub fn neg(&self) -> LinExpr {
        self.scale(&-Rational::from_integer(1.into()))
    }

    /// The expression with the `x` term dropped.
    pub fn without(&self, x: &Var) -> LinExpr {
        let mut out = self.clone();
        out.coeffs.remove(x);
        out
    }

    /// Syntactic replacement of `x` by `e`, merging coefficients.
    pub fn substitute(&self, x: &Var, e: &LinExpr) -> LinExpr {
        match self.coeffs.get(x) {
            None => self.clone(),
            Some(q) => self.without(x).add(&e.scale(q)),
        }
    }

    pub fn eval(&self, sigma: &Valuation) -> Result<Rational> {
        let mut acc = self.constant.clone();
        for (x, q) in &self.coeffs {
            acc += q * sigma.get(x)?;
        }
        Ok(acc)
    }
}

/// A linear expression or one of the two infinite constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtLinExpr {
    NegInf,
    Fin(LinExpr),
    PosInf,
}

impl ExtLinExpr {
    pub fn zero() -> Self {
        ExtLinExpr::Fin(LinExpr::default())
    }

    pub fn constant(q: Rational) -> Self {
        ExtLinExpr::Fin(LinExpr::constant(q))
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, ExtLinExpr::Fin(_))
    }

    pub fn as_fin(&self) -> Option<&LinExpr> {
        match self {
            ExtLinExpr::Fin(e) => Some(e),
            _ => None,
        }
    }

    pub fn mentions(&self, x: &Var) -> bool {
        self.as_fin().is_some_and(|e| e.mentions(x))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.as_fin().into_iter().flat_map(|e| e.vars())
    }

    /// Extended-rational sum; `None` for `oo + (-oo)`.
    pub fn add(&self, other: &ExtLinExpr) -> Option<ExtLinExpr> {
        use ExtLinExpr::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (Fin(a), Fin(b)) => Some(Fin(a.add(b))),
        }
    }

    pub fn neg(&self) -> ExtLinExpr {
        match self {
            ExtLinExpr::NegInf => ExtLinExpr::PosInf,
            ExtLinExpr::PosInf => ExtLinExpr::NegInf,
            ExtLinExpr::Fin(e) => ExtLinExpr::Fin(e.neg()),
        }
    }

    /// The value if the expression is variable-free.
    pub fn as_const(&self) -> Option<ExtRat> {
        match self {
            ExtLinExpr::NegInf => Some(ExtRat::NegInf),
            ExtLinExpr::PosInf => Some(ExtRat::PosInf),
            ExtLinExpr::Fin(e) if e.is_constant() => Some(ExtRat::Finite(e.constant.clone())),
            ExtLinExpr::Fin(_) => None,
        }
    }
}

impl From<LinExpr> for ExtLinExpr {
    fn from(e: LinExpr) -> Self {
        ExtLinExpr::Fin(e)
    }
}

/// Evaluates an extended linear expression under `sigma`.
pub fn lin_eval(sigma: &Valuation, e: &ExtLinExpr) -> Result<ExtRat> {
    Ok(match e {
        ExtLinExpr::NegInf => ExtRat::NegInf,
        ExtLinExpr::PosInf => ExtRat::PosInf,
        ExtLinExpr::Fin(e) => ExtRat::Finite(e.eval(sigma)?),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    /// The complement relation: `¬(a < b) ⇔ a ≥ b` over a total order.
    pub fn complement(self) -> Rel {
        match self {
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }

    /// The relation with operands swapped: `a < b ⇔ b > a`.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Rel::Lt | Rel::Gt)
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            Rel::Lt => ord == Less,
            Rel::Le => ord != Greater,
            Rel::Gt => ord == Greater,
            Rel::Ge => ord != Less,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub lhs: ExtLinExpr,
    pub rel: Rel,
    pub rhs: ExtLinExpr,
}

impl Atom {
    pub fn new(lhs: impl Into<ExtLinExpr>, rel: Rel, rhs: impl Into<ExtLinExpr>) -> Self {
        Atom { lhs: lhs.into(), rel, rhs: rhs.into() }
    }

    pub fn mentions(&self, x: &Var) -> bool {
        self.lhs.mentions(x) || self.rhs.mentions(x)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.lhs.vars().chain(self.rhs.vars())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    True,
    False,
    Atom(Atom),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn not(e: BoolExpr) -> BoolExpr {
        BoolExpr::Not(Box::new(e))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `True` operands are dropped and a `False`
    /// operand absorbs the whole conjunction.
    pub fn and_all(items: impl IntoIterator<Item = BoolExpr>) -> BoolExpr {
        let mut acc: Option<BoolExpr> = None;
        for item in items {
            match item {
                BoolExpr::True => {}
                BoolExpr::False => return BoolExpr::False,
                e => acc = Some(match acc {
                    None => e,
                    Some(a) => BoolExpr::and(a, e),
                }),
            }
        }
        acc.unwrap_or(BoolExpr::True)
    }

    /// Left-nested disjunction; dual of [`BoolExpr::and_all`].
    pub fn or_all(items: impl IntoIterator<Item = BoolExpr>) -> BoolExpr {
        let mut acc: Option<BoolExpr> = None;
        for item in items {
            match item {
                BoolExpr::False => {}
                BoolExpr::True => return BoolExpr::True,
                e => acc = Some(match acc {
                    None => e,
                    Some(a) => BoolExpr::or(a, e),
                }),
            }
        }
        acc.unwrap_or(BoolExpr::False)
    }

    /// Negation that folds constants and double negation.
    pub fn negated(self) -> BoolExpr {
        match self {
            BoolExpr::True => BoolExpr::False,
            BoolExpr::False => BoolExpr::True,
            BoolExpr::Not(e) => *e,
            e => BoolExpr::not(e),
        }
    }

    /// Visits every atom leaf, left to right.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            BoolExpr::True | BoolExpr::False => {}
            BoolExpr::Atom(a) => f(a),
            BoolExpr::Not(e) => e.for_each_atom(f),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }

    /// Number of (not necessarily distinct) atom leaves.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.for_each_atom(&mut |_| n += 1);
        n
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| out.extend(a.vars().cloned()));
        out
    }

    pub fn mentions(&self, x: &Var) -> bool {
        let mut found = false;
        self.for_each_atom(&mut |a| found |= a.mentions(x));
        found
    }
}

impl From<Atom> for BoolExpr {
    fn from(a: Atom) -> Self {
        BoolExpr::Atom(a)
    }
}

/// A conjunction of atoms; the empty conjunction is `true`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Disjunct {
    pub atoms: Vec<Atom>,
}

impl Disjunct {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Disjunct { atoms }
    }

    pub fn to_bool(&self) -> BoolExpr {
        BoolExpr::and_all(self.atoms.iter().cloned().map(BoolExpr::Atom))
    }
}

/// One summand `[guard] · value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GuardedTerm {
    pub guard: BoolExpr,
    pub value: ExtLinExpr,
}

impl GuardedTerm {
    pub fn new(guard: BoolExpr, value: ExtLinExpr) -> Self {
        GuardedTerm { guard, value }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Sup,
    Inf,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Sup => "sup",
            Quantifier::Inf => "inf",
        }
    }
}

/// `Q1 x1 … Qk xk : Σ [φi]·ai`. The body is never empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quantity {
    pub prefix: Vec<(Quantifier, Var)>,
    pub body: Vec<GuardedTerm>,
}

impl Quantity {
    pub fn new(prefix: Vec<(Quantifier, Var)>, body: Vec<GuardedTerm>) -> Self {
        assert!(!body.is_empty(), "a quantity needs at least one summand");
        Quantity { prefix, body }
    }

    pub fn quantifier_free(body: Vec<GuardedTerm>) -> Self {
        Self::new(Vec::new(), body)
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.prefix.is_empty()
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_quantity(self))
    }
}

/// Variables occurring in a body, bound or not.
pub fn body_vars(body: &[GuardedTerm]) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for t in body {
        out.extend(t.guard.vars());
        out.extend(t.value.vars().cloned());
    }
    out
}

pub fn free_vars(q: &Quantity) -> BTreeSet<Var> {
    let mut vars = body_vars(&q.body);
    for (_, x) in &q.prefix {
        vars.remove(x);
    }
    vars
}

/// A total assignment of finite rationals to the variables of interest.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Valuation(BTreeMap<Var, Rational>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &Var) -> Result<&Rational> {
        self.0.get(x).ok_or_else(|| Error::MissingVariable(x.clone()))
    }

    pub fn set(&mut self, x: Var, q: Rational) {
        self.0.insert(x, q);
    }

    /// `σ[x ↦ q]`.
    pub fn with(&self, x: &Var, q: Rational) -> Valuation {
        let mut out = self.clone();
        out.set(x.clone(), q);
        out
    }

    pub fn contains(&self, x: &Var) -> bool {
        self.0.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Rational)> {
        self.0.iter()
    }
}

impl FromIterator<(Var, Rational)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Var, Rational)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(x, q)| format!("{x}={}", crate::numerics::fmt_rational(q)))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Sign of the coefficient of `x` in `e`: `Some(true)` positive,
/// `Some(false)` negative, `None` when `x` does not occur.
pub fn occurs_positively(e: &ExtLinExpr, x: &Var) -> Option<bool> {
    e.as_fin().and_then(|e| e.coeffs().get(x)).map(|q| q.is_positive())
}
