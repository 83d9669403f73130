//! Quantifier elimination: one `sup`/`inf` at a time, innermost first.

mod bounds;
mod maxmin;

pub use bounds::{bounds, elim_disjunct, phi_exists, phi_inf, phi_sup, subst_inf, BoundSets};
pub use maxmin::{max_of, min_of};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::Result;
use crate::logic::{bool_sat, disjuncts_of};
use crate::normalform::{check_well_formed, isolate_body, to_gnf};
use crate::numerics::Rational;
use crate::syntax::{BoolExpr, ExtLinExpr, GuardedTerm, Quantifier, Quantity, Var};
use maxmin::{sweep_extremum, Extremum};

#[derive(Clone, Copy, Debug, Default)]
pub struct ElimOptions {
    pub simplify: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

/// Eliminates `x` from a body in GNF w.r.t. `x`.
pub fn elim_one(q: Quantifier, x: &Var, body: &[GuardedTerm]) -> Result<Vec<GuardedTerm>> {
    let neutral = match q {
        Quantifier::Sup => ExtLinExpr::NegInf,
        Quantifier::Inf => ExtLinExpr::PosInf,
    };
    let tasks: Vec<_> = body
        .iter()
        .filter(|t| t.value != neutral)
        .flat_map(|t| disjuncts_of(&t.guard).into_iter().map(move |d| (d, &t.value)))
        .collect();
    let parts = tasks
        .par_iter()
        .map(|(d, e)| elim_disjunct(q, d, e, x))
        .collect::<Result<Vec<_>>>()?;
    let ext = match q {
        Quantifier::Sup => Extremum::Max,
        Quantifier::Inf => Extremum::Min,
    };
    Ok(sweep_extremum(&parts, ext))
}

pub fn elim(q: &Quantity) -> Result<Quantity> {
    elim_with(q, ElimOptions::default())
}

pub fn elim_with(q: &Quantity, opts: ElimOptions) -> Result<Quantity> {
    match opts.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool construction");
            pool.install(|| elim_inner(q, opts))
        }
        None => elim_inner(q, opts),
    }
}

fn elim_inner(q: &Quantity, opts: ElimOptions) -> Result<Quantity> {
    check_well_formed(q)?;
    let mut body = q.body.clone();
    for (round, (quant, x)) in q.prefix.iter().rev().enumerate() {
        let gnf = if round == 0 {
            to_gnf(&Quantity::quantifier_free(body), x)?.body
        } else {
            // earlier rounds already produced a partitioning body
            isolate_body(body, x)
        };
        body = elim_one(*quant, x, &gnf)?;
        debug_assert!(crate::normalform::check_body(&body).is_ok());
    }
    if opts.simplify {
        body = simplify(&body);
    }
    Ok(Quantity::quantifier_free(body))
}

/// Drops unsatisfiable summands and merges summands with equal values.
pub fn simplify(body: &[GuardedTerm]) -> Vec<GuardedTerm> {
    let mut merged: Vec<(ExtLinExpr, Vec<BoolExpr>)> = Vec::new();
    for t in body {
        if !bool_sat(&t.guard) {
            continue;
        }
        match merged.iter_mut().find(|(v, _)| *v == t.value) {
            Some((_, guards)) => guards.push(t.guard.clone()),
            None => merged.push((t.value.clone(), vec![t.guard.clone()])),
        }
    }
    if merged.is_empty() {
        return vec![GuardedTerm::new(BoolExpr::True, ExtLinExpr::zero())];
    }
    merged.into_iter().map(|(v, gs)| GuardedTerm::new(BoolExpr::or_all(gs), v)).collect()
}

pub fn width(q: &Quantity) -> usize {
    q.body.len()
}

pub fn depth(q: &Quantity) -> usize {
    q.body.iter().map(|t| t.guard.size()).max().unwrap_or(0)
}

/// Upper bounds on width and depth after eliminating one variable from a
/// partitioning body of width `n` and depth `m`.
pub fn size_bounds(n: usize, m: usize) -> (BigInt, Rational) {
    let blocks = BigInt::from(n) << m;
    let exponent = u32::try_from(&blocks).expect("exponent fits in u32");
    let width = &blocks * num_traits::pow::Pow::pow(BigInt::from(m + 2), exponent);
    let half = Rational::new(BigInt::from(m + 2), BigInt::from(2));
    let depth = Rational::from_integer(blocks) * (&half * &half + Rational::from_integer(BigInt::from(m + 1)));
    (width, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalform::is_partitioning;
    use crate::numerics::{int, ExtRat};
    use crate::oracle::{eval_body, oracle_sup, random_valuation, equiv_sample, Equivalence};
    use crate::syntax::{free_vars, parse_quantity, Valuation};
    use rand::SeedableRng;

    const EXAMPLE_1: &str = "sup x : [y1 >= z -> (x - 2 < y1 && -x >= y3 && x >= y2)] * (2*x + z)";

    fn q(src: &str) -> Quantity {
        parse_quantity(src).unwrap()
    }

    fn v(s: &str) -> Var {
        Var::new(s)
    }

    #[test]
    fn running_example_matches_oracle() {
        let f = q(EXAMPLE_1);
        let out = elim(&f).unwrap();
        assert!(out.is_quantifier_free());
        assert!(is_partitioning(&out.body));
        assert!(!out.body.iter().any(|t| t.guard.mentions(&v("x")) || t.value.mentions(&v("x"))));
        let s: Valuation = [(v("y1"), int(0)), (v("y2"), int(-5)), (v("y3"), int(-3)), (v("z"), int(-1))]
            .into_iter()
            .collect();
        assert_eq!(eval_body(&s, &out.body).unwrap(), ExtRat::Finite(int(3)));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let s = random_valuation(&mut rng, &free_vars(&f));
            assert_eq!(eval_body(&s, &out.body).unwrap(), oracle_sup(&s, &v("x"), &f.body).unwrap(), "at {s}");
        }
        let simple = elim_with(&f, ElimOptions { simplify: true, jobs: Some(2) }).unwrap();
        assert_eq!(equiv_sample(&out, &simple, 300, 5).unwrap(), Equivalence::Equal);
        assert!(width(&simple) <= width(&out));
    }

    #[test]
    fn unbounded_increasing_piece() {
        let out = elim(&q("sup x : [true] * x")).unwrap();
        assert_eq!(equiv_sample(&out, &q("[true] * oo"), 50, 1).unwrap(), Equivalence::Equal);
        let out = elim(&q("inf x : [true] * (y + 1)")).unwrap();
        assert_eq!(equiv_sample(&out, &q("[true] * (y + 1)"), 50, 1).unwrap(), Equivalence::Equal);
    }

    #[test]
    fn quantifier_free_is_unchanged() {
        let f = q("[x > 0] * x + [x <= 0] * 1");
        assert_eq!(elim(&f).unwrap(), f);
    }

    #[test]
    fn craig_projection() {
        let f = q("sup y : [x >= 0] * x + [x >= 0 && y <= x] * y");
        let out = elim_with(&f, ElimOptions { simplify: true, jobs: None }).unwrap();
        assert_eq!(equiv_sample(&out, &q("[x >= 0] * (2*x)"), 500, 9).unwrap(), Equivalence::Equal);
    }

    #[test]
    fn rejects_ill_formed() {
        assert!(matches!(
            elim(&q("sup x : [x > 0] * oo + [x > -1] * (-oo)")),
            Err(crate::Error::WellFormedness(0, 1))
        ));
    }

    #[test]
    fn width_and_depth() {
        let f = q("[true] * 0");
        assert_eq!((width(&f), depth(&f)), (1, 0));
        let display = q("[y1 < z] * oo \
             + [y1 >= z && y2 < y1 + 2 && y2 <= -y3 && y1 + 2 <= -y3] * (2*y1 + z + 4) \
             + [y1 >= z && y2 < y1 + 2 && y2 <= -y3 && y1 + 2 > -y3] * (-2*y3 + z)");
        assert_eq!((width(&display), depth(&display)), (3, 4));
    }

    #[test]
    fn size_bound_values() {
        let (w, d) = size_bounds(1, 0);
        assert_eq!(w, BigInt::from(2));
        assert_eq!(d, Rational::from_integer(BigInt::from(2)));
        let (w, d) = size_bounds(2, 1);
        assert_eq!(w, BigInt::from(4 * 81));
        assert_eq!(d, Rational::new(BigInt::from(4 * 17), BigInt::from(4)));
    }
}
