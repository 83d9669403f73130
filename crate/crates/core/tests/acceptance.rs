//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines come out in order.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quantelim::interpolate::{entails, strongest_interpolant, weakest_interpolant, Entailment};
use quantelim::logic::{atom_eval, bool_eval};
use quantelim::normalform::is_partitioning;
use quantelim::numerics::{ext_cmp, int, ExtRat, Rational};
use quantelim::oracle::{
    equiv_sample, eval_body, oracle_inf, oracle_sup, random_quantity, random_valuation, Equivalence, RandomParams,
};
use quantelim::qelim::{bounds, depth, elim, elim_with, max_of, min_of, phi_exists, phi_inf, phi_sup, size_bounds, width, ElimOptions};
use quantelim::syntax::{
    free_vars, lin_eval, parse_quantity, Atom, Disjunct, ExtLinExpr, GuardedTerm, LinExpr, Quantifier, Quantity, Rel, Valuation, Var,
};

type Outcome = Result<String, String>;

fn q(src: &str) -> Quantity {
    parse_quantity(src).expect("test input parses")
}

fn v(name: &str) -> Var {
    Var::new(name)
}

fn oracle(quant: Quantifier, sigma: &Valuation, x: &Var, body: &[GuardedTerm]) -> ExtRat {
    match quant {
        Quantifier::Sup => oracle_sup(sigma, x, body).unwrap(),
        Quantifier::Inf => oracle_inf(sigma, x, body).unwrap(),
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let took = t.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("{what} took {took:.2?}, limit {limit:?}"))
    }
}

const EXAMPLE_1: &str = "sup x : [y1 >= z -> (x - 2 < y1 && -x >= y3 && x >= y2)] * (2*x + z)";

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let f = q(EXAMPLE_1);
    let out = elim(&f).map_err(|e| e.to_string())?;
    if !out.is_quantifier_free() {
        return Err("output still quantified".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let vars = free_vars(&f);
    for _ in 0..1000 {
        let s = random_valuation(&mut rng, &vars);
        let got = eval_body(&s, &out.body).unwrap();
        let want = oracle_sup(&s, &v("x"), &f.body).unwrap();
        if got != want {
            return Err(format!("at {s}: elim gives {got}, oracle {want}"));
        }
    }
    // the displayed eliminants of the two value-carrying disjuncts, and the
    // three disjuncts valued 0 (each unbounded in x, so they exist iff y1 >= z)
    let g = q("[y2 < y1 + 2 && y2 <= -y3 && y1 + 2 <= -y3] * (2*y1 + z + 4) \
               + [y2 < y1 + 2 && y2 <= -y3 && y1 + 2 > -y3] * (-2*y3 + z) \
               + [!(y2 < y1 + 2 && y2 <= -y3)] * (-oo)");
    let g2 = q("[y1 < z] * oo + [y1 >= z] * (-oo)");
    let zero = q("[y1 >= z] * 0 + [y1 < z] * (-oo)");
    let composed = Quantity::quantifier_free(max_of(&[g.body, g2.body, zero.body]).map_err(|e| e.to_string())?);
    let simple = elim_with(&f, ElimOptions { simplify: true, jobs: None }).map_err(|e| e.to_string())?;
    match equiv_sample(&simple, &composed, 1000, 7).unwrap() {
        Equivalence::Equal => {}
        Equivalence::Differ(s) => return Err(format!("--simplify output differs from the composition at {s}")),
    }
    let took = within(t, Duration::from_secs(5), "criterion 1")?;
    Ok(format!("1000/1000 oracle agreements, composition equal at 1000 samples, {took:.2?}"))
}

/// `x rel b` with `b` over `y`, `z` or an `x`-free atom; integer data in [-3, 3].
fn random_disjunct(rng: &mut ChaCha8Rng) -> Disjunct {
    let rels = [Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge];
    let n = rng.gen_range(1..=4);
    let others = [v("y"), v("z")];
    let atoms = (0..n)
        .map(|_| {
            let rel = rels[rng.gen_range(0..4)];
            let bound = LinExpr::from_parts(
                int(rng.gen_range(-3..=3)),
                others.iter().map(|y| (y.clone(), int(rng.gen_range(-3..=3)))).collect::<Vec<_>>(),
            );
            if rng.gen_bool(0.8) {
                Atom::new(LinExpr::var(&v("x")), rel, bound)
            } else {
                Atom::new(LinExpr::var(&others[rng.gen_range(0..2)]), rel, LinExpr::constant(int(rng.gen_range(-3..=3))))
            }
        })
        .collect();
    Disjunct::new(atoms)
}

/// Greatest lower / least upper bound on `x` at `sigma`, with strictness.
fn direct_bounds(d: &Disjunct, sigma: &Valuation) -> ((ExtRat, bool), (ExtRat, bool)) {
    let mut lo = (ExtRat::NegInf, false);
    let mut hi = (ExtRat::PosInf, false);
    for a in d.atoms.iter().filter(|a| a.mentions(&v("x"))) {
        let b = lin_eval(sigma, &a.rhs).unwrap();
        let strict = a.rel.is_strict();
        let (slot, better) = match a.rel {
            Rel::Gt | Rel::Ge => (&mut lo, std::cmp::Ordering::Greater),
            Rel::Lt | Rel::Le => (&mut hi, std::cmp::Ordering::Less),
        };
        match ext_cmp(&b, &slot.0) {
            o if o == better => *slot = (b, strict),
            std::cmp::Ordering::Equal => slot.1 |= strict,
            _ => {}
        }
    }
    (lo, hi)
}

fn interval_nonempty(d: &Disjunct, sigma: &Valuation) -> bool {
    let free_ok = d.atoms.iter().filter(|a| !a.mentions(&v("x"))).all(|a| atom_eval(sigma, a).unwrap());
    let ((lo, ls), (hi, hs)) = direct_bounds(d, sigma);
    free_ok
        && match ext_cmp(&lo, &hi) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => !ls && !hs && lo.is_finite(),
            std::cmp::Ordering::Greater => false,
        }
}

fn corpus_valuations(rng: &mut ChaCha8Rng) -> Vec<Valuation> {
    let vars: BTreeSet<Var> = [v("y"), v("z")].into_iter().collect();
    (0..20).map(|_| random_valuation(rng, &vars)).collect()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    for _ in 0..500 {
        let d = random_disjunct(&mut rng);
        let phi = phi_exists(&d, &v("x")).map_err(|e| e.to_string())?;
        for s in corpus_valuations(&mut rng) {
            checks += 1;
            if bool_eval(&s, &phi).unwrap() != interval_nonempty(&d, &s) {
                return Err(format!("disagreement on {} at {s}", Quantity::quantifier_free(vec![GuardedTerm::new(d.to_bool(), ExtLinExpr::zero())])));
            }
        }
    }
    Ok(format!("500 disjuncts, {checks} valuations, 0 disagreements"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    for _ in 0..500 {
        let d = random_disjunct(&mut rng);
        let phi = phi_exists(&d, &v("x")).map_err(|e| e.to_string())?;
        let b = bounds(&d, &v("x")).map_err(|e| e.to_string())?;
        let (upper, lower) = (b.upper(), b.lower());
        for s in corpus_valuations(&mut rng) {
            if !bool_eval(&s, &phi).unwrap() {
                continue;
            }
            checks += 1;
            let ((lo, _), (hi, _)) = direct_bounds(&d, &s);
            for (list, want, sup) in [(&upper, &hi, true), (&lower, &lo, false)] {
                let mut chosen = Vec::new();
                for i in 1..=list.len() {
                    let g = if sup { phi_sup(&b, i) } else { phi_inf(&b, i) }.map_err(|e| e.to_string())?;
                    if bool_eval(&s, &g).unwrap() {
                        chosen.push(i);
                    }
                }
                let [i] = chosen[..] else {
                    return Err(format!("{} indices selected at {s}", chosen.len()));
                };
                let got = lin_eval(&s, &list[i - 1]).unwrap();
                if got != *want {
                    return Err(format!("selected bound {got}, expected {want} at {s}"));
                }
            }
        }
    }
    Ok(format!("{checks} satisfiable cases, unique selection and correct value in all"))
}

fn single_params() -> RandomParams {
    RandomParams { vars: 3, summands: 3, atoms_per_guard: 3, coeff_bound: 3, infinity_prob: 0.1, quantifiers: 1, partitioning: false }
}

fn criterion_4_and_6() -> (Outcome, Outcome) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut size_failure = None;
    let mut max_ratio = (0usize, 0usize);
    let soundness = (|| {
        for seed in 0..200 {
            let f = random_quantity(&single_params(), seed);
            let (quant, x) = f.prefix[0].clone();
            let out = elim(&f).map_err(|e| format!("seed {seed}: {e}"))?;
            if !out.is_quantifier_free() {
                return Err(format!("seed {seed}: output quantified"));
            }
            if out.body.iter().any(|t| t.guard.mentions(&x) || t.value.mentions(&x)) {
                return Err(format!("seed {seed}: output mentions {x}"));
            }
            if !is_partitioning(&out.body) {
                return Err(format!("seed {seed}: output not partitioning"));
            }
            let vars = free_vars(&f);
            for _ in 0..100 {
                let s = random_valuation(&mut rng, &vars);
                let got = eval_body(&s, &out.body).unwrap();
                let want = oracle(quant, &s, &x, &f.body);
                if got != want {
                    return Err(format!("seed {seed} at {s}: elim {got}, oracle {want}"));
                }
            }
            // sizes, with the substitution for inputs that must be made partitioning
            let (mut n, mut m) = (width(&f), depth(&f));
            if !is_partitioning(&f.body) {
                (n, m) = (1 << n, n * m);
            }
            let (wb, db) = size_bounds(n, m);
            let (w, d) = (width(&out), depth(&out));
            if BigInt::from(w) > wb || Rational::from_integer(BigInt::from(d)) > db {
                size_failure.get_or_insert(format!("seed {seed}: width {w}, depth {d} over bounds for n={n}, m={m}"));
            }
            max_ratio = (max_ratio.0.max(w), max_ratio.1.max(d));
        }
        let took = within(t, Duration::from_secs(120), "criterion 4")?;
        Ok(format!("200 instances x 100 valuations, 0 failures, {took:.2?}"))
    })();
    let sizes = match (&soundness, size_failure) {
        (_, Some(msg)) => Err(msg),
        (Err(_), None) => Err("not evaluated: criterion 4 stopped early".into()),
        (Ok(_), None) => Ok(format!("200 instances within bounds (largest width {}, depth {})", max_ratio.0, max_ratio.1)),
    };
    (soundness, sizes)
}

fn criterion_5() -> Outcome {
    let params = RandomParams { quantifiers: 2, ..single_params() };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..50 {
        let f = random_quantity(&params, 1000 + seed);
        let out = elim(&f).map_err(|e| format!("seed {seed}: {e}"))?;
        let (outer_q, outer_x) = f.prefix[0].clone();
        let inner = elim(&Quantity::new(f.prefix[1..].to_vec(), f.body.clone())).map_err(|e| e.to_string())?;
        let vars = free_vars(&f);
        for _ in 0..50 {
            let s = random_valuation(&mut rng, &vars);
            let got = eval_body(&s, &out.body).unwrap();
            let want = oracle(outer_q, &s, &outer_x, &inner.body);
            if got != want {
                return Err(format!("seed {seed} at {s}: elim {got}, oracle {want}"));
            }
        }
    }
    Ok("50 instances x 50 valuations, 0 failures".into())
}

fn run_cli(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = quantelim::cli::run(std::iter::once("quantelim").chain(args.iter().copied()), &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn both_ways(a: &Quantity, b: &Quantity) -> bool {
    entails(a, b).unwrap() == Entailment::Yes && entails(b, a).unwrap() == Entailment::Yes
}

fn criterion_7() -> Outcome {
    let dir = std::env::temp_dir().join(format!("quantelim-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let (fp, gp) = (dir.join("f.q"), dir.join("g.q"));
    let f_src = "[x >= 0] * x + [x >= 0 && y <= x] * y";
    let g_src = "[x >= 0 && z >= x] * (2*x + z + 1) + [z < x] * oo";
    std::fs::write(&fp, f_src).unwrap();
    std::fs::write(&gp, g_src).unwrap();
    let (fs, gs) = (fp.to_str().unwrap(), gp.to_str().unwrap());
    let mut results = Vec::new();
    for (flag, expected) in [("--strongest", "[x >= 0] * (2*x)"), ("--weakest", "[x >= 0] * (3*x + 1)")] {
        let (code, out, err) = run_cli(&["interpolate", flag, fs, gs], "");
        if code != 0 {
            return Err(format!("interpolate {flag} exited {code}: {err}"));
        }
        let got = q(&out);
        if equiv_sample(&got, &q(expected), 1000, 7).unwrap() != Equivalence::Equal || !both_ways(&got, &q(expected)) {
            return Err(format!("{flag} gave {}", out.trim()));
        }
        results.push(got);
    }
    let _ = std::fs::remove_dir_all(&dir);
    let chain = [q(f_src), results[0].clone(), results[1].clone(), q(g_src)];
    for w in chain.windows(2) {
        if entails(&w[0], &w[1]).unwrap() != Entailment::Yes {
            return Err(format!("chain broken between {} and {}", w[0], w[1]));
        }
    }
    Ok("strongest = [x>=0]*2x, weakest = [x>=0]*(3x+1), f |= s |= w |= f'".into())
}

/// Nonnegative summands over x1, x2, x3: `[phi && e >= 0] * e` or `[phi] * c`, c >= 0.
fn nonnegative_body(rng: &mut ChaCha8Rng) -> Vec<GuardedTerm> {
    let vars = [v("x1"), v("x2"), v("x3")];
    let lin = |rng: &mut ChaCha8Rng| {
        LinExpr::from_parts(int(rng.gen_range(-3..=3)), vars.iter().map(|x| (x.clone(), int(rng.gen_range(-3..=3)))).collect::<Vec<_>>())
    };
    (0..rng.gen_range(1..=2))
        .map(|_| {
            let phi = Atom::new(lin(rng), if rng.gen_bool(0.5) { Rel::Lt } else { Rel::Ge }, LinExpr::constant(int(0)));
            let phi = quantelim::syntax::BoolExpr::Atom(phi);
            if rng.gen_bool(0.5) {
                let e = lin(rng);
                let nonneg = quantelim::syntax::BoolExpr::Atom(Atom::new(e.clone(), Rel::Ge, LinExpr::constant(int(0))));
                GuardedTerm::new(quantelim::syntax::BoolExpr::and(phi, nonneg), ExtLinExpr::Fin(e))
            } else {
                GuardedTerm::new(phi, ExtLinExpr::constant(int(rng.gen_range(0..=3))))
            }
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let params = RandomParams { summands: 2, atoms_per_guard: 2, quantifiers: 0, ..single_params() };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in 0..100 {
        // f over x0..x2; g = sup x0 : (f + h) with h >= 0 over x1..x3,
        // so that f |= g and both projections are non-trivial
        let f = random_quantity(&params, 2000 + seed);
        let mut body = f.body.clone();
        body.extend(nonnegative_body(&mut rng));
        let g = Quantity::new(vec![(Quantifier::Sup, v("x0"))], body);
        let fail = |what: &str| Err(format!("seed {seed}: {what} (f = {f}, g = {g})"));
        if entails(&f, &g).map_err(|e| e.to_string())? != Entailment::Yes {
            return fail("constructed pair does not entail");
        }
        let s = strongest_interpolant(&f, &g).map_err(|e| e.to_string())?;
        let w = weakest_interpolant(&f, &g).map_err(|e| e.to_string())?;
        let shared: BTreeSet<Var> = free_vars(&f).intersection(&free_vars(&g)).cloned().collect();
        for (name, h) in [("strongest", &s), ("weakest", &w)] {
            if !free_vars(h).is_subset(&shared) {
                return fail(&format!("{name} interpolant has foreign variables"));
            }
            if entails(&f, h).unwrap() != Entailment::Yes || entails(h, &g).unwrap() != Entailment::Yes {
                return fail(&format!("{name} interpolant is not sandwiched"));
            }
        }
        if entails(&s, &w).unwrap() != Entailment::Yes {
            return fail("strongest does not entail weakest");
        }
    }
    Ok("100 pairs, both interpolants sandwiched with shared variables only".into())
}

fn criterion_9() -> Outcome {
    let bad = "[x>0]*oo + [x>-1]*(-oo)";
    let good = "[x>0]*oo + [x<=-1]*(-oo)";
    let (code, _, err) = run_cli(&["check"], bad);
    if code != 2 || !err.contains("summands 1 and 2") {
        return Err(format!("check on the overlapping body: exit {code}, {}", err.trim()));
    }
    let (code, out, _) = run_cli(&["check"], good);
    if code != 0 || out.trim() != "ok" {
        return Err(format!("check on the disjoint body: exit {code}"));
    }
    for args in [&["eval", "--sigma", "x=1"][..], &["elim"][..]] {
        let (code, _, err) = run_cli(args, bad);
        if code != 2 {
            return Err(format!("{} on the rejected input: exit {code}, {}", args[0], err.trim()));
        }
    }
    Ok("pair (1, 2) rejected, disjoint variant accepted, eval/elim refuse the rejected input".into())
}

fn criterion_10() -> Outcome {
    let params = RandomParams { summands: 2, atoms_per_guard: 2, quantifiers: 0, partitioning: true, ..single_params() };
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..200u64 {
        let k = if case % 2 == 0 { 2 } else { 3 };
        let bodies: Vec<Vec<GuardedTerm>> = (0..k).map(|i| random_quantity(&params, 3000 + 3 * case + i).body).collect();
        let max = max_of(&bodies).map_err(|e| e.to_string())?;
        let min = min_of(&bodies).map_err(|e| e.to_string())?;
        if !is_partitioning(&max) || !is_partitioning(&min) {
            return Err(format!("case {case}: result not partitioning"));
        }
        let vars: BTreeSet<Var> = (0..params.vars).map(quantelim::oracle::var_name).collect();
        for _ in 0..100 {
            let s = random_valuation(&mut rng, &vars);
            let values: Vec<ExtRat> = bodies.iter().map(|b| eval_body(&s, b).unwrap()).collect();
            let hi = values.iter().cloned().max_by(ext_cmp).unwrap();
            let lo = values.iter().cloned().min_by(ext_cmp).unwrap();
            if eval_body(&s, &max).unwrap() != hi || eval_body(&s, &min).unwrap() != lo {
                return Err(format!("case {case} at {s}"));
            }
        }
    }
    Ok("200 cases x 100 valuations, partitioning and pointwise exact".into())
}

fn report(n: u32, name: &str, run: impl FnOnce() -> Outcome, failed: &mut u32) {
    let t = Instant::now();
    let outcome = run();
    let took = t.elapsed();
    match outcome {
        Ok(detail) => println!("PASS {n:>2} {name}: {detail} [{took:.1?}]"),
        Err(detail) => {
            *failed += 1;
            println!("FAIL {n:>2} {name}: {detail} [{took:.1?}]");
        }
    }
}

fn main() {
    let mut failed = 0;
    report(1, "running example end-to-end", criterion_1, &mut failed);
    report(2, "existence guard fidelity", criterion_2, &mut failed);
    report(3, "bound selection uniqueness and value", criterion_3, &mut failed);
    // 6 reuses the eliminations of 4
    let (c4, c6) = criterion_4_and_6();
    report(4, "single-quantifier soundness", || c4, &mut failed);
    report(5, "nested quantifiers", criterion_5, &mut failed);
    report(6, "size bounds", || c6, &mut failed);
    report(7, "Craig interpolation example", criterion_7, &mut failed);
    report(8, "interpolant sandwich", criterion_8, &mut failed);
    report(9, "well-formedness", criterion_9, &mut failed);
    report(10, "MAX/MIN construction", criterion_10, &mut failed);
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
