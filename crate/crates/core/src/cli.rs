//! Command-line front end. Kept in the library so that tests can drive it
//! without spawning processes.
//!
//! Exit codes: 0 success, 1 parse or I/O error (including bad arguments),
//! 2 well-formedness violation, 3 missing variable binding, 4 entailment
//! failure, 5 anything else.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{error::ErrorKind, Args, Parser, Subcommand};

use crate::error::Error;
use crate::interpolate::{entails, strongest_interpolant, weakest_interpolant, Entailment};
use crate::normalform::{check_well_formed, to_gnf};
use crate::numerics::Rational;
use crate::oracle::{eval_body, eval_quantity, oracle_inf, oracle_sup, random_quantity, random_valuation, RandomParams};
use crate::qelim::{elim_with, ElimOptions};
use crate::syntax::{free_vars, parse_quantity, print_quantity, quantity_from_json, quantity_to_json, Quantifier, Quantity, Valuation, Var};

#[derive(Parser, Debug)]
#[command(name = "quantelim", version, about = "Eliminate sup/inf quantifiers from piecewise linear quantities")]
struct Cli {
    /// Worker threads for the elimination engine.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Print the result as a JSON AST.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Mode {
    /// Project the variables only `f` mentions with `sup`.
    #[arg(long)]
    strongest: bool,
    /// Project the variables only `g` mentions with `inf`.
    #[arg(long)]
    weakest: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eliminate all quantifiers.
    Elim {
        /// Input file; stdin when absent.
        file: Option<PathBuf>,
        /// Drop empty summands and merge equal values.
        #[arg(long)]
        simplify: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate at a valuation.
    Eval {
        file: Option<PathBuf>,
        /// Bindings such as `x=1,y=-3/2`; may be repeated.
        #[arg(long)]
        sigma: Vec<String>,
    },
    /// Strongest or weakest Craig interpolant of `f ⊨ g`.
    Interpolate {
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        mode: Mode,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether `f ⊨ g`.
    Entails { f: PathBuf, g: PathBuf },
    /// Check that no two summands may add `oo` and `-oo`.
    Check { file: Option<PathBuf> },
    /// Guarded normal form with respect to a variable.
    Gnf {
        file: Option<PathBuf>,
        #[arg(long)]
        var: String,
        #[command(flatten)]
        out: Output,
    },
    /// Compare elimination against the brute-force oracle on random instances.
    #[command(hide = true)]
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

/// Failure with an exit code; the message goes to stderr.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::NonLinear { .. } | Error::DuplicateBinder(_) | Error::Json(_) => 1,
            Error::WellFormedness(..) => 2,
            Error::MissingVariable(_) => 3,
            Error::NotEntailed(_) => 4,
            _ => 5,
        };
        Failure(code, e.to_string())
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, file: Option<&PathBuf>) -> Result<Quantity, Failure> {
        let text = match file {
            Some(p) if p.as_os_str() != "-" => {
                std::fs::read_to_string(p).map_err(|e| Failure(1, format!("{}: {e}", p.display())))?
            }
            _ => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s).map_err(|e| Failure(1, format!("stdin: {e}")))?;
                s
            }
        };
        Ok(parse_input(&text)?)
    }

    fn line(&mut self, s: &str) -> Result<(), Failure> {
        writeln!(self.out, "{s}").map_err(|e| Failure(1, e.to_string()))
    }

    fn quantity(&mut self, q: &Quantity, out: &Output) -> Result<(), Failure> {
        if out.json {
            let text = serde_json::to_string_pretty(&quantity_to_json(q)).expect("JSON values serialize");
            self.line(&text)
        } else {
            self.line(&print_quantity(q))
        }
    }
}

/// Text in the surface syntax, or a JSON AST when it starts with `{`.
pub fn parse_input(text: &str) -> crate::Result<Quantity> {
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        quantity_from_json(&v)
    } else {
        parse_quantity(text)
    }
}

fn parse_sigma(specs: &[String]) -> Result<Valuation, Failure> {
    let mut sigma = Valuation::new();
    for spec in specs {
        for binding in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || Failure(1, format!("bad binding `{binding}`, expected name=value"));
            let (name, value) = binding.split_once('=').ok_or_else(bad)?;
            let (name, value) = (name.trim(), value.trim());
            if !Var::is_valid(name) {
                return Err(bad());
            }
            let q = Rational::from_str(value).map_err(|_| bad())?;
            sigma.set(Var::new(name), q);
        }
    }
    Ok(sigma)
}

fn dispatch(cmd: Command, io: &mut Io) -> Result<i32, Failure> {
    let opts = |simplify| ElimOptions { simplify, jobs: None };
    match cmd {
        Command::Elim { file, simplify, out } => {
            let q = io.read(file.as_ref())?;
            let r = elim_with(&q, opts(simplify))?;
            io.quantity(&r, &out)?;
        }
        Command::Eval { file, sigma } => {
            let q = io.read(file.as_ref())?;
            let sigma = parse_sigma(&sigma)?;
            check_well_formed(&q).map_err(Error::from)?;
            io.line(&eval_quantity(&sigma, &q)?.to_string())?;
        }
        Command::Interpolate { f, g, mode, out } => {
            let (f, g) = (io.read(Some(&f))?, io.read(Some(&g))?);
            let r = if mode.strongest { strongest_interpolant(&f, &g)? } else { weakest_interpolant(&f, &g)? };
            io.quantity(&r, &out)?;
        }
        Command::Entails { f, g } => {
            let (f, g) = (io.read(Some(&f))?, io.read(Some(&g))?);
            match entails(&f, &g)? {
                Entailment::Yes => io.line("yes")?,
                Entailment::No(sigma) => {
                    io.line("no")?;
                    io.line(&sigma.to_string())?;
                    return Ok(4);
                }
            }
        }
        Command::Check { file } => {
            let q = io.read(file.as_ref())?;
            check_well_formed(&q).map_err(Error::from)?;
            io.line("ok")?;
        }
        Command::Gnf { file, var, out } => {
            let q = io.read(file.as_ref())?;
            if !Var::is_valid(&var) {
                return Err(Failure(1, format!("invalid variable name `{var}`")));
            }
            check_well_formed(&q).map_err(Error::from)?;
            io.quantity(&to_gnf(&q, &Var::new(&var))?, &out)?;
        }
        Command::Selftest { seed, samples } => return selftest(seed, samples, io),
    }
    Ok(0)
}

/// Single-quantifier instances checked against the region oracle at 20
/// valuations each.
fn selftest(seed: u64, samples: usize, io: &mut Io) -> Result<i32, Failure> {
    use rand::SeedableRng;
    let params = RandomParams::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for k in 0..samples {
        let q = random_quantity(&params, seed.wrapping_add(k as u64));
        let r = elim_with(&q, ElimOptions::default())?;
        let (quant, x) = q.prefix[0].clone();
        for _ in 0..20 {
            let sigma = random_valuation(&mut rng, &free_vars(&q));
            let expected = match quant {
                Quantifier::Sup => oracle_sup(&sigma, &x, &q.body)?,
                Quantifier::Inf => oracle_inf(&sigma, &x, &q.body)?,
            };
            let got = eval_body(&sigma, &r.body)?;
            if got != expected {
                failures += 1;
                io.line(&format!("FAIL {q} at {sigma}: got {got}, expected {expected}"))?;
                break;
            }
        }
    }
    io.line(&format!("selftest: {samples} instances, {failures} failures"))?;
    Ok(if failures == 0 { 0 } else { 5 })
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{shown}");
                    0
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    1
                }
            };
        }
    };
    let mut io = Io { stdin, out };
    if let Some(n) = cli.jobs {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
