use thiserror::Error;

use crate::syntax::{Valuation, Var};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("undefined sum oo + (-oo)")]
    UndefinedSum,
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("non-linear term at {line}:{column}: product of two variables")]
    NonLinear { line: usize, column: usize },
    #[error("variable `{0}` is bound twice in the quantifier prefix")]
    DuplicateBinder(Var),
    #[error("no value for variable `{0}`")]
    MissingVariable(Var),
    #[error("atom `{atom}` is not isolated w.r.t. `{var}`")]
    NotIsolated { atom: String, var: Var },
    #[error("bound index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("input body {0} is not partitioning")]
    NotPartitioning(usize),
    #[error("summands {} and {} may sum oo and -oo", .0 + 1, .1 + 1)]
    WellFormedness(usize, usize),
    #[error("entailment does not hold (witness: {0})")]
    NotEntailed(Valuation),
    #[error("malformed JSON AST: {0}")]
    Json(String),
}
