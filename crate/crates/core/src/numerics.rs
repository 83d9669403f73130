//! Exact rationals and the extended rationals `Q ∪ {-oo, +oo}`.
//!
//! Rationals are arbitrary precision (`num_rational::BigRational`); coefficient
//! growth under Fourier–Motzkin and substitution is unbounded, and every
//! comparison in the engine must be exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form (positive denominator, reduced).
pub type Rational = num_rational::BigRational;

/// Builds the rational `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `n`, `n/d` or `-n/d`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `n`, `-n`, `n/d` or `-n/d`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// An extended rational. The derived order is the intended total order:
/// `NegInf < Finite(_) < PosInf`, finite values compared as rationals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRat {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtRat::Finite(q) => Some(q),
            _ => None,
        }
    }
}

impl From<Rational> for ExtRat {
    fn from(q: Rational) -> Self {
        ExtRat::Finite(q)
    }
}

impl Neg for ExtRat {
    type Output = ExtRat;

    fn neg(self) -> ExtRat {
        match self {
            ExtRat::NegInf => ExtRat::PosInf,
            ExtRat::PosInf => ExtRat::NegInf,
            ExtRat::Finite(q) => ExtRat::Finite(-q),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInf => f.write_str("-oo"),
            ExtRat::PosInf => f.write_str("oo"),
            ExtRat::Finite(q) => f.write_str(&fmt_rational(q)),
        }
    }
}

/// Sum of two extended rationals. `oo + (-oo)` is undefined and reported as
/// [`Error::UndefinedSum`].
pub fn ext_add(a: &ExtRat, b: &ExtRat) -> Result<ExtRat> {
    use ExtRat::*;
    match (a, b) {
        (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::UndefinedSum),
        (PosInf, _) | (_, PosInf) => Ok(PosInf),
        (NegInf, _) | (_, NegInf) => Ok(NegInf),
        (Finite(p), Finite(q)) => Ok(Finite(p + q)),
    }
}

/// Scales an extended rational; `0 · (±oo) = 0`.
pub fn ext_scale(q: &Rational, a: &ExtRat) -> ExtRat {
    match a {
        ExtRat::Finite(p) => ExtRat::Finite(q * p),
        _ if q.is_zero() => ExtRat::zero(),
        inf if q.is_positive() => inf.clone(),
        inf => -inf.clone(),
    }
}

pub fn ext_cmp(a: &ExtRat, b: &ExtRat) -> Ordering {
    a.cmp(b)
}
