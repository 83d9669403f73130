//! Quantifier elimination and Craig interpolation for piecewise linear
//! quantities over the extended rationals.

pub mod cli;
pub mod error;
pub mod interpolate;
pub mod logic;
pub mod normalform;
pub mod numerics;
pub mod oracle;
pub mod qelim;
pub mod syntax;

pub use error::{Error, Result};
