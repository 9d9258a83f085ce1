//! Exact arithmetic: rationals, sparse polynomials, parameter rings,
//! fraction-free elimination and Gröbner normal forms.

pub mod groebner;
pub mod linsolve;
pub mod multipoly;
pub mod param;
pub mod ratfunc;
pub mod ring;
pub mod scalar;
pub mod upoly;

use thiserror::Error;

pub use groebner::{groebner_basis, groebner_reduce, normal_form};
pub use linsolve::{rank, select_independent_rows, solve_fraction_free, solve_linear, FractionFree};
pub use multipoly::{Monomial, MultiPoly, PolyRing};
pub use param::{ParamElem, ParamRing};
pub use ratfunc::RatFunc;
pub use ring::Ring;
pub use scalar::{HpComplex, HpFloat, Rational, Scalar};
pub use upoly::UPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("`{poly}` is not monic in `{var}`")]
    NotMonic { var: String, poly: String },
    #[error("`{0}` is not univariate")]
    NotUnivariate(String),
    #[error("singular system: rank {rank} of {size}")]
    Singular { rank: usize, size: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("quotient does not lie in the coefficient ring")]
    NotDivisible,
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("Gröbner budget of {0} reductions exhausted")]
    Budget(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}
