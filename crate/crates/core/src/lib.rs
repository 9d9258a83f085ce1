//! Verification engine for Heun equations with apparent singularities.
//!
//! The crate is organized bottom-up:
//!
//! * [`exactalg`]: rationals, sparse polynomials, parameter rings, linear solving.
//! * [`oredop`]: differential operators with rational-function coefficients.
//! * [`heun`]: Heun's equation, local series, apparency and polynomial conditions.
//! * [`ghg`]: generalized hypergeometric operators and terminating series.
//! * [`factorize`]: factorization of hypergeometric operators through Heun-type operators.
//! * [`kstrans`]: the Kazakov–Slavyanov parameter map and quasi-polynomial solutions.
//! * [`numcheck`]: floating-point oracles (monodromy, reducibility, decompositions).
//! * [`xjacobi`]: X1-Jacobi polynomials and their hypergeometric representation.
//!
//! All algebra is generic over the coefficient scalar; the aliases below fix
//! the common choices.

pub mod exactalg;
pub mod oredop;
pub mod heun;
pub mod ghg;
pub mod factorize;
pub mod kstrans;
pub mod numcheck;
pub mod xjacobi;

pub use exactalg::{HpComplex, HpFloat, Rational};

/// Polynomials with exact rational coefficients.
pub type QPoly = exactalg::MultiPoly<Rational>;
/// Rational functions with exact coefficients.
pub type QRatFunc = exactalg::RatFunc<Rational>;
/// Exact parameter ring elements.
pub type QParam = exactalg::ParamElem<Rational>;
/// High-precision complex parameter ring elements.
pub type HpParam = exactalg::ParamElem<HpComplex>;
