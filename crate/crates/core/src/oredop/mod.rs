//! Differential operators in one variable and their action on functions.

pub mod diffop;
pub mod quasi;
pub mod zfrac;

pub use diffop::{DiffOp, DiffRing, OreError};
pub use quasi::{apply_quasi, QuasiFunction};
pub use zfrac::{fmt_dense, Poles, ZFrac};
