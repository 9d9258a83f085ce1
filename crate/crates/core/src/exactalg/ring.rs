//! A minimal commutative-ring interface shared by scalars, polynomials and
//! localized parameter rings.
//!
//! Elements carry their own context (variable names, units, modulus), so the
//! constructors take `&self` and build an element living in the same ring.

use std::fmt;

use super::scalar::{rint, Rational, Scalar};

pub trait Ring: Clone + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Whether the zero test is exact.
    const EXACT: bool;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, r: &Rational) -> Self;
    fn from_i64_like(&self, n: i64) -> Self {
        self.from_rational_like(&rint(n))
    }

    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;

    /// Multiplicative inverse when it exists inside the ring.
    fn try_inverse(&self) -> Option<Self>;

    /// `self / other` when the quotient exists inside the ring.
    fn exact_div(&self, other: &Self) -> Option<Self>;

    /// Size estimate used for pivoting and residual reporting.
    fn magnitude(&self) -> f64;

    /// Text used when the element appears as a coefficient.
    fn display_elem(&self) -> String {
        self.to_string()
    }

    fn scale_rational(&self, r: &Rational) -> Self {
        self.mul_ref(&self.from_rational_like(r))
    }

    fn pow_u(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

impl<F: Scalar> Ring for F {
    const EXACT: bool = F::EXACT;

    fn zero_like(&self) -> Self {
        F::zero()
    }
    fn one_like(&self) -> Self {
        F::one()
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        F::from_rational(r)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn negate(&self) -> Self {
        -self.clone()
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(F::one() / self.clone())
        }
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self.clone() / other.clone())
        }
    }
    fn magnitude(&self) -> f64 {
        Scalar::magnitude(self)
    }
    fn display_elem(&self) -> String {
        match self.signed_parts() {
            (true, s) => format!("-{s}"),
            (false, s) => s,
        }
    }
}
