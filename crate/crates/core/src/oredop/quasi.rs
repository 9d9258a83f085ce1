//! Functions `w^a (w-1)^b R(w)` with symbolic exponents.

use std::fmt;

use super::diffop::DiffOp;
use super::zfrac::ZFrac;
use crate::exactalg::{ExactError, Ring};

#[derive(Clone, Debug)]
pub struct QuasiFunction<R> {
    a: R,
    b: R,
    rational: ZFrac<R>,
    at0: usize,
    at1: usize,
}

impl<R: Ring> QuasiFunction<R> {
    /// The pole list of `rational` must contain 0 and 1.
    pub fn new(a: R, b: R, rational: ZFrac<R>) -> Result<Self, ExactError> {
        let at0 = rational.poles().find(&a.zero_like()).ok_or(ExactError::Dimension("pole list lacks 0".into()))?;
        let at1 = rational.poles().find(&a.one_like()).ok_or(ExactError::Dimension("pole list lacks 1".into()))?;
        Ok(QuasiFunction { a, b, rational, at0, at1 })
    }

    pub fn exponent_a(&self) -> &R {
        &self.a
    }

    pub fn exponent_b(&self) -> &R {
        &self.b
    }

    pub fn rational_part(&self) -> &ZFrac<R> {
        &self.rational
    }

    fn with_rational(&self, rational: ZFrac<R>) -> Self {
        QuasiFunction { a: self.a.clone(), b: self.b.clone(), rational, at0: self.at0, at1: self.at1 }
    }

    /// Same exponents, rational part `R' + (a/w + b/(w-1)) R`.
    pub fn derivative(&self) -> Self {
        let p = self.rational.poles();
        let log_d = ZFrac::pole_power(p, self.at0, 1, self.a.clone()).add(&ZFrac::pole_power(p, self.at1, 1, self.b.clone()));
        self.with_rational(self.rational.derivative().add(&log_d.mul(&self.rational)).simplify())
    }

    pub fn is_zero(&self) -> bool {
        self.rational.simplify().is_zero()
    }
}

impl<R: Ring> fmt::Display for QuasiFunction<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.rational.poles().var();
        write!(f, "{v}^({}) * ({v} - 1)^({}) * [{}]", self.a, self.b, self.rational)
    }
}

/// `L f`, again of the form `w^a (w-1)^b R(w)`.
pub fn apply_quasi<R: Ring>(l: &DiffOp<ZFrac<R>>, f: &QuasiFunction<R>) -> QuasiFunction<R> {
    let mut acc = ZFrac::zero(f.rational.poles(), f.rational.unit());
    let mut dj = f.clone();
    for (j, c) in l.coeffs().iter().enumerate() {
        if j > 0 {
            dj = dj.derivative();
        }
        if !c.is_zero() {
            acc = acc.add(&c.mul(&dj.rational));
        }
    }
    f.with_rational(acc.simplify())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{rint, Rational};
    use crate::oredop::zfrac::Poles;

    #[test]
    fn derivative_of_power() {
        let p = Poles::new("w", vec![rint(0), rint(1)], vec!["0".into(), "1".into()]);
        let one = rint(1);
        let f = QuasiFunction::new(rint(5), rint(0), ZFrac::constant(&p, one.clone())).unwrap();
        let u = ZFrac::constant(&p, one.clone());
        let d = DiffOp::d(&u);
        let g = apply_quasi(&d, &f);
        assert_eq!(g.rational_part().to_string(), "5/w");
        // D^2 w^2 = 2.
        let f2 = QuasiFunction::new(rint(2), rint(0), ZFrac::constant(&p, one)).unwrap();
        let g2 = apply_quasi(&d.mul(&d), &f2);
        let expect = ZFrac::<Rational>::pole_power(&p, 0, 2, rint(2));
        assert_eq!(g2.rational_part(), &expect);
    }
}
