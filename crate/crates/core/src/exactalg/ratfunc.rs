//! Quotients of multivariate polynomials.

use std::fmt;

use super::multipoly::MultiPoly;
use super::ring::Ring;
use super::scalar::{Rational, Scalar};
use super::upoly::UPoly;
use super::ExactError;

/// `numerator / denominator`, with a monic denominator (leading coefficient
/// one in graded lex order). When both parts involve at most one variable
/// the fraction is reduced by the univariate gcd; otherwise only exact
/// divisibility of the numerator by the denominator is cancelled.
#[derive(Clone, Debug)]
pub struct RatFunc<F> {
    num: MultiPoly<F>,
    den: MultiPoly<F>,
}

impl<F: Scalar> RatFunc<F> {
    pub fn new(num: MultiPoly<F>, den: MultiPoly<F>) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let mut r = RatFunc { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(p: MultiPoly<F>) -> Self {
        let den = MultiPoly::one(p.ring());
        RatFunc { num: p, den }
    }

    pub fn numer(&self) -> &MultiPoly<F> {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one(self.den.ring());
            return;
        }
        if F::EXACT {
            let mut vars = self.num.used_vars();
            vars.extend(self.den.used_vars());
            vars.sort_unstable();
            vars.dedup();
            if vars.len() == 1 {
                let i = vars[0];
                let ring = self.num.ring().clone();
                let n = UPoly::from_multi(&self.num, i).expect("univariate");
                let d = UPoly::from_multi(&self.den, i).expect("univariate");
                let g = n.gcd(&d);
                if g.degree().unwrap_or(0) > 0 {
                    self.num = n.div_rem(&g).expect("gcd").0.to_multi(&ring, i);
                    self.den = d.div_rem(&g).expect("gcd").0.to_multi(&ring, i);
                }
            } else if !self.den.is_constant() {
                if let Some(q) = self.num.exact_div_poly(&self.den) {
                    self.num = q;
                    self.den = MultiPoly::one(self.den.ring());
                }
            }
        }
        if let Some((_, lc)) = self.den.leading() {
            if !lc.is_one_exact() {
                let inv = F::one() / lc.clone();
                self.num = self.num.scale(&inv);
                self.den = self.den.scale(&inv);
            }
        }
    }

    pub fn eval(&self, point: &[F]) -> Result<F, ExactError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }
}

impl<F: Scalar> PartialEq for RatFunc<F> {
    fn eq(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }
}

impl<F: Scalar> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den.constant_value() {
            Some(c) if c.is_one_exact() => write!(f, "{}", self.num),
            _ => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

impl<F: Scalar> Ring for RatFunc<F> {
    const EXACT: bool = F::EXACT;

    fn zero_like(&self) -> Self {
        RatFunc::from_poly(self.num.zero_like())
    }
    fn one_like(&self) -> Self {
        RatFunc::from_poly(self.num.one_like())
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        RatFunc::from_poly(self.num.from_rational_like(r))
    }
    fn is_zero_elem(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        if self.den == o.den {
            let mut r = RatFunc { num: &self.num + &o.num, den: self.den.clone() };
            r.normalize();
            return r;
        }
        let mut r = RatFunc {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        };
        r.normalize();
        r
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.negate())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let mut r = RatFunc { num: &self.num * &o.num, den: &self.den * &o.den };
        r.normalize();
        r
    }
    fn negate(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            RatFunc::new(self.den.clone(), self.num.clone()).ok()
        }
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        o.try_inverse().map(|inv| self.mul_ref(&inv))
    }
    fn magnitude(&self) -> f64 {
        self.num.max_coeff()
    }
}
