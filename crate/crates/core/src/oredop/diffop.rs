//! Differential operators `sum_j c_j(z) D^j`, normal ordered (coefficients
//! to the left of `D = d/dz`).

use std::fmt;

use thiserror::Error;

use super::zfrac::ZFrac;
use crate::exactalg::{ExactError, Ring};

/// A coefficient ring closed under `d/dz`.
pub trait DiffRing: Ring {
    fn deriv(&self) -> Self;

    /// Cancel common factors, where the representation allows it.
    fn tidy(&self) -> Self {
        self.clone()
    }
}

impl<R: Ring> DiffRing for ZFrac<R> {
    fn deriv(&self) -> Self {
        self.derivative()
    }
    fn tidy(&self) -> Self {
        self.simplify()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OreError {
    #[error("leading coefficient `{0}` of the divisor is not invertible")]
    LeadingCoefficient(String),
    #[error("divisor must have order at least 1")]
    DivisorOrder,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Debug)]
pub struct DiffOp<C> {
    coeffs: Vec<C>,
    unit: C,
}

impl<C: DiffRing> DiffOp<C> {
    pub fn new(coeffs: Vec<C>, unit: &C) -> Self {
        let mut op = DiffOp { coeffs, unit: unit.one_like() };
        op.trim();
        op
    }

    pub fn zero(unit: &C) -> Self {
        DiffOp { coeffs: Vec::new(), unit: unit.one_like() }
    }

    /// Multiplication by `c`.
    pub fn mult(c: C) -> Self {
        let unit = c.one_like();
        DiffOp::new(vec![c], &unit)
    }

    pub fn identity(unit: &C) -> Self {
        DiffOp::mult(unit.one_like())
    }

    /// `D = d/dz`.
    pub fn d(unit: &C) -> Self {
        DiffOp::new(vec![unit.zero_like(), unit.one_like()], unit)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            self.coeffs.pop();
        }
    }

    pub fn unit(&self) -> &C {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> C {
        self.coeffs.get(j).cloned().unwrap_or_else(|| self.unit.zero_like())
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        DiffOp::new((0..n).map(|j| self.coeff(j).add_ref(&o.coeff(j))).collect(), &self.unit)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        DiffOp::new((0..n).map(|j| self.coeff(j).sub_ref(&o.coeff(j))).collect(), &self.unit)
    }

    pub fn neg(&self) -> Self {
        DiffOp::new(self.coeffs.iter().map(|c| c.negate()).collect(), &self.unit)
    }

    /// `c * self`.
    pub fn scale_left(&self, c: &C) -> Self {
        DiffOp::new(self.coeffs.iter().map(|x| c.mul_ref(x)).collect(), &self.unit)
    }

    /// `D * self = sum (c_j' D^j + c_j D^{j+1})`.
    pub fn d_times(&self) -> Self {
        let n = self.coeffs.len();
        let mut out: Vec<C> = (0..=n).map(|_| self.unit.zero_like()).collect();
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j] = out[j].add_ref(&c.deriv());
            out[j + 1] = out[j + 1].add_ref(c);
        }
        DiffOp::new(out, &self.unit)
    }

    /// `[self, D^1 self, ..., D^k self]`.
    fn d_powers(&self, k: usize) -> Vec<Self> {
        let mut v = vec![self.clone()];
        for _ in 0..k {
            let next = v.last().unwrap().d_times().tidy();
            v.push(next);
        }
        v
    }

    pub fn mul(&self, r: &Self) -> Self {
        if self.is_zero() || r.is_zero() {
            return DiffOp::zero(&self.unit);
        }
        let pw = r.d_powers(self.coeffs.len() - 1);
        let mut acc = DiffOp::zero(&self.unit);
        for (c, p) in self.coeffs.iter().zip(&pw) {
            if !c.is_zero_elem() {
                acc = acc.add(&p.scale_left(c));
            }
        }
        acc.tidy()
    }

    /// Coefficient-wise cancellation.
    pub fn tidy(&self) -> Self {
        DiffOp::new(self.coeffs.iter().map(|c| c.tidy()).collect(), &self.unit)
    }

    /// `(Q, rem)` with `self = Q * r + rem` and `order(rem) < order(r)`.
    pub fn right_divide(&self, r: &Self) -> Result<(Self, Self), OreError> {
        let ro = match r.order() {
            Some(o) if o >= 1 => o,
            _ => return Err(OreError::DivisorOrder),
        };
        let lc = r.leading().unwrap();
        let lc_inv = lc.try_inverse().ok_or_else(|| OreError::LeadingCoefficient(lc.to_string()))?;
        let monic = lc_inv.sub_ref(&lc_inv.one_like()).is_zero_elem();
        let Some(lo) = self.order().filter(|&o| o >= ro) else {
            return Ok((DiffOp::zero(&self.unit), self.clone()));
        };
        let pw = r.d_powers(lo - ro);
        let mut rem = self.clone();
        let mut q: Vec<C> = (0..=lo - ro).map(|_| self.unit.zero_like()).collect();
        for k in (0..=lo - ro).rev() {
            let top = rem.coeff(k + ro);
            if top.is_zero_elem() {
                continue;
            }
            let c = if monic { top } else { top.mul_ref(&lc_inv).tidy() };
            let sub = pw[k].scale_left(&c);
            let mut coeffs: Vec<C> = (0..rem.coeffs.len().max(sub.coeffs.len()))
                .map(|j| rem.coeff(j).sub_ref(&sub.coeff(j)))
                .collect();
            coeffs[k + ro] = self.unit.zero_like();
            rem = DiffOp::new(coeffs, &self.unit).tidy();
            q[k] = c;
        }
        Ok((DiffOp::new(q, &self.unit), rem))
    }

    /// Apply to a function represented in the coefficient ring.
    pub fn apply(&self, f: &C) -> C {
        let mut acc = self.unit.zero_like();
        let mut dj = f.clone();
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                dj = dj.deriv();
            }
            if !c.is_zero_elem() {
                acc = acc.add_ref(&c.mul_ref(&dj));
            }
        }
        acc.tidy()
    }

    pub fn map_coeffs<D: DiffRing>(&self, f: impl Fn(&C) -> D, unit: &D) -> DiffOp<D> {
        DiffOp::new(self.coeffs.iter().map(f).collect(), unit)
    }

    /// Exact equality of all coefficients.
    pub fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl<C: DiffRing> PartialEq for DiffOp<C> {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl<C: DiffRing> fmt::Display for DiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero_elem() {
                continue;
            }
            let cs = c.to_string();
            let d = match j {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{j}"),
            };
            parts.push(match (d.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => d,
                (false, _) => format!("({cs})*{d}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{rint, Rational};
    use crate::oredop::zfrac::Poles;
    use std::sync::Arc;

    type Z = ZFrac<Rational>;

    fn poles() -> Arc<Poles<Rational>> {
        Poles::new("z", vec![rint(0), rint(1)], vec!["0".into(), "1".into()])
    }

    #[test]
    fn canonical_commutator() {
        let p = poles();
        let one = rint(1);
        let u = Z::constant(&p, one.clone());
        let d = DiffOp::d(&u);
        let z = DiffOp::mult(Z::z(&p, &one));
        let dz = d.mul(&z);
        let zd = z.mul(&d);
        assert_eq!(dz.sub(&zd), DiffOp::identity(&u));
        assert_eq!(dz.to_string(), "(z)*D + 1");
        assert!(dz.mul(&DiffOp::zero(&u)).is_zero());
    }

    #[test]
    fn right_divide_self() {
        let p = poles();
        let one = rint(1);
        let u = Z::constant(&p, one.clone());
        let l = DiffOp::new(
            vec![Z::pole_power(&p, 0, 2, rint(3)), Z::pole_power(&p, 1, 1, rint(-1)), Z::z(&p, &one)],
            &u,
        );
        let (q, r) = l.right_divide(&l).unwrap();
        assert_eq!(q, DiffOp::identity(&u));
        assert!(r.is_zero());
        let bad = DiffOp::mult(u.clone());
        assert!(matches!(l.right_divide(&bad), Err(OreError::DivisorOrder)));
    }
}
