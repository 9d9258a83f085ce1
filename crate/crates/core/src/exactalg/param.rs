//! Parameter rings: polynomials in named parameters, localized at a fixed
//! list of linear "unit" factors and optionally taken modulo one generator
//! that is monic in a distinguished variable.
//!
//! This is the coefficient ring of every symbolic computation, e.g.
//! `Q[alpha, beta, gamma, t, q][1/t, 1/(t-1)] / (P(q))`.

use std::fmt;
use std::sync::Arc;

use super::multipoly::{MultiPoly, PolyRing};
use super::ring::Ring;
use super::scalar::{Rational, Scalar};
use super::ExactError;

#[derive(Debug)]
pub struct ParamRing<F> {
    vars: Arc<PolyRing>,
    units: Vec<MultiPoly<F>>,
    /// Index of the modulus variable and the monic generator's coefficients in it.
    modulus: Option<(usize, Vec<MultiPoly<F>>)>,
}

impl<F: Scalar> ParamRing<F> {
    pub fn new(vars: Arc<PolyRing>) -> Arc<Self> {
        Arc::new(ParamRing { vars, units: Vec::new(), modulus: None })
    }

    /// A ring in which each of `units` is invertible. Units must involve no
    /// variable of the modulus.
    pub fn with_units(vars: Arc<PolyRing>, units: Vec<MultiPoly<F>>) -> Arc<Self> {
        Arc::new(ParamRing { vars, units, modulus: None })
    }

    /// The same ring taken modulo `g`, monic in `var`.
    pub fn with_modulus(self: &Arc<Self>, g: &MultiPoly<F>, var: &str) -> Result<Arc<Self>, ExactError> {
        let i = self.vars.require(var)?;
        let gc = g.embed(&self.vars)?.monic_in(i)?;
        if self.units.iter().any(|u| u.degree_in(i) > 0) {
            return Err(ExactError::NotMonic { var: var.to_string(), poly: "unit involving the modulus variable".into() });
        }
        Ok(Arc::new(ParamRing { vars: self.vars.clone(), units: self.units.clone(), modulus: Some((i, gc)) }))
    }

    /// The same ring with extra variables appended.
    pub fn extend(self: &Arc<Self>, extra: &[String]) -> Result<Arc<Self>, ExactError> {
        let names: Vec<String> = self.vars.names().iter().chain(extra).cloned().collect();
        let vars = PolyRing::new(names);
        let units = self.units.iter().map(|u| u.embed(&vars)).collect::<Result<Vec<_>, _>>()?;
        let modulus = match &self.modulus {
            Some((i, g)) => Some((*i, g.iter().map(|c| c.embed(&vars)).collect::<Result<Vec<_>, _>>()?)),
            None => None,
        };
        Ok(Arc::new(ParamRing { vars, units, modulus }))
    }

    /// The ring with the modulus dropped.
    pub fn without_modulus(self: &Arc<Self>) -> Arc<Self> {
        Arc::new(ParamRing { vars: self.vars.clone(), units: self.units.clone(), modulus: None })
    }

    pub fn vars(&self) -> &Arc<PolyRing> {
        &self.vars
    }

    pub fn units(&self) -> &[MultiPoly<F>] {
        &self.units
    }

    pub fn modulus(&self) -> Option<(usize, &[MultiPoly<F>])> {
        self.modulus.as_ref().map(|(i, g)| (*i, g.as_slice()))
    }

    pub fn has_modulus(&self) -> bool {
        self.modulus.is_some()
    }

    pub fn poly(self: &Arc<Self>, p: MultiPoly<F>) -> ParamElem<F> {
        ParamElem::normalized(self, p, vec![0; self.units.len()])
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<ParamElem<F>, ExactError> {
        Ok(self.poly(MultiPoly::var(&self.vars, name)?))
    }

    pub fn constant(self: &Arc<Self>, c: F) -> ParamElem<F> {
        self.poly(MultiPoly::constant(&self.vars, c))
    }

    pub fn rational(self: &Arc<Self>, r: &Rational) -> ParamElem<F> {
        self.constant(F::from_rational(r))
    }

    pub fn int(self: &Arc<Self>, n: i64) -> ParamElem<F> {
        self.constant(F::from_i64(n))
    }

    pub fn zero(self: &Arc<Self>) -> ParamElem<F> {
        self.int(0)
    }

    pub fn one(self: &Arc<Self>) -> ParamElem<F> {
        self.int(1)
    }

    /// The element `1 / units[k]`.
    pub fn unit_inverse(self: &Arc<Self>, k: usize) -> ParamElem<F> {
        let mut den = vec![0; self.units.len()];
        den[k] = 1;
        ParamElem::normalized(self, MultiPoly::one(&self.vars), den)
    }
}

/// `num / prod(units[k]^den[k])`.
#[derive(Clone, Debug)]
pub struct ParamElem<F> {
    ring: Arc<ParamRing<F>>,
    num: MultiPoly<F>,
    den: Vec<u32>,
}

impl<F: Scalar> ParamElem<F> {
    fn normalized(ring: &Arc<ParamRing<F>>, mut num: MultiPoly<F>, mut den: Vec<u32>) -> Self {
        if let Some((i, g)) = &ring.modulus {
            num = num.reduce_mod_coeffs(*i, g);
        }
        if num.is_zero() {
            den.iter_mut().for_each(|d| *d = 0);
        } else if F::EXACT {
            for (k, u) in ring.units.iter().enumerate() {
                while den[k] > 0 {
                    match num.exact_div_poly(u) {
                        Some(q) => {
                            num = q;
                            den[k] -= 1;
                        }
                        None => break,
                    }
                }
            }
        }
        ParamElem { ring: ring.clone(), num, den }
    }

    /// `num / prod(units^den)`, normalized.
    pub fn from_parts(ring: &Arc<ParamRing<F>>, num: MultiPoly<F>, den: Vec<u32>) -> Self {
        assert_eq!(den.len(), ring.units.len());
        ParamElem::normalized(ring, num, den)
    }

    pub fn ring(&self) -> &Arc<ParamRing<F>> {
        &self.ring
    }

    pub fn numer(&self) -> &MultiPoly<F> {
        &self.num
    }

    pub fn den_exponents(&self) -> &[u32] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The denominator as a polynomial.
    pub fn den_poly(&self) -> MultiPoly<F> {
        let mut d = MultiPoly::one(self.ring.vars());
        for (u, &e) in self.ring.units.iter().zip(&self.den) {
            if e > 0 {
                d = &d * &u.pow(e);
            }
        }
        d
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.iter().all(|&e| e == 0)
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Move into another ring over the same variables and units (e.g. from
    /// the plain ring into its quotient).
    pub fn rehome(&self, ring: &Arc<ParamRing<F>>) -> Result<Self, ExactError> {
        if ring.units.len() != self.ring.units.len() {
            return Err(ExactError::RingMismatch);
        }
        for (a, b) in self.ring.units.iter().zip(&ring.units) {
            if a.embed(ring.vars()).ok().as_ref() != Some(b) {
                return Err(ExactError::RingMismatch);
            }
        }
        let num = self.num.embed(ring.vars())?;
        Ok(ParamElem::normalized(ring, num, self.den.clone()))
    }

    pub fn eval(&self, point: &[F]) -> Result<F, ExactError> {
        let d = self.den_poly().eval(point);
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Substitute values for some variables, keeping the ring shape.
    pub fn eval_partial(&self, values: &[(usize, F)]) -> Result<Self, ExactError> {
        let num = self.num.eval_partial(values);
        let mut den = self.den.clone();
        let mut scale = F::one();
        for (k, u) in self.ring.units.iter().enumerate() {
            let uv = u.eval_partial(values);
            if den[k] > 0 && uv.is_constant() {
                let c = uv.constant_term();
                if c.is_zero() {
                    return Err(ExactError::DivisionByZero);
                }
                for _ in 0..den[k] {
                    scale = scale * c.clone();
                }
                den[k] = 0;
            }
        }
        Ok(ParamElem::normalized(&self.ring, num.scale(&(F::one() / scale)), den))
    }

    pub fn substitute(&self, var: usize, value: &MultiPoly<F>) -> Self {
        ParamElem::normalized(&self.ring, self.num.substitute(var, value), self.den.clone())
    }

    fn common(&self, o: &Self) -> (MultiPoly<F>, MultiPoly<F>, Vec<u32>) {
        let mut a = self.num.clone();
        let mut b = o.num.clone();
        let mut den = Vec::with_capacity(self.den.len());
        for (k, u) in self.ring.units.iter().enumerate() {
            let (da, db) = (self.den[k], o.den[k]);
            let m = da.max(db);
            if m > da {
                a = &a * &u.pow(m - da);
            }
            if m > db {
                b = &b * &u.pow(m - db);
            }
            den.push(m);
        }
        (a, b, den)
    }

    /// Strip unit factors from the numerator; returns `(core, exponents)`
    /// with `num = core * prod(units^exponents)`.
    fn split_units(&self) -> (MultiPoly<F>, Vec<u32>) {
        let mut core = self.num.clone();
        let mut ex = vec![0; self.ring.units.len()];
        if F::EXACT {
            for (k, u) in self.ring.units.iter().enumerate() {
                while let Some(q) = core.exact_div_poly(u) {
                    if core.is_constant() {
                        break;
                    }
                    core = q;
                    ex[k] += 1;
                }
            }
        }
        (core, ex)
    }
}

impl<F: Scalar> PartialEq for ParamElem<F> {
    fn eq(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }
}

impl<F: Scalar> fmt::Display for ParamElem<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        let mut parts = Vec::new();
        for (u, &e) in self.ring.units.iter().zip(&self.den) {
            let s = if u.nterms() > 1 { format!("({u})") } else { u.to_string() };
            match e {
                0 => {}
                1 => parts.push(s),
                _ => parts.push(format!("{s}^{e}")),
            }
        }
        let num = if self.num.nterms() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        write!(f, "{}/({})", num, parts.join("*"))
    }
}

impl<F: Scalar> Ring for ParamElem<F> {
    const EXACT: bool = F::EXACT;

    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        self.ring.rational(r)
    }
    fn is_zero_elem(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        if self.den == o.den {
            return ParamElem::normalized(&self.ring, &self.num + &o.num, self.den.clone());
        }
        let (a, b, den) = self.common(o);
        ParamElem::normalized(&self.ring, &a + &b, den)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        if self.den == o.den {
            return ParamElem::normalized(&self.ring, &self.num - &o.num, self.den.clone());
        }
        let (a, b, den) = self.common(o);
        ParamElem::normalized(&self.ring, &a - &b, den)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return self.ring.zero();
        }
        let den = self.den.iter().zip(&o.den).map(|(a, b)| a + b).collect();
        ParamElem::normalized(&self.ring, &self.num * &o.num, den)
    }
    fn negate(&self) -> Self {
        ParamElem { ring: self.ring.clone(), num: -&self.num, den: self.den.clone() }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let (core, ex) = self.split_units();
        let c = core.constant_value()?;
        let num = self.den_poly().scale(&(F::one() / c));
        Some(ParamElem::normalized(&self.ring, num, ex))
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        if let Some(inv) = o.try_inverse() {
            return Some(self.mul_ref(&inv));
        }
        if self.ring.modulus.is_some() || o.num.is_zero() {
            return None;
        }
        // o.num = core * units^ex, so self/o = self.num * den(o) / (core * units^ex * den(self)).
        let (core, ex) = o.split_units();
        let scaled = &self.num * &o.den_poly();
        let q = scaled.exact_div_poly(&core)?;
        let den = self.den.iter().zip(&ex).map(|(a, b)| a + b).collect();
        Some(ParamElem::normalized(&self.ring, q, den))
    }
    fn magnitude(&self) -> f64 {
        self.num.max_coeff()
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        ParamElem::normalized(&self.ring, self.num.scale(&F::from_rational(r)), self.den.clone())
    }
}
