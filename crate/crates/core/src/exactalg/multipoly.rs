//! Sparse multivariate polynomials in graded-lexicographic order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::ring::Ring;
use super::scalar::{Rational, Scalar};
use super::ExactError;

/// An ordered list of variable names. Polynomials share it through an `Arc`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
}

impl PolyRing {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            names: names.into_iter().map(Into::into).collect(),
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, ExactError> {
        self.index_of(name)
            .ok_or_else(|| ExactError::UnknownVariable(name.to_string()))
    }
}

/// Exponent vector. The derived order compares total degree first and then
/// exponents left to right, which is graded lex with the first variable
/// largest.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    degree: u32,
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            degree: 0,
            exps: vec![0; nvars].into_boxed_slice(),
        }
    }

    pub fn from_exps(exps: Vec<u32>) -> Monomial {
        Monomial {
            degree: exps.iter().sum(),
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial::from_exps(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Box<[u32]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree - other.degree,
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::from_exps(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut exps = self.exps.to_vec();
        exps[i] = e;
        Monomial::from_exps(exps)
    }
}

#[derive(Clone, Debug)]
pub struct MultiPoly<F> {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}

impl<F: Scalar> MultiPoly<F> {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, F::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: F) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.nvars()), c);
        }
        p
    }

    pub fn from_rational(ring: &Arc<PolyRing>, r: &Rational) -> Self {
        Self::constant(ring, F::from_rational(r))
    }

    pub fn from_i64(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, F::from_i64(n))
    }

    pub fn var(ring: &Arc<PolyRing>, name: &str) -> Result<Self, ExactError> {
        Ok(Self::var_index(ring, ring.require(name)?))
    }

    pub fn var_index(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i, 1), F::one())
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: F) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Vec<u32>, F)>) -> Self {
        let mut p = Self::zero(ring);
        for (e, c) in terms {
            assert_eq!(e.len(), ring.nvars(), "exponent length mismatch");
            p.add_term(Monomial::from_exps(e), c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree == 0)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<F> {
        if self.is_zero() {
            Some(F::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> F {
        self.terms
            .get(&Monomial::one(self.ring.nvars()))
            .cloned()
            .unwrap_or_else(F::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Largest term in graded lex order.
    pub fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[i]).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.exps[i] > 0))
            .collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut p = Self::zero(&self.ring);
        for (m, a) in &self.terms {
            let v = a.clone() * c.clone();
            if !v.is_zero() {
                p.terms.insert(m.clone(), v);
            }
        }
        p
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &F) -> Self {
        let mut p = Self::zero(&self.ring);
        for (k, a) in &self.terms {
            let v = a.clone() * c.clone();
            if !v.is_zero() {
                p.terms.insert(k.mul(m), v);
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        Ring::pow_u(self, e)
    }

    /// Coefficients of `x_i^k`, `k = 0..=deg`, as polynomials free of `x_i`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Self::zero(&self.ring); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            let k = m.exps[i] as usize;
            out[k].terms.insert(m.with_exp(i, 0), c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(ring: &Arc<PolyRing>, i: usize, coeffs: &[Self]) -> Self {
        let mut p = Self::zero(ring);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let e = m.exps[i] + k as u32;
                p.add_term(m.with_exp(i, e), a.clone());
            }
        }
        p
    }

    /// Substitute `x_i := v`.
    pub fn substitute(&self, i: usize, v: &Self) -> Self {
        let cs = self.coeffs_in(i);
        let mut acc = Self::zero(&self.ring);
        for c in cs.iter().rev() {
            acc = &(&acc * v) + c;
        }
        acc
    }

    /// Evaluate at a full point.
    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.ring.nvars());
        let mut pows: Vec<Vec<F>> = vec![vec![F::one()]; point.len()];
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let last = pows[i].last().cloned().unwrap_or_else(F::one);
                    pows[i].push(last * point[i].clone());
                }
                t = t * pows[i][e as usize].clone();
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitute scalar values for some variables, keeping the ring.
    pub fn eval_partial(&self, values: &[(usize, F)]) -> Self {
        let mut p = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            let mut exps = m.exps.to_vec();
            for (i, v) in values {
                let e = exps[*i];
                if e > 0 {
                    for _ in 0..e {
                        t = t * v.clone();
                    }
                    exps[*i] = 0;
                }
            }
            p.add_term(Monomial::from_exps(exps), t);
        }
        p
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> MultiPoly<G> {
        let mut p = MultiPoly::<G>::zero(&self.ring);
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                p.terms.insert(m.clone(), v);
            }
        }
        p
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e > 0 {
                p.add_term(m.with_exp(i, e - 1), c.clone() * F::from_i64(e as i64));
            }
        }
        p
    }

    /// Re-express in `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<Self, ExactError> {
        if same_ring(&self.ring, target) {
            return Ok(MultiPoly {
                ring: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let map: Vec<Option<usize>> = self.ring.names.iter().map(|n| target.index_of(n)).collect();
        let mut p = Self::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.nvars()];
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    let j = map[i].ok_or_else(|| ExactError::UnknownVariable(self.ring.names[i].clone()))?;
                    exps[j] += e;
                }
            }
            p.add_term(Monomial::from_exps(exps), c.clone());
        }
        Ok(p)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => {
                let inv = F::one() / c.clone();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Normalize `g` to be monic in `x_i`; fails when the leading coefficient
    /// in `x_i` is not a nonzero constant.
    pub fn monic_in(&self, i: usize) -> Result<Vec<Self>, ExactError> {
        let mut cs = self.coeffs_in(i);
        if cs.len() < 2 {
            return Err(ExactError::NotMonic {
                var: self.ring.names[i].clone(),
                poly: self.to_string(),
            });
        }
        let lc = cs.last().and_then(|c| c.constant_value());
        let lc = match lc {
            Some(c) if !c.is_zero() => c,
            _ => {
                return Err(ExactError::NotMonic {
                    var: self.ring.names[i].clone(),
                    poly: self.to_string(),
                })
            }
        };
        if !lc.is_one_exact() {
            let inv = F::one() / lc;
            for c in cs.iter_mut() {
                *c = c.scale(&inv);
            }
        }
        Ok(cs)
    }

    /// Remainder of `self` modulo `g`, which must be monic in `var`.
    pub fn reduce_mod(&self, g: &Self, var: &str) -> Result<Self, ExactError> {
        let i = self.ring.require(var)?;
        let gc = g.monic_in(i)?;
        Ok(self.reduce_mod_coeffs(i, &gc))
    }

    /// Remainder modulo a monic generator given by its `x_i`-coefficients.
    pub fn reduce_mod_coeffs(&self, i: usize, g: &[Self]) -> Self {
        let d = g.len() - 1;
        if self.degree_in(i) < d as u32 {
            return self.clone();
        }
        let mut r = self.coeffs_in(i);
        for k in (d..r.len()).rev() {
            let c = std::mem::replace(&mut r[k], Self::zero(&self.ring));
            if c.is_zero() {
                continue;
            }
            for (j, gj) in g.iter().enumerate().take(d) {
                if !gj.is_zero() {
                    r[k - d + j] = &r[k - d + j] - &(&c * gj);
                }
            }
        }
        r.truncate(d);
        Self::from_coeffs_in(&self.ring, i, &r)
    }

    /// Exact quotient `self / d` over the coefficient field, or `None` when
    /// `d` does not divide `self` (only decided for exact coefficients).
    pub fn exact_div_poly(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(F::one() / c)));
        }
        if !F::EXACT {
            return None;
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = Self::zero(&self.ring);
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&m) {
                return None;
            }
            let tm = m.div(&dm);
            let tc = c / dc.clone();
            r = &r - &d.mul_monomial(&tm, &tc);
            r.terms.remove(&m);
            q.terms.insert(tm, tc);
        }
        Some(q)
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.ring.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.ring.names[i], e)),
            }
        }
        parts.join("*")
    }
}

impl<F: Scalar> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, abs) = c.signed_parts();
            let mono = self.fmt_monomial(m);
            let body = if mono.is_empty() {
                abs
            } else if abs == "1" {
                mono
            } else {
                format!("{abs}*{mono}")
            };
            match (k, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl<'a, F: Scalar> Add<&'a MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: &MultiPoly<F>) -> MultiPoly<F> {
        debug_assert!(same_ring(&self.ring, &rhs.ring));
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut p = big.clone();
        for (m, c) in &small.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl<'a, F: Scalar> Sub<&'a MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, rhs: &MultiPoly<F>) -> MultiPoly<F> {
        debug_assert!(same_ring(&self.ring, &rhs.ring));
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c.clone());
        }
        p
    }
}

impl<'a, F: Scalar> Mul<&'a MultiPoly<F>> for &'a MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: &MultiPoly<F>) -> MultiPoly<F> {
        debug_assert!(same_ring(&self.ring, &rhs.ring));
        let mut p = MultiPoly::zero(&self.ring);
        if self.is_zero() || rhs.is_zero() {
            return p;
        }
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                p.add_term(ma.mul(mb), a.clone() * b.clone());
            }
        }
        p
    }
}

impl<F: Scalar> Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Scalar> $tr<MultiPoly<F>> for MultiPoly<F> {
            type Output = MultiPoly<F>;
            fn $m(self, rhs: MultiPoly<F>) -> MultiPoly<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Scalar> Neg for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        -&self
    }
}

impl<F: Scalar> Ring for MultiPoly<F> {
    const EXACT: bool = F::EXACT;

    fn zero_like(&self) -> Self {
        Self::zero(&self.ring)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.ring)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        Self::from_rational(&self.ring, r)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Option<Self> {
        match self.constant_value() {
            Some(c) if !c.is_zero() => Some(Self::constant(&self.ring, F::one() / c)),
            _ => None,
        }
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        self.exact_div_poly(other)
    }
    fn magnitude(&self) -> f64 {
        self.max_coeff()
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&F::from_rational(r))
    }
}
