//! Dense univariate polynomials: gcd, divisibility, rational and complex roots.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::multipoly::{Monomial, MultiPoly, PolyRing};
use super::scalar::{rational_to_f64, Rational, Scalar};
use super::ExactError;

/// Coefficients low degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `x - a`.
    pub fn linear_root(a: F) -> Self {
        Self::new(vec![-a, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(F::zero);
                let b = o.coeffs.get(i).cloned().unwrap_or_else(F::zero);
                a + b
            })
            .collect();
        Self::new(v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(c) => self.scale(&(F::one() / c.clone())),
            None => self.clone(),
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), ExactError> {
        let dl = d.leading().cloned().ok_or(ExactError::DivisionByZero)?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k].clone() / dl.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k - dd + j] = r[k - dd + j].clone() - c.clone() * dj.clone();
            }
            r[k] = F::zero();
            q[k - dd] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, ExactError> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic gcd (exact coefficients only).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn divides(&self, o: &Self) -> bool {
        match self.degree() {
            None => o.is_zero(),
            Some(_) => o.rem(self).map(|r| r.is_zero()).unwrap_or(false),
        }
    }

    /// `self / gcd(self, self')`.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd is nonzero").0.monic()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> UPoly<G> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Convert a polynomial that involves only `x_i`.
    pub fn from_multi(p: &MultiPoly<F>, i: usize) -> Result<Self, ExactError> {
        if p.used_vars().iter().any(|&j| j != i) {
            return Err(ExactError::NotUnivariate(p.to_string()));
        }
        let cs = p.coeffs_in(i);
        Ok(Self::new(cs.iter().map(|c| c.constant_term()).collect()))
    }

    pub fn to_multi(&self, ring: &Arc<PolyRing>, i: usize) -> MultiPoly<F> {
        let mut p = MultiPoly::zero(ring);
        for (k, c) in self.coeffs.iter().enumerate() {
            p.add_term(Monomial::var(ring.nvars(), i, k as u32), c.clone());
        }
        p
    }
}

impl<F: Scalar> fmt::Display for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = PolyRing::new(["x"]);
        write!(f, "{}", self.to_multi(&ring, 0))
    }
}

impl UPoly<Rational> {
    /// All rational roots, each listed once, in increasing order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut p = self.clone();
        // Factor out x^k.
        let lead_zeros = p.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            roots.push(Rational::zero());
            p = UPoly::new(p.coeffs[lead_zeros..].to_vec());
        }
        // Clear denominators to an integer polynomial.
        let l = p
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let (Some(a0s), Some(ans)) = (a0.to_u64(), an.to_u64()) else {
            return roots;
        };
        if a0s > 1_000_000 || ans > 1_000_000 {
            // Divisor enumeration is only attempted for small coefficients.
            return roots;
        }
        let divs = |n: u64| (1..=n).filter(move |d| n % d == 0).collect::<Vec<_>>();
        let dn = divs(ans);
        for num in divs(a0s) {
            for den in &dn {
                for s in [1i64, -1] {
                    let r = Rational::new(BigInt::from(num) * s, BigInt::from(*den));
                    if !roots.contains(&r) && p.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    pub fn to_c64(&self) -> UPoly<Complex64> {
        self.map(|c| Complex64::new(rational_to_f64(c), 0.0))
    }
}

impl UPoly<Complex64> {
    /// All complex roots by Aberth–Ehrlich iteration.
    pub fn roots(&self) -> Vec<Complex64> {
        let Some(n) = self.degree() else { return Vec::new() };
        if n == 0 {
            return Vec::new();
        }
        let p = self.monic();
        let dp = p.derivative();
        let radius = 1.0
            + p.coeffs[..n]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
                Complex64::from_polar(radius * 0.7, th)
            })
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let pz = p.eval(&z[i]);
                let dz = dp.eval(&z[i]);
                if pz.norm() == 0.0 {
                    continue;
                }
                let ratio = pz / dz;
                let s: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| Complex64::one() / (z[i] - z[j]))
                    .sum();
                let w = ratio / (Complex64::one() - ratio * s);
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
            if moved < 1e-15 {
                break;
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::{rat, rint};

    fn up(v: &[i64]) -> UPoly<Rational> {
        UPoly::new(v.iter().map(|&x| rint(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let f = up(&[-1, 0, 1]); // x^2-1
        let g = up(&[1, 1]);
        let (q, r) = f.div_rem(&g).unwrap();
        assert_eq!(q, up(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&up(&[1, 2, 1])), g);
        assert!(g.divides(&f));
        assert_eq!(up(&[0, 0, 1, 1]).squarefree_part(), up(&[0, 1, 1]));
    }

    #[test]
    fn rational_roots_found() {
        // (2x-1)(x+3)x
        let p = up(&[0, -3, 5, 2]);
        assert_eq!(p.rational_roots(), vec![rint(-3), rint(0), rat(1, 2)]);
    }

    #[test]
    fn complex_roots_of_cubic() {
        let p = up(&[6, -11, 6, -1]).to_c64();
        let mut r: Vec<f64> = p.roots().iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-12);
        }
    }
}
