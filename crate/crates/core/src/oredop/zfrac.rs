//! Rational functions of one variable whose denominators are products of
//! powers of `(z - p_i)` over a fixed, shared list of poles `p_i`.
//!
//! Every operator coefficient appearing in the Heun / hypergeometric
//! calculations has this shape (poles at 0, 1 and the extra singular points),
//! so additions and products never need a polynomial gcd in `z`.

use std::fmt;
use std::sync::Arc;

use crate::exactalg::{ExactError, Rational, Ring};

/// The fixed pole list with display labels.
#[derive(Debug)]
pub struct Poles<R> {
    var: String,
    values: Vec<R>,
    labels: Vec<String>,
}

impl<R: Ring> Poles<R> {
    pub fn new(var: &str, values: Vec<R>, labels: Vec<String>) -> Arc<Self> {
        assert_eq!(values.len(), labels.len());
        Arc::new(Poles { var: var.to_string(), values, labels })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the pole equal to `v`, if any.
    pub fn find(&self, v: &R) -> Option<usize> {
        self.values.iter().position(|p| p.sub_ref(v).is_zero_elem())
    }

    fn factor_label(&self, i: usize) -> String {
        let l = &self.labels[i];
        if l == "0" {
            self.var.clone()
        } else if let Some(rest) = l.strip_prefix('-') {
            format!("({} + {})", self.var, rest)
        } else {
            format!("({} - {})", self.var, l)
        }
    }
}

// Dense polynomial helpers, coefficients low degree first.

fn trim<R: Ring>(p: &mut Vec<R>) {
    while p.last().is_some_and(|c| c.is_zero_elem()) {
        p.pop();
    }
}

pub(crate) fn padd<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut v = long.to_vec();
    for (i, c) in short.iter().enumerate() {
        v[i] = v[i].add_ref(c);
    }
    trim(&mut v);
    v
}

pub(crate) fn psub<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let mut v = a.to_vec();
    for (i, c) in b.iter().enumerate() {
        if i < v.len() {
            v[i] = v[i].sub_ref(c);
        } else {
            v.push(c.negate());
        }
    }
    trim(&mut v);
    v
}

pub(crate) fn pmul<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let zero = a[0].zero_like();
    let mut v = vec![zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero_elem() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero_elem() {
                v[i + j] = v[i + j].add_ref(&x.mul_ref(y));
            }
        }
    }
    trim(&mut v);
    v
}

pub(crate) fn pscale<R: Ring>(a: &[R], c: &R) -> Vec<R> {
    let mut v: Vec<R> = a.iter().map(|x| x.mul_ref(c)).collect();
    trim(&mut v);
    v
}

/// Multiply by `(z - p)`.
pub(crate) fn pmul_linear<R: Ring>(a: &[R], p: &R) -> Vec<R> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut v = Vec::with_capacity(a.len() + 1);
    v.push(a[0].mul_ref(p).negate());
    for i in 1..a.len() {
        v.push(a[i - 1].sub_ref(&a[i].mul_ref(p)));
    }
    v.push(a[a.len() - 1].clone());
    trim(&mut v);
    v
}

pub(crate) fn peval<R: Ring>(a: &[R], x: &R) -> R {
    let mut acc = x.zero_like();
    for c in a.iter().rev() {
        acc = acc.mul_ref(x).add_ref(c);
    }
    acc
}

/// Divide by `(z - p)`, returning quotient and remainder `a(p)`.
pub(crate) fn pdiv_linear<R: Ring>(a: &[R], p: &R) -> (Vec<R>, R) {
    if a.is_empty() {
        return (Vec::new(), p.zero_like());
    }
    let n = a.len();
    let mut q = vec![p.zero_like(); n - 1];
    let mut acc = a[n - 1].clone();
    for i in (0..n - 1).rev() {
        q[i] = acc.clone();
        acc = a[i].add_ref(&acc.mul_ref(p));
    }
    trim(&mut q);
    (q, acc)
}

pub(crate) fn pderiv<R: Ring>(a: &[R]) -> Vec<R> {
    let mut v: Vec<R> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale_rational(&Rational::from_integer((i as i64).into())))
        .collect();
    trim(&mut v);
    v
}

/// Coefficients of `a` in powers of `(z - p)`.
pub(crate) fn ptaylor_shift<R: Ring>(a: &[R], p: &R) -> Vec<R> {
    let mut out = Vec::with_capacity(a.len());
    let mut cur = a.to_vec();
    while !cur.is_empty() {
        let (q, r) = pdiv_linear(&cur, p);
        out.push(r);
        cur = q;
    }
    trim(&mut out);
    out
}

/// `num(z) / prod (z - p_i)^{den_i}`.
#[derive(Clone, Debug)]
pub struct ZFrac<R> {
    poles: Arc<Poles<R>>,
    num: Vec<R>,
    den: Vec<u32>,
    /// A representative ring element, used to build zeros and constants.
    unit: R,
}

impl<R: Ring> ZFrac<R> {
    pub fn zero(poles: &Arc<Poles<R>>, unit: &R) -> Self {
        ZFrac { poles: poles.clone(), num: Vec::new(), den: vec![0; poles.len()], unit: unit.one_like() }
    }

    pub fn constant(poles: &Arc<Poles<R>>, c: R) -> Self {
        Self::poly(poles, vec![c.clone()], &c)
    }

    pub fn poly(poles: &Arc<Poles<R>>, mut coeffs: Vec<R>, unit: &R) -> Self {
        trim(&mut coeffs);
        ZFrac { poles: poles.clone(), num: coeffs, den: vec![0; poles.len()], unit: unit.one_like() }
    }

    /// The variable `z`.
    pub fn z(poles: &Arc<Poles<R>>, unit: &R) -> Self {
        Self::poly(poles, vec![unit.zero_like(), unit.one_like()], unit)
    }

    /// `c / (z - p_i)^k`.
    pub fn pole_power(poles: &Arc<Poles<R>>, i: usize, k: u32, c: R) -> Self {
        let mut den = vec![0; poles.len()];
        den[i] = k;
        let unit = c.one_like();
        let mut f = ZFrac { poles: poles.clone(), num: vec![c], den, unit };
        trim(&mut f.num);
        f
    }

    /// `num / prod (z - p_i)^{den_i}` without cancellation.
    pub fn from_parts(poles: &Arc<Poles<R>>, num: Vec<R>, den: Vec<u32>, unit: &R) -> Self {
        assert_eq!(den.len(), poles.len());
        let mut f = ZFrac { poles: poles.clone(), num, den, unit: unit.one_like() };
        trim(&mut f.num);
        if f.num.is_empty() {
            f.den.iter_mut().for_each(|d| *d = 0);
        }
        f
    }

    pub fn poles(&self) -> &Arc<Poles<R>> {
        &self.poles
    }

    pub fn numer(&self) -> &[R] {
        &self.num
    }

    pub fn den_exponents(&self) -> &[u32] {
        &self.den
    }

    pub fn unit(&self) -> &R {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.iter().all(|&d| d == 0)
    }

    /// Cancel `(z - p_i)` factors shared by numerator and denominator.
    /// Only meaningful for exact rings; a no-op otherwise.
    pub fn simplify(&self) -> Self {
        if !R::EXACT || self.num.is_empty() {
            let mut f = self.clone();
            if f.num.is_empty() {
                f.den.iter_mut().for_each(|d| *d = 0);
            }
            return f;
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for i in 0..den.len() {
            let p = &self.poles.values[i];
            while den[i] > 0 {
                let (q, r) = pdiv_linear(&num, p);
                if !r.is_zero_elem() {
                    break;
                }
                num = q;
                den[i] -= 1;
            }
        }
        ZFrac { poles: self.poles.clone(), num, den, unit: self.unit.clone() }
    }

    fn denominator_poly(&self, exps: &[u32]) -> Vec<R> {
        let mut d = vec![self.unit.one_like()];
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                d = pmul_linear(&d, &self.poles.values[i]);
            }
        }
        d
    }

    /// Denominator as a dense polynomial.
    pub fn denom_poly(&self) -> Vec<R> {
        self.denominator_poly(&self.den)
    }

    fn lift_to(&self, den: &[u32]) -> Vec<R> {
        let extra: Vec<u32> = den.iter().zip(&self.den).map(|(a, b)| a - b).collect();
        if extra.iter().all(|&e| e == 0) {
            self.num.clone()
        } else {
            pmul(&self.num, &self.denominator_poly(&extra))
        }
    }

    /// Numerator over the given common denominator (which must dominate).
    pub fn numer_over(&self, den: &[u32]) -> Vec<R> {
        self.lift_to(den)
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let den: Vec<u32> = self.den.iter().zip(&o.den).map(|(a, b)| *a.max(b)).collect();
        let num = padd(&self.lift_to(&den), &o.lift_to(&den));
        Self::from_parts(&self.poles, num, den, &self.unit)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        ZFrac {
            poles: self.poles.clone(),
            num: self.num.iter().map(|c| c.negate()).collect(),
            den: self.den.clone(),
            unit: self.unit.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.poles, &self.unit);
        }
        let den = self.den.iter().zip(&o.den).map(|(a, b)| a + b).collect();
        Self::from_parts(&self.poles, pmul(&self.num, &o.num), den, &self.unit)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_parts(&self.poles, pscale(&self.num, c), self.den.clone(), &self.unit)
    }

    /// Divide by `prod (z - p_i)^{k_i}`.
    pub fn div_poles(&self, k: &[u32]) -> Self {
        let den = self.den.iter().zip(k).map(|(a, b)| a + b).collect();
        Self::from_parts(&self.poles, self.num.clone(), den, &self.unit)
    }

    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let active: Vec<usize> = (0..self.den.len()).filter(|&i| self.den[i] > 0).collect();
        if active.is_empty() {
            return Self::from_parts(&self.poles, pderiv(&self.num), self.den.clone(), &self.unit);
        }
        // d/dz [N / prod (z-p_i)^{k_i}]
        //   = [N' * prod_i (z-p_i) - N * sum_i k_i prod_{j != i} (z-p_j)] / prod (z-p_i)^{k_i+1}
        let mut prod_all = vec![self.unit.one_like()];
        for &i in &active {
            prod_all = pmul_linear(&prod_all, &self.poles.values[i]);
        }
        let mut sum_part: Vec<R> = Vec::new();
        for &i in &active {
            let mut pr = vec![self.unit.from_i64_like(self.den[i] as i64)];
            for &j in &active {
                if j != i {
                    pr = pmul_linear(&pr, &self.poles.values[j]);
                }
            }
            sum_part = padd(&sum_part, &pr);
        }
        let num = psub(&pmul(&pderiv(&self.num), &prod_all), &pmul(&self.num, &sum_part));
        let den = self
            .den
            .iter()
            .map(|&d| if d > 0 { d + 1 } else { 0 })
            .collect();
        Self::from_parts(&self.poles, num, den, &self.unit)
    }

    pub fn eval(&self, x: &R) -> Result<R, ExactError> {
        let d = peval(&self.denom_poly(), x);
        peval(&self.num, x).exact_div(&d).ok_or(ExactError::DivisionByZero)
    }

    /// Multiplicative inverse when the numerator is an invertible constant
    /// times pole factors.
    pub fn try_inverse(&self) -> Option<Self> {
        let s = self.simplify();
        let mut num = s.num.clone();
        let mut ex = vec![0; self.den.len()];
        if R::EXACT {
            for (i, p) in self.poles.values.iter().enumerate() {
                while num.len() > 1 {
                    let (q, r) = pdiv_linear(&num, p);
                    if !r.is_zero_elem() {
                        break;
                    }
                    num = q;
                    ex[i] += 1;
                }
            }
        }
        if num.len() != 1 {
            return None;
        }
        let c = num[0].try_inverse()?;
        let num = pscale(&s.denom_poly(), &c);
        Some(Self::from_parts(&self.poles, num, ex, &self.unit))
    }

    /// Taylor coefficients at a regular point `x`, up to `(z-x)^order`.
    pub fn taylor_at(&self, x: &R, order: usize) -> Result<Vec<R>, ExactError> {
        let n = ptaylor_shift(&self.num, x);
        let d = ptaylor_shift(&self.denom_poly(), x);
        series_div(&n, &d, order)
    }

    /// Laurent expansion at the pole `p_j`: returns `(v, c)` with
    /// `self = sum_k c_k (z - p_j)^{v + k}`, `k = 0..=order`.
    pub fn laurent_at_pole(&self, j: usize, order: usize) -> Result<(i64, Vec<R>), ExactError> {
        let p = &self.poles.values[j];
        let mut den = self.den.clone();
        let v = -(den[j] as i64);
        den[j] = 0;
        let n = ptaylor_shift(&self.num, p);
        let d = ptaylor_shift(&self.denominator_poly(&den), p);
        Ok((v, series_div(&n, &d, order)?))
    }
}

/// Power-series quotient `n / d` up to degree `order`; `d[0]` must be invertible.
pub(crate) fn series_div<R: Ring>(n: &[R], d: &[R], order: usize) -> Result<Vec<R>, ExactError> {
    let d0 = d.first().ok_or(ExactError::DivisionByZero)?;
    let inv = d0.try_inverse().ok_or(ExactError::NotDivisible)?;
    let zero = d0.zero_like();
    let mut out: Vec<R> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = n.get(k).cloned().unwrap_or_else(|| zero.clone());
        for i in 1..=k.min(d.len().saturating_sub(1)) {
            acc = acc.sub_ref(&d[i].mul_ref(&out[k - i]));
        }
        out.push(acc.mul_ref(&inv));
    }
    Ok(out)
}

impl<R: Ring> fmt::Display for ZFrac<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.simplify();
        let num = fmt_dense(&s.num, &self.poles.var);
        let mut den = Vec::new();
        for (i, &e) in s.den.iter().enumerate() {
            match e {
                0 => {}
                1 => den.push(self.poles.factor_label(i)),
                _ => den.push(format!("{}^{}", self.poles.factor_label(i), e)),
            }
        }
        let den = match den.len() {
            0 => return write!(f, "{num}"),
            1 => den.swap_remove(0),
            _ => format!("({})", den.join("*")),
        };
        if s.num.len() > 1 || num.contains(' ') {
            write!(f, "({num})/{den}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

/// Print a dense polynomial in `var`, highest degree first.
pub fn fmt_dense<R: Ring>(p: &[R], var: &str) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero_elem() {
            continue;
        }
        let cs = c.display_elem();
        let simple = !cs.contains(' ') || (cs.starts_with('(') && cs.ends_with(')'));
        let cs = if simple { cs } else { format!("({cs})") };
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        parts.push(match (mono.is_empty(), cs.as_str()) {
            (true, _) => cs,
            (false, "1") => mono,
            (false, "-1") => format!("-{mono}"),
            (false, _) => format!("{cs}*{mono}"),
        });
    }
    parts.join(" + ").replace("+ -", "- ")
}

impl<R: Ring> PartialEq for ZFrac<R> {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl<R: Ring> Ring for ZFrac<R> {
    const EXACT: bool = R::EXACT;

    fn zero_like(&self) -> Self {
        Self::zero(&self.poles, &self.unit)
    }
    fn one_like(&self) -> Self {
        Self::constant(&self.poles, self.unit.one_like())
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        Self::constant(&self.poles, self.unit.from_rational_like(r))
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn try_inverse(&self) -> Option<Self> {
        ZFrac::try_inverse(self)
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        o.try_inverse().map(|inv| self.mul(&inv))
    }
    fn magnitude(&self) -> f64 {
        self.num.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        ZFrac::from_parts(
            &self.poles,
            self.num.iter().map(|c| c.scale_rational(r)).collect(),
            self.den.clone(),
            &self.unit,
        )
    }
}
