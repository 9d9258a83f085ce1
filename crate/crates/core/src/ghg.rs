//! Generalized hypergeometric operators and series.
//!
//! The operator is expanded from the Euler form
//! `D (θ + b_1 - 1)...(θ + b_q - 1) - (θ + a_1)...(θ + a_p)`, `θ = z D`,
//! and then divided by its leading coefficient `z^q (1 - z)`.

use std::sync::Arc;

use thiserror::Error;

use crate::exactalg::scalar::{rational_as_i64, rint};
use crate::exactalg::{ExactError, Rational, Ring, Scalar};
use crate::oredop::zfrac::pmul_linear;
use crate::oredop::{DiffOp, OreError, Poles, ZFrac};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GhgError {
    #[error("{p}F{q} is not Fuchsian; need p = q + 1")]
    NotFuchsian { p: usize, q: usize },
    #[error("lower parameter {index} makes the Pochhammer symbol vanish at n = {n}")]
    LowerPochhammerZero { index: usize, n: usize },
    #[error("e1 e2 must be nonzero")]
    ZeroProduct,
    #[error("pole list lacks {0}")]
    MissingPole(&'static str),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Ore(#[from] OreError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GHGParams<R> {
    pub upper: Vec<R>,
    pub lower: Vec<R>,
}

impl<R: Ring> GHGParams<R> {
    pub fn new(upper: Vec<R>, lower: Vec<R>) -> Self {
        GHGParams { upper, lower }
    }
}

/// Poles `[0, 1]` in `z`.
pub fn ghg_poles<R: Ring>(unit: &R) -> Arc<Poles<R>> {
    Poles::new("z", vec![unit.zero_like(), unit.one_like()], vec!["0".into(), "1".into()])
}

/// Coefficients (low degree first) of `prod (x + s_i)`.
pub fn shifted_product<R: Ring>(shifts: &[R], unit: &R) -> Vec<R> {
    let mut p = vec![unit.one_like()];
    for s in shifts {
        p = pmul_linear(&p, &s.negate());
    }
    p
}

/// Coefficients of `prod_i (x + c + e_i)` from the elementary symmetric
/// functions `esym = [e_1 + .. , .., e_1 ... e_N]`.
pub fn esym_product<R: Ring>(esym: &[R], c: &R, unit: &R) -> Vec<R> {
    let n = esym.len();
    // In y = x + c: coefficient of y^j is esym_{N-j}, esym_0 = 1.
    let mut acc: Vec<R> = Vec::new();
    for j in (0..=n).rev() {
        let cj = if j == n { unit.one_like() } else { esym[n - j - 1].clone() };
        acc = pmul_linear(&acc, &c.negate());
        if acc.is_empty() {
            acc.push(cj);
        } else {
            acc[0] = acc[0].add_ref(&cj);
        }
    }
    acc
}

/// `sum_j c_j θ^j`.
fn theta_poly<R: Ring>(coeffs: &[R], poles: &Arc<Poles<R>>, unit: &R) -> DiffOp<ZFrac<R>> {
    let u = ZFrac::constant(poles, unit.one_like());
    let theta = DiffOp::mult(ZFrac::z(poles, unit)).mul(&DiffOp::d(&u));
    let mut pw = DiffOp::identity(&u);
    let mut acc = DiffOp::zero(&u);
    for (j, c) in coeffs.iter().enumerate() {
        if j > 0 {
            pw = theta.mul(&pw);
        }
        if !c.is_zero_elem() {
            acc = acc.add(&pw.scale_left(&ZFrac::constant(poles, c.clone())));
        }
    }
    acc
}

/// Monic form of `D V(θ) - U(θ)` for polynomials `U`, `V` in `θ`.
pub fn euler_operator<R: Ring>(upper: &[R], lower: &[R], poles: &Arc<Poles<R>>, unit: &R) -> Result<DiffOp<ZFrac<R>>, GhgError> {
    if poles.find(&unit.zero_like()).is_none() {
        return Err(GhgError::MissingPole("0"));
    }
    if poles.find(&unit.one_like()).is_none() {
        return Err(GhgError::MissingPole("1"));
    }
    let u = ZFrac::constant(poles, unit.one_like());
    let op = DiffOp::d(&u).mul(&theta_poly(lower, poles, unit)).sub(&theta_poly(upper, poles, unit));
    let lc = op.leading().expect("nonzero operator");
    let inv = lc.try_inverse().ok_or_else(|| OreError::LeadingCoefficient(lc.to_string()))?;
    Ok(op.scale_left(&inv).tidy())
}

/// The monic operator `L_{a; b}` over a pole list containing 0 and 1.
pub fn ghg_operator_on<R: Ring>(g: &GHGParams<R>, poles: &Arc<Poles<R>>, unit: &R) -> Result<DiffOp<ZFrac<R>>, GhgError> {
    if g.upper.len() != g.lower.len() + 1 {
        return Err(GhgError::NotFuchsian { p: g.upper.len(), q: g.lower.len() });
    }
    let lower_shift: Vec<R> = g.lower.iter().map(|b| b.sub_ref(&unit.one_like())).collect();
    euler_operator(&shifted_product(&g.upper, unit), &shifted_product(&lower_shift, unit), poles, unit)
}

pub fn ghg_operator<R: Ring>(g: &GHGParams<R>) -> Result<DiffOp<ZFrac<R>>, GhgError> {
    let unit = g.upper.first().map(|a| a.one_like()).ok_or(GhgError::NotFuchsian { p: 0, q: g.lower.len() })?;
    ghg_operator_on(g, &ghg_poles(&unit), &unit)
}

/// `L_{a, b, e_1+1, .., e_N+1; c, e_1, .., e_N}` built from the elementary
/// symmetric functions of the `e_i` only.
pub fn ghg_operator_esym<R: Ring>(
    alpha: &R,
    beta: &R,
    gamma: &R,
    esym: &[R],
    poles: &Arc<Poles<R>>,
) -> Result<DiffOp<ZFrac<R>>, GhgError> {
    ghg_operator_esym_sp(&alpha.add_ref(beta), &alpha.mul_ref(beta), gamma, esym, poles)
}

/// As [`ghg_operator_esym`], from `a + b` and `ab`.
pub fn ghg_operator_esym_sp<R: Ring>(
    ab_sum: &R,
    ab_prod: &R,
    gamma: &R,
    esym: &[R],
    poles: &Arc<Poles<R>>,
) -> Result<DiffOp<ZFrac<R>>, GhgError> {
    let unit = gamma.one_like();
    let s_plus = esym_product(esym, &unit, &unit);
    let s_minus = esym_product(esym, &unit.negate(), &unit);
    let upper = crate::oredop::zfrac::pmul(&[ab_prod.clone(), ab_sum.clone(), unit.one_like()], &s_plus);
    let lower = crate::oredop::zfrac::pmul(&shifted_product(&[gamma.sub_ref(&unit)], &unit), &s_minus);
    euler_operator(&upper, &lower, poles, &unit)
}

/// Terms `T_0..=T_K` of `sum (a)_n/((b)_n n!) z^n`, stopping early at zeros.
pub fn pfq_terms<F: Scalar>(upper: &[F], lower: &[F], z: &F, terms: usize) -> Result<Vec<F>, GhgError> {
    let mut out = vec![F::one()];
    let mut cur = F::one();
    for n in 0..terms {
        let nf = F::from_i64(n as i64);
        let mut num = F::one();
        for a in upper {
            num = num * (a.clone() + nf.clone());
        }
        if num.is_zero() {
            break;
        }
        let mut den = F::from_i64(n as i64 + 1);
        for (i, b) in lower.iter().enumerate() {
            let f = b.clone() + nf.clone();
            if f.is_zero() {
                return Err(GhgError::LowerPochhammerZero { index: i, n: n + 1 });
            }
            den = den * f;
        }
        cur = cur * num * z.clone() / den;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Partial sum `sum_{n<=terms}` in any scalar type.
pub fn pfq_partial<F: Scalar>(upper: &[F], lower: &[F], z: &F, terms: usize) -> Result<F, GhgError> {
    Ok(pfq_terms(upper, lower, z, terms)?.into_iter().fold(F::zero(), |a, b| a + b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PfqValue {
    pub value: Rational,
    pub terminating: bool,
    /// For a partial sum: a geometric bound on the tail from the last term
    /// ratio, or `None` when the ratio test gives nothing.
    pub tail_bound: Option<f64>,
}

/// Exact value of a terminating series (some upper parameter in `Z<=0`),
/// else the partial sum through `z^terms`.
pub fn pfq_eval(g: &GHGParams<Rational>, z: &Rational, terms: usize) -> Result<PfqValue, GhgError> {
    let stop = g
        .upper
        .iter()
        .filter_map(rational_as_i64)
        .filter(|&a| a <= 0)
        .map(|a| (-a) as usize)
        .min();
    let k = stop.unwrap_or(terms);
    let t = pfq_terms(&g.upper, &g.lower, z, k)?;
    let value = t.iter().fold(rint(0), |a, b| a + b);
    if stop.is_some() {
        return Ok(PfqValue { value, terminating: true, tail_bound: Some(0.0) });
    }
    let tail_bound = match t.len() {
        n if n >= 2 => {
            let last = crate::exactalg::scalar::rational_to_f64(&t[n - 1]).abs();
            let prev = crate::exactalg::scalar::rational_to_f64(&t[n - 2]).abs();
            let r = if prev > 0.0 { last / prev } else { f64::INFINITY };
            (r < 1.0).then(|| last * r / (1.0 - r))
        }
        _ => None,
    };
    Ok(PfqValue { value, terminating: false, tail_bound })
}

/// `4F3(-k-1, k+g+h+1, e_1+1, e_2+1; g+3/2, e_1, e_2; z)` from
/// `E1 = e_1 + e_2`, `E2 = e_1 e_2`, using
/// `(e_1+1)_n (e_2+1)_n / ((e_1)_n (e_2)_n) = (E2 + n E1 + n^2)/E2`.
/// Returns the coefficients of the polynomial in `z` (degree `k + 1`).
pub fn pfq_sym_coeffs(k: u32, g: &Rational, h: &Rational, e1: &Rational, e2: &Rational) -> Result<Vec<Rational>, GhgError> {
    if e2 == &rint(0) {
        return Err(GhgError::ZeroProduct);
    }
    let upper = [rint(-(k as i64) - 1), rint(k as i64 + 1) + g + h];
    let lower = [g + Rational::new(3.into(), 2.into())];
    let base = pfq_terms(&upper, &lower, &rint(1), k as usize + 1)?;
    Ok(base
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            let n = rint(n as i64);
            c * (e2 + &n * e1 + &n * &n) / e2
        })
        .collect())
}

pub fn pfq_sym_eval(k: u32, g: &Rational, h: &Rational, e1: &Rational, e2: &Rational, z: &Rational) -> Result<Rational, GhgError> {
    let c = pfq_sym_coeffs(k, g, h, e1, e2)?;
    Ok(c.iter().rev().fold(rint(0), |acc, x| acc * z + x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::rat;
    use crate::exactalg::{ParamRing, PolyRing};

    fn sym_ring(names: &[&str]) -> Arc<ParamRing<Rational>> {
        ParamRing::new(PolyRing::new(names.iter().copied()))
    }

    #[test]
    fn third_order_display() {
        let r = sym_ring(&["a1", "a2", "a3", "b1", "b2"]);
        let v = |s: &str| r.var(s).unwrap();
        let g = GHGParams::new(vec![v("a1"), v("a2"), v("a3")], vec![v("b1"), v("b2")]);
        let l = ghg_operator(&g).unwrap();
        let one = r.one();
        let poles = l.coeff(0).poles().clone();
        let k = |n: i64| r.int(n);
        let (a1, a2, a3, b1, b2) = (v("a1"), v("a2"), v("a3"), v("b1"), v("b2"));
        let c2 = ZFrac::from_parts(&poles, vec![b1.add_ref(&b2).add_ref(&k(1)).negate(), a1.add_ref(&a2).add_ref(&a3).add_ref(&k(3))], vec![1, 1], &one);
        let e2 = a1.mul_ref(&a2).add_ref(&a1.mul_ref(&a3)).add_ref(&a2.mul_ref(&a3));
        let c1 = ZFrac::from_parts(&poles, vec![b1.mul_ref(&b2).negate(), e2.add_ref(&a1).add_ref(&a2).add_ref(&a3).add_ref(&k(1))], vec![2, 1], &one);
        let c0 = ZFrac::from_parts(&poles, vec![a1.mul_ref(&a2).mul_ref(&a3)], vec![2, 1], &one);
        let expect = DiffOp::new(vec![c0, c1, c2, ZFrac::constant(&poles, one.clone())], &ZFrac::constant(&poles, one));
        assert_eq!(l, expect);
        assert!(l.leading().unwrap().sub(&ZFrac::constant(&poles, r.one())).is_zero());
    }

    #[test]
    fn gauss_operator() {
        let r = sym_ring(&["a", "b", "c"]);
        let v = |s: &str| r.var(s).unwrap();
        let l = ghg_operator(&GHGParams::new(vec![v("a"), v("b")], vec![v("c")])).unwrap();
        let poles = l.coeff(0).poles().clone();
        let one = r.one();
        let c1 = ZFrac::pole_power(&poles, 0, 1, v("c"))
            .add(&ZFrac::pole_power(&poles, 1, 1, v("a").add_ref(&v("b")).add_ref(&one).sub_ref(&v("c"))));
        let c0 = ZFrac::from_parts(&poles, vec![v("a").mul_ref(&v("b"))], vec![1, 1], &one);
        let expect = DiffOp::new(vec![c0, c1, ZFrac::constant(&poles, one.clone())], &ZFrac::constant(&poles, one));
        assert_eq!(l, expect);
        let bad = GHGParams::new(vec![v("a")], vec![v("c")]);
        assert!(matches!(ghg_operator(&bad), Err(GhgError::NotFuchsian { p: 1, q: 1 })));
    }

    #[test]
    fn esym_matches_explicit() {
        let r = sym_ring(&["a", "b", "c", "e1", "e2"]);
        let v = |s: &str| r.var(s).unwrap();
        let one = r.one();
        let (e1, e2) = (v("e1"), v("e2"));
        let g = GHGParams::new(
            vec![v("a"), v("b"), e1.add_ref(&one), e2.add_ref(&one)],
            vec![v("c"), e1.clone(), e2.clone()],
        );
        let poles = ghg_poles(&one);
        let explicit = ghg_operator_on(&g, &poles, &one).unwrap();
        let sym = ghg_operator_esym(&v("a"), &v("b"), &v("c"), &[e1.add_ref(&e2), e1.mul_ref(&e2)], &poles).unwrap();
        assert_eq!(explicit, sym);
    }

    #[test]
    fn terminating_series() {
        let g = GHGParams::new(vec![rint(-1), rat(3, 5)], vec![rat(7, 2)]);
        let z = rat(2, 9);
        let v = pfq_eval(&g, &z, 50).unwrap();
        assert!(v.terminating);
        assert_eq!(v.value, rint(1) - rat(3, 5) / rat(7, 2) * &z);
        let bad = GHGParams::new(vec![rint(-3), rint(1)], vec![rint(-1)]);
        assert!(matches!(pfq_eval(&bad, &z, 10), Err(GhgError::LowerPochhammerZero { .. })));
        // 4F3 with -k-1 upper: k + 2 terms.
        let k = 3;
        let g = GHGParams::new(vec![rint(-k - 1), rat(9, 2), rat(1, 3), rat(2, 7)], vec![rat(5, 2), rat(-2, 3), rat(-5, 7)]);
        let t = pfq_terms(&g.upper, &g.lower, &rat(1, 2), 20).unwrap();
        assert_eq!(t.len(), (k + 2) as usize);
    }

    #[test]
    fn binomial_partial_sums() {
        // 1F0(a;;z) = (1 - z)^{-a}.
        let g = GHGParams::new(vec![rat(1, 3)], vec![]);
        let v = pfq_eval(&g, &rat(1, 2), 60).unwrap();
        let exact = 0.5f64.powf(-1.0 / 3.0);
        let got = crate::exactalg::scalar::rational_to_f64(&v.value);
        let tail = v.tail_bound.unwrap();
        assert!((got - exact).abs() <= tail.max(1e-15) * 2.0, "{got} vs {exact}, tail {tail}");
    }

    #[test]
    fn symmetric_evaluation() {
        let (g, h) = (rint(1), rat(1, 4));
        let e1 = rat(2, 3);
        let e2 = rat(-5, 4);
        let (s, p) = (&e1 + &e2, &e1 * &e2);
        let k = 2u32;
        let z = rat(3, 7);
        let explicit = GHGParams::new(
            vec![rint(-3), rint(3) + &g + &h, &e1 + rint(1), &e2 + rint(1)],
            vec![&g + rat(3, 2), e1.clone(), e2.clone()],
        );
        let a = pfq_eval(&explicit, &z, 10).unwrap().value;
        assert_eq!(pfq_sym_eval(k, &g, &h, &s, &p, &z).unwrap(), a);
        assert_eq!(pfq_sym_coeffs(k, &g, &h, &s, &p).unwrap().len(), k as usize + 2);
        assert!(matches!(pfq_sym_eval(k, &g, &h, &s, &rint(0), &z), Err(GhgError::ZeroProduct)));
    }

    #[test]
    fn operator_annihilates_partial_sums() {
        let g = GHGParams::new(vec![rat(1, 3), rat(-2, 5), rat(7, 4)], vec![rat(5, 6), rat(-3, 7)]);
        let one = rint(1);
        let l = ghg_operator(&g).unwrap();
        let kk = 12;
        let t = pfq_terms(&g.upper, &g.lower, &one, kk).unwrap();
        let poles = l.coeff(0).poles().clone();
        let y = ZFrac::poly(&poles, t, &one);
        let res = l.apply(&y);
        let num = res.numer_over(&[2, 1]);
        for n in 0..=(kk - 3) {
            assert!(num.get(n).is_none_or(|c| c == &rint(0)), "z^{n}");
        }
    }
}
