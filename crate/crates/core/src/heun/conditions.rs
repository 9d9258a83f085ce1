//! The apparency condition at `z = t` and the Heun-polynomial condition.
//!
//! Both come from the scaled recurrence `c~_i = D_i c_i`,
//! `D_i = prod_{j<=i} d_j`, `d_j = j(j+e-1)t(t-1)`, which has no division:
//! `c~_i = -[A_i d_{i-1} c~_{i-2} + E_i c~_{i-1}]`,
//! `A_i = (i+a-2)(i+b-2)`.

use super::series::e_coeff;
use super::{as_integer, heun_poles, Coeff, HeunError, HeunParams};
use crate::exactalg::{ParamElem, Ring, Scalar};
use crate::oredop::zfrac::pmul_linear;
use crate::oredop::ZFrac;

/// `(c~_0..=c~_upto, d_0..=d_upto)` with `d_0 = 1`.
pub fn scaled_coeffs<F: Scalar>(p: &HeunParams<F>, upto: usize) -> (Vec<ParamElem<F>>, Vec<ParamElem<F>>) {
    let r = p.ring();
    let int = |n: usize| r.int(n as i64);
    let tt = p.t.mul_ref(&p.t.sub_ref(&r.one()));
    let ab = p.alpha.mul_ref(&p.beta);
    let s = p.gamma.add_ref(&p.delta).add_ref(&p.epsilon).add_ref(&p.epsilon);
    let mut c = vec![r.one()];
    let mut d = vec![r.one()];
    for i in 1..=upto {
        d.push(int(i).mul_ref(&int(i).add_ref(&p.epsilon).sub_ref(&r.one())).mul_ref(&tt));
        let mut acc = e_coeff(p, i, &s, &ab).mul_ref(&c[i - 1]);
        if i >= 2 {
            let a = int(i).add_ref(&p.alpha).sub_ref(&int(2)).mul_ref(&int(i).add_ref(&p.beta).sub_ref(&int(2)));
            acc = acc.add_ref(&a.mul_ref(&d[i - 1]).mul_ref(&c[i - 2]));
        }
        c.push(acc.negate());
    }
    (c, d)
}

/// `n = 1 - e` for integer `e <= 0`.
fn apparency_order<F: Scalar>(p: &HeunParams<F>) -> Result<usize, HeunError> {
    match as_integer(&p.epsilon) {
        Some(1) => Err(HeunError::EpsilonOne),
        Some(e) if e <= 0 => Ok((1 - e) as usize),
        _ => Err(HeunError::NotNonPositiveInteger { name: "epsilon", value: p.epsilon.to_string() }),
    }
}

/// `N = 1 - a` for integer `a <= 0`.
fn polynomial_order<F: Scalar>(p: &HeunParams<F>) -> Result<usize, HeunError> {
    match as_integer(&p.alpha) {
        Some(a) if a <= 0 => Ok((1 - a) as usize),
        _ => Err(HeunError::NotNonPositiveInteger { name: "alpha", value: p.alpha.to_string() }),
    }
}

/// `P^app(q)`: the singularity `z = t` is apparent iff this vanishes.
/// Monic of degree `1 - e` when `q` is a ring variable.
pub fn apparency_poly<F: Scalar>(p: &HeunParams<F>) -> Result<ParamElem<F>, HeunError> {
    let n = apparency_order(p)?;
    Ok(scaled_coeffs(p, n).0.pop().unwrap())
}

/// `P^pol(q)`: a polynomial solution of degree `-a` exists iff this vanishes.
/// Monic of degree `1 - a` when `q` is a ring variable.
pub fn heun_poly_condition<F: Scalar>(p: &HeunParams<F>) -> Result<ParamElem<F>, HeunError> {
    let n = polynomial_order(p)?;
    Ok(scaled_coeffs(p, n).0.pop().unwrap())
}

/// A Heun polynomial, both in powers of `(z - t)` and as a function of `z`.
#[derive(Clone, Debug)]
pub struct PolySolution<F> {
    pub coeffs_at_t: Vec<ParamElem<F>>,
    pub poly: Coeff<F>,
}

impl<F: Scalar> PolySolution<F> {
    pub fn degree(&self) -> usize {
        self.coeffs_at_t.len().saturating_sub(1)
    }
}

/// The polynomial solution `sum_{i<N} c~_i (D_{N-1}/D_i) (z-t)^i`; the
/// accessory parameter `p.q` must be a root of `P^pol`.
pub fn polynomial_solution<F: Scalar>(p: &HeunParams<F>) -> Result<PolySolution<F>, HeunError> {
    let n = polynomial_order(p)?;
    let (c, d) = scaled_coeffs(p, n);
    let residual = &c[n];
    let vanishes = if F::EXACT {
        residual.is_zero()
    } else {
        let scale = c[..n].iter().map(|x| x.magnitude()).fold(1.0, f64::max);
        residual.magnitude() <= 1e-40 * scale
    };
    if !vanishes {
        return Err(HeunError::NotARoot(residual.to_string()));
    }
    let r = p.ring();
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = c[i].clone();
        for dj in &d[i + 1..n] {
            m = m.mul_ref(dj);
        }
        coeffs.push(m);
    }
    let poles = heun_poles(p);
    // Horner in (z - t).
    let mut acc: Vec<ParamElem<F>> = Vec::new();
    for ci in coeffs.iter().rev() {
        acc = pmul_linear(&acc, &p.t);
        if acc.is_empty() {
            acc.push(ci.clone());
        } else {
            acc[0] = acc[0].add_ref(ci);
        }
    }
    let poly = ZFrac::poly(&poles, acc, &r.one());
    Ok(PolySolution { coeffs_at_t: coeffs, poly })
}

#[cfg(test)]
mod tests {
    use super::super::{heun_operator, HeunSpec, ParamValue};
    use super::*;
    use crate::exactalg::scalar::{rat, rint};
    use crate::exactalg::{Rational, UPoly};

    fn sym(alpha: ParamValue, eps: ParamValue) -> HeunParams<Rational> {
        HeunSpec {
            alpha,
            beta: ParamValue::sym("beta"),
            gamma: ParamValue::sym("gamma"),
            delta: None,
            epsilon: eps,
            q: ParamValue::sym("q"),
            t: ParamValue::sym("t"),
        }
        .build(&[])
        .unwrap()
    }

    fn params(eps: i64) -> HeunParams<Rational> {
        let mut p = sym(ParamValue::sym("alpha"), ParamValue::int(eps));
        p.alpha = p.ring().var("alpha").unwrap();
        p
    }

    /// Evaluate a closed form written with the variable names in scope.
    fn poly_of(p: &HeunParams<Rational>, f: impl Fn(&dyn Fn(&str) -> ParamElem<Rational>, &dyn Fn(i64) -> ParamElem<Rational>) -> ParamElem<Rational>) -> ParamElem<Rational> {
        let r = p.ring().clone();
        let v = move |s: &str| r.var(s).unwrap();
        let r2 = p.ring().clone();
        let k = move |n: i64| r2.int(n);
        f(&v, &k)
    }

    #[test]
    fn apparency_epsilon_zero() {
        let p = params(0);
        let got = apparency_poly(&p).unwrap();
        assert_eq!(got, p.q.sub_ref(&p.alpha.mul_ref(&p.beta).mul_ref(&p.t)));
    }

    #[test]
    fn apparency_epsilon_minus_one() {
        let p = params(-1);
        let got = apparency_poly(&p).unwrap();
        let expect = poly_of(&p, |v, k| {
            let (a, b, g, t, q) = (v("alpha"), v("beta"), v("gamma"), v("t"), v("q"));
            let ab = a.mul_ref(&b);
            let lin = ab.mul_ref(&k(2)).add_ref(&a).add_ref(&b).mul_ref(&t).sub_ref(&g).add_ref(&k(1));
            let c = a.add_ref(&k(1)).mul_ref(&b.add_ref(&k(1))).mul_ref(&t).sub_ref(&g);
            q.mul_ref(&q).sub_ref(&lin.mul_ref(&q)).add_ref(&ab.mul_ref(&t).mul_ref(&c))
        });
        assert_eq!(got, expect);
    }

    #[test]
    fn apparency_epsilon_minus_two() {
        let p = params(-2);
        let got = apparency_poly(&p).unwrap();
        let expect = poly_of(&p, |v, k| {
            let (a, b, g, t, q) = (v("alpha"), v("beta"), v("gamma"), v("t"), v("q"));
            let ab = a.mul_ref(&b);
            let apb = a.add_ref(&b);
            let q2 = k(-3).mul_ref(&ab).sub_ref(&k(3).mul_ref(&apb)).sub_ref(&k(1)).mul_ref(&t).add_ref(&k(3).mul_ref(&g)).sub_ref(&k(4));
            let t2 = k(3)
                .mul_ref(&ab.mul_ref(&ab))
                .add_ref(&k(6).mul_ref(&ab).mul_ref(&apb))
                .add_ref(&k(10).mul_ref(&ab))
                .add_ref(&k(2).mul_ref(&a.mul_ref(&a).add_ref(&b.mul_ref(&b))))
                .add_ref(&k(2).mul_ref(&apb));
            let t1 = k(-6)
                .mul_ref(&ab)
                .sub_ref(&k(4).mul_ref(&apb))
                .mul_ref(&g)
                .add_ref(&k(4).mul_ref(&ab))
                .add_ref(&k(4).mul_ref(&apb));
            let t0 = k(2).mul_ref(&g.sub_ref(&k(1))).mul_ref(&g.sub_ref(&k(2)));
            let q1 = t2.mul_ref(&t).mul_ref(&t).add_ref(&t1.mul_ref(&t)).add_ref(&t0);
            let a12 = a.add_ref(&k(1)).mul_ref(&a.add_ref(&k(2)));
            let b12 = b.add_ref(&k(1)).mul_ref(&b.add_ref(&k(2)));
            let inner = a12
                .mul_ref(&b12)
                .mul_ref(&t)
                .mul_ref(&t)
                .sub_ref(&g.mul_ref(&k(3).mul_ref(&ab).add_ref(&k(4).mul_ref(&apb)).add_ref(&k(4))).mul_ref(&t))
                .add_ref(&k(2).mul_ref(&g).mul_ref(&g.sub_ref(&k(1))));
            q.pow_u(3)
                .add_ref(&q2.mul_ref(&q.mul_ref(&q)))
                .add_ref(&q1.mul_ref(&q))
                .sub_ref(&ab.mul_ref(&t).mul_ref(&inner))
        });
        assert_eq!(got, expect);
    }

    #[test]
    fn apparency_rejects_bad_epsilon() {
        assert!(matches!(apparency_poly(&params(1)), Err(HeunError::EpsilonOne)));
        assert!(matches!(apparency_poly(&params(2)), Err(HeunError::NotNonPositiveInteger { .. })));
        let p = sym(ParamValue::sym("alpha"), ParamValue::sym("epsilon"));
        assert!(apparency_poly(&p).is_err());
    }

    fn with_alpha(a: i64) -> HeunParams<Rational> {
        let mut p = sym(ParamValue::int(a), ParamValue::sym("epsilon"));
        p.epsilon = p.ring().var("epsilon").unwrap();
        p
    }

    #[test]
    fn heun_polynomial_conditions() {
        let p = with_alpha(0);
        assert_eq!(heun_poly_condition(&p).unwrap(), p.q);
        let p = with_alpha(-1);
        let expect = poly_of(&p, |v, k| {
            let (b, g, e, t, q) = (v("beta"), v("gamma"), v("epsilon"), v("t"), v("q"));
            let lin = b.sub_ref(&e).mul_ref(&t).add_ref(&g).add_ref(&e);
            let _ = k;
            q.mul_ref(&q).add_ref(&lin.mul_ref(&q)).add_ref(&b.mul_ref(&g).mul_ref(&t))
        });
        assert_eq!(heun_poly_condition(&p).unwrap(), expect);
        let p = with_alpha(-2);
        let expect = poly_of(&p, |v, k| {
            let (b, g, e, t, q) = (v("beta"), v("gamma"), v("epsilon"), v("t"), v("q"));
            let bme = b.sub_ref(&e);
            let ge = g.add_ref(&e);
            let c2 = k(3).mul_ref(&b).sub_ref(&k(3).mul_ref(&e)).sub_ref(&k(1)).mul_ref(&t).add_ref(&k(3).mul_ref(&g)).add_ref(&k(3).mul_ref(&e)).add_ref(&k(2));
            let mid = e.mul_ref(&e).add_ref(&g.sub_ref(&b).add_ref(&k(1)).mul_ref(&e)).sub_ref(&k(2).mul_ref(&g).add_ref(&k(1)).mul_ref(&b));
            let c1 = k(2)
                .mul_ref(&bme)
                .mul_ref(&bme.sub_ref(&k(1)))
                .mul_ref(&t)
                .mul_ref(&t)
                .sub_ref(&k(4).mul_ref(&mid).mul_ref(&t))
                .add_ref(&k(2).mul_ref(&ge).mul_ref(&ge.add_ref(&k(1))));
            let c0 = k(4).mul_ref(&b).mul_ref(&g).mul_ref(&t).mul_ref(&bme.mul_ref(&t).add_ref(&ge).add_ref(&k(1)));
            q.pow_u(3).add_ref(&c2.mul_ref(&q.mul_ref(&q))).add_ref(&c1.mul_ref(&q)).add_ref(&c0)
        });
        assert_eq!(heun_poly_condition(&p).unwrap(), expect);
        assert!(heun_poly_condition(&with_alpha(-1).with_q(p.ring().int(0))).is_ok());
        let mut bad = with_alpha(0);
        bad.alpha = bad.ring().int(2);
        assert!(heun_poly_condition(&bad).is_err());
    }

    /// Work modulo `P^pol` so that `q` is a formal root.
    fn at_root(a: i64) -> HeunParams<Rational> {
        let p = with_alpha(a);
        let g = heun_poly_condition(&p).unwrap();
        let ring = p.ring().with_modulus(g.numer(), "q").unwrap();
        p.rehome(&ring).unwrap()
    }

    #[test]
    fn heun_polynomials() {
        let p = at_root(-1);
        let s = polynomial_solution(&p).unwrap();
        let (e, t, q, b) = (p.epsilon.clone(), p.t.clone(), p.q.clone(), p.ring().var("beta").unwrap());
        let r = p.ring();
        assert_eq!(s.coeffs_at_t[0], t.mul_ref(&t.sub_ref(&r.one())).mul_ref(&e));
        assert_eq!(s.coeffs_at_t[1], q.add_ref(&b.mul_ref(&t)));
        assert!(heun_operator(&p).apply(&s.poly).is_zero());

        let p = at_root(-2);
        let s = polynomial_solution(&p).unwrap();
        let (e, t, q, b, g) = (p.epsilon.clone(), p.t.clone(), p.q.clone(), p.ring().var("beta").unwrap(), p.ring().var("gamma").unwrap());
        let r = p.ring();
        let k = |n: i64| r.int(n);
        let tt = t.mul_ref(&t.sub_ref(&r.one()));
        assert_eq!(s.coeffs_at_t[0], k(2).mul_ref(&tt).mul_ref(&tt).mul_ref(&e).mul_ref(&e.add_ref(&k(1))));
        assert_eq!(s.coeffs_at_t[1], k(2).mul_ref(&tt).mul_ref(&e.add_ref(&k(1))).mul_ref(&q.add_ref(&k(2).mul_ref(&b).mul_ref(&t))));
        let c2 = q
            .mul_ref(&q)
            .add_ref(&k(3).mul_ref(&b).sub_ref(&e).add_ref(&k(1)).mul_ref(&t).add_ref(&g).add_ref(&e).mul_ref(&q))
            .add_ref(&k(2).mul_ref(&b).mul_ref(&t).mul_ref(&b.add_ref(&k(1)).mul_ref(&t).add_ref(&g)));
        assert_eq!(s.coeffs_at_t[2], c2);
        assert!(heun_operator(&p).apply(&s.poly).is_zero());
    }

    #[test]
    fn constant_solution_and_non_root() {
        let p = with_alpha(0);
        let p0 = p.with_q(p.ring().int(0));
        let s = polynomial_solution(&p0).unwrap();
        assert_eq!(s.degree(), 0);
        assert_eq!(s.coeffs_at_t[0], p.ring().one());
        let p1 = p.with_q(p.ring().int(1));
        assert!(matches!(polynomial_solution(&p1), Err(HeunError::NotARoot(_))));
    }

    #[test]
    fn rational_instance_degree() {
        let p = HeunSpec {
            alpha: ParamValue::int(-3),
            beta: ParamValue::rational(&rat(7, 3)),
            gamma: ParamValue::rational(&rat(1, 2)),
            delta: None,
            epsilon: ParamValue::rational(&rat(-5, 4)),
            q: ParamValue::sym("q"),
            t: ParamValue::rational(&rint(3)),
        }
        .build::<Rational>(&[])
        .unwrap();
        let g = UPoly::from_multi(heun_poly_condition(&p).unwrap().numer(), 0).unwrap();
        assert_eq!(g.degree(), Some(4));
        assert!(g.leading().unwrap().is_one_exact());
    }
}
