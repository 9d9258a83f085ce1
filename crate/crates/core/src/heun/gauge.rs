//! Gauge transformations `y = z^s0 (z-1)^s1 (z-t)^st u` and
//! polynomial-type solutions.
//!
//! The new parameters are read off mechanically: with `L = D^2 + A D + B`
//! and `l = s0/z + s1/(z-1) + st/(z-t)`, the function `u` satisfies
//! `D^2 + (A + 2l) D + (B + A l + l' + l^2)`. When each `s_i` is a local
//! exponent the double poles cancel and the result is again of Heun form.

use super::conditions::{heun_poly_condition, polynomial_solution, PolySolution};
use super::{as_integer, heun_operator, heun_poles, HeunError, HeunParams};
use crate::exactalg::{ParamElem, Ring, Scalar};
use crate::oredop::ZFrac;

/// Heun parameters of `u = z^{-s0} (z-1)^{-s1} (z-t)^{-st} y`, with
/// `alpha' = alpha + s`, `beta' = beta + s`, `s = s0 + s1 + st`.
pub fn gauge_transform<F: Scalar>(p: &HeunParams<F>, sigma: &[ParamElem<F>; 3]) -> Result<HeunParams<F>, HeunError> {
    if !F::EXACT {
        return Err(HeunError::InexactGauge);
    }
    let poles = heun_poles(p);
    let one = p.ring().one();
    let l = heun_operator(p);
    let (a, b) = (l.coeff(1), l.coeff(0));
    let mut lg = ZFrac::zero(&poles, &one);
    for (i, s) in sigma.iter().enumerate() {
        lg = lg.add(&ZFrac::pole_power(&poles, i, 1, s.clone()));
    }
    let b_new = b.add(&a.mul(&lg)).add(&lg.derivative()).add(&lg.mul(&lg)).simplify();
    if b_new.den_exponents().iter().any(|&e| e > 1) {
        return Err(HeunError::NotHeunForm(format!("zeroth-order coefficient {b_new} has a double pole")));
    }
    let num = b_new.numer_over(&[1, 1, 1]);
    if num.len() > 2 {
        return Err(HeunError::NotHeunForm(format!("zeroth-order numerator of degree {}", num.len() - 1)));
    }
    let n0 = num.first().cloned().unwrap_or_else(|| one.zero_like());
    let n1 = num.get(1).cloned().unwrap_or_else(|| one.zero_like());
    let s = sigma[0].add_ref(&sigma[1]).add_ref(&sigma[2]);
    let alpha = p.alpha.add_ref(&s);
    let beta = p.beta.add_ref(&s);
    if !alpha.mul_ref(&beta).sub_ref(&n1).is_zero() {
        return Err(HeunError::NotHeunForm(format!("z-coefficient {n1} differs from alpha'*beta'")));
    }
    let two = p.ring().int(2);
    HeunParams::from_elems(
        alpha,
        beta,
        p.gamma.add_ref(&two.mul_ref(&sigma[0])),
        Some(p.delta.add_ref(&two.mul_ref(&sigma[1]))),
        p.epsilon.add_ref(&two.mul_ref(&sigma[2])),
        n0.negate(),
        p.t.clone(),
    )
}

/// `y = z^s0 (z-1)^s1 (z-t)^st h(z)` with `h` a polynomial.
#[derive(Clone, Debug)]
pub enum Polytype<F> {
    Found { sigma: [ParamElem<F>; 3], gauged: HeunParams<F>, h: PolySolution<F> },
    None(String),
}

impl<F> Polytype<F> {
    pub fn is_found(&self) -> bool {
        matches!(self, Polytype::Found { .. })
    }
}

/// Gauge, then put the nonpositive-integer exponent at infinity in the
/// `alpha` slot. `None` when neither exponent is a nonpositive integer.
pub fn gauge_for_polynomial<F: Scalar>(p: &HeunParams<F>, sigma: &[ParamElem<F>; 3]) -> Result<Option<HeunParams<F>>, HeunError> {
    let g = gauge_transform(p, sigma)?;
    let nonpos = |x: &ParamElem<F>| as_integer(x).is_some_and(|v| v <= 0);
    if nonpos(&g.alpha) {
        Ok(Some(g))
    } else if nonpos(&g.beta) {
        Ok(Some(HeunParams { alpha: g.beta.clone(), beta: g.alpha.clone(), ..g }))
    } else {
        Ok(None)
    }
}

/// The condition on `q` for a polynomial-type solution with the given
/// prefactor: `P^pol` of the gauged equation, as a function of the
/// original parameters. `None` when the integrality condition fails.
pub fn polytype_condition<F: Scalar>(p: &HeunParams<F>, sigma: &[ParamElem<F>; 3]) -> Result<Option<ParamElem<F>>, HeunError> {
    match gauge_for_polynomial(p, sigma)? {
        Some(g) => Ok(Some(heun_poly_condition(&g)?)),
        None => Ok(None),
    }
}

pub fn polytype_solution<F: Scalar>(p: &HeunParams<F>, sigma: [ParamElem<F>; 3]) -> Result<Polytype<F>, HeunError> {
    let Some(g) = gauge_for_polynomial(p, &sigma)? else {
        return Ok(Polytype::None("no exponent at infinity of the gauged equation is a nonpositive integer".into()));
    };
    match polynomial_solution(&g) {
        Ok(h) => Ok(Polytype::Found { sigma, gauged: g, h }),
        Err(HeunError::NotARoot(r)) => Ok(Polytype::None(format!("polynomial condition not satisfied, residual {r}"))),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{HeunSpec, ParamValue};
    use super::*;
    use crate::exactalg::scalar::rat;
    use crate::exactalg::{MultiPoly, ParamRing, PolyRing, Rational};
    use crate::oredop::{apply_quasi, QuasiFunction};

    fn symbolic(eps: ParamValue) -> HeunParams<Rational> {
        HeunSpec {
            alpha: ParamValue::sym("alpha"),
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

    #[test]
    fn double_gauge_is_identity() {
        let p = symbolic(ParamValue::sym("epsilon"));
        let one = p.ring().one();
        let s = [one.sub_ref(&p.gamma), one.sub_ref(&p.delta), one.sub_ref(&p.epsilon)];
        let g = gauge_transform(&p, &s).unwrap();
        assert_eq!(g.gamma, p.ring().int(2).sub_ref(&p.gamma));
        let s2 = [one.sub_ref(&g.gamma), one.sub_ref(&g.delta), one.sub_ref(&g.epsilon)];
        let back = gauge_transform(&g, &s2).unwrap();
        for ((k, x), (_, y)) in back.entries().iter().zip(p.entries().iter()) {
            assert_eq!(x, y, "{k}");
        }
        let zero = p.ring().zero();
        let same = gauge_transform(&p, &[zero.clone(), zero.clone(), zero]).unwrap();
        assert_eq!(same.q, p.q);
    }

    #[test]
    fn non_exponent_is_rejected() {
        let p = symbolic(ParamValue::sym("epsilon"));
        let z = p.ring().zero();
        let r = gauge_transform(&p, &[p.ring().int(3), z.clone(), z]);
        assert!(matches!(r, Err(HeunError::NotHeunForm(_))));
    }

    #[test]
    fn x1_alpha_zero_case() {
        // alpha = 0, epsilon = -2, t = (1-g)/(b-2g+3), q = 2(1-g)(b-g+2)/(b-2g+3).
        let vars = PolyRing::new(["beta", "gamma"]);
        let b = MultiPoly::<Rational>::var(&vars, "beta").unwrap();
        let g = MultiPoly::<Rational>::var(&vars, "gamma").unwrap();
        let c = |n: i64| MultiPoly::from_i64(&vars, n);
        let dn = &(&b - &g.scale(&rat(2, 1))) + &c(3);
        let ring = ParamRing::with_units(vars.clone(), vec![dn.clone()]);
        let inv = ring.unit_inverse(0);
        let one_m_g = ring.poly(&c(1) - &g);
        let t = one_m_g.mul_ref(&inv);
        let q = ring.int(2).mul_ref(&one_m_g).mul_ref(&ring.poly(&(&b - &g) + &c(2))).mul_ref(&inv);
        let p = HeunParams::from_elems(ring.int(0), ring.poly(b.clone()), ring.poly(g.clone()), None, ring.int(-2), q, t).unwrap();
        let one = ring.one();
        let sigma = [one.sub_ref(&p.gamma), one.sub_ref(&p.delta), ring.zero()];
        let Polytype::Found { h, .. } = polytype_solution(&p, sigma.clone()).unwrap() else { panic!("expected a solution") };
        let hz = h.poly.numer();
        assert_eq!(hz.len(), 2);
        // h proportional to (b - 2g + 3) z + g - 2.
        let lhs = hz[1].mul_ref(&ring.poly(&g - &c(2)));
        let rhs = hz[0].mul_ref(&ring.poly(dn));
        assert_eq!(lhs, rhs);
        // The full solution, with the (z - t) prefactor trivial, is annihilated.
        let f = QuasiFunction::new(sigma[0].clone(), sigma[1].clone(), h.poly.clone()).unwrap();
        assert!(apply_quasi(&heun_operator(&p), &f).is_zero());
    }

    #[test]
    fn integrality_gate() {
        let p = HeunSpec {
            alpha: ParamValue::rational(&rat(1, 3)),
            beta: ParamValue::rational(&rat(2, 7)),
            gamma: ParamValue::rational(&rat(5, 4)),
            delta: None,
            epsilon: ParamValue::int(-1),
            q: ParamValue::sym("q"),
            t: ParamValue::int(3),
        }
        .build::<Rational>(&[])
        .unwrap();
        let one = p.ring().one();
        let sigma = [one.sub_ref(&p.gamma), one.sub_ref(&p.delta), p.ring().zero()];
        assert!(!polytype_solution(&p, sigma).unwrap().is_found());
        let z = p.ring().zero();
        let all_zero = polytype_solution(&p, [z.clone(), z.clone(), z]).unwrap();
        assert!(!all_zero.is_found());
    }
}
