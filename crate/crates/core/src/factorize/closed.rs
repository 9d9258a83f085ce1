//! Closed forms for a single apparent point with `epsilon = -1, -2`.

use super::FactorError;
use crate::exactalg::{ParamElem, Ring, Scalar};
use crate::heun::{apparency_poly, as_integer, heun_poles, Coeff, HeunError, HeunParams};
use crate::oredop::{DiffOp, ZFrac};

fn require_epsilon<F: Scalar>(h: &HeunParams<F>, want: i64) -> Result<(), FactorError> {
    if as_integer(&h.epsilon) != Some(want) {
        return Err(HeunError::NotNonPositiveInteger { name: "epsilon", value: h.epsilon.to_string() }.into());
    }
    Ok(())
}

/// `Ok` when `P^app(q)` vanishes in the parameter ring (exactly, or to
/// 1e-40 relative in inexact rings).
pub fn check_apparent<F: Scalar>(h: &HeunParams<F>) -> Result<(), FactorError> {
    let r = apparency_poly(h)?;
    let ok = if F::EXACT {
        r.is_zero()
    } else {
        r.magnitude() <= 1e-40 * (1.0 + h.q.magnitude()).powi(as_integer(&h.epsilon).map_or(1, |e| (1 - e) as i32))
    };
    if ok {
        Ok(())
    } else {
        Err(FactorError::NotApparent(r.to_string()))
    }
}

/// `(q - (a+1)(b+1) t + g)/(1 - t) - 1`, without the apparency check.
pub fn maier_e1_formula<F: Scalar>(h: &HeunParams<F>) -> Result<ParamElem<F>, FactorError> {
    let r = h.ring();
    let one = r.one();
    let num = h
        .q
        .sub_ref(&h.alpha.add_ref(&one).mul_ref(&h.beta.add_ref(&one)).mul_ref(&h.t))
        .add_ref(&h.gamma);
    let inv = one.sub_ref(&h.t).try_inverse().ok_or_else(|| HeunError::Degenerate("1 - t is not invertible".into()))?;
    Ok(num.mul_ref(&inv).sub_ref(&one))
}

/// `e_1` for `epsilon = -1`; fails with the residual when `t` is not apparent.
pub fn maier_e1<F: Scalar>(h: &HeunParams<F>) -> Result<ParamElem<F>, FactorError> {
    require_epsilon(h, -1)?;
    check_apparent(h)?;
    maier_e1_formula(h)
}

/// `D + (e_1+1)/z + 1/(z-1) + 1/(z-t)` over the Heun pole list.
pub fn maier_quotient<F: Scalar>(h: &HeunParams<F>, e1: &ParamElem<F>) -> DiffOp<Coeff<F>> {
    let poles = heun_poles(h);
    let one = h.ring().one();
    let a = ZFrac::pole_power(&poles, 0, 1, e1.add_ref(&one))
        .add(&ZFrac::pole_power(&poles, 1, 1, one.clone()))
        .add(&ZFrac::pole_power(&poles, 2, 1, one.clone()));
    let u = ZFrac::constant(&poles, one);
    DiffOp::new(vec![a, u.clone()], &u)
}

/// Symmetric functions and the zeroth-order coefficient of the left factor
/// for `epsilon = -2`.
#[derive(Clone, Debug)]
pub struct Eps2ClosedForm<F> {
    pub e_sum: ParamElem<F>,
    pub e_prod: ParamElem<F>,
    pub v: Coeff<F>,
}

/// `e_1 + e_2`, `e_1 e_2` and `v(z)` without the apparency check.
pub fn eps2_formula<F: Scalar>(h: &HeunParams<F>) -> Result<Eps2ClosedForm<F>, FactorError> {
    let r = h.ring();
    let c = |n: i64| r.int(n);
    let (a, b, g, t, q) = (&h.alpha, &h.beta, &h.gamma, &h.t, &h.q);
    let one_m_t = c(1).sub_ref(t);
    let inv = one_m_t.try_inverse().ok_or_else(|| HeunError::Degenerate("1 - t is not invertible".into()))?;
    let ab = a.mul_ref(b);
    let e_sum = q
        .sub_ref(&a.add_ref(&c(2)).mul_ref(&b.add_ref(&c(2))).mul_ref(t))
        .add_ref(&c(2).mul_ref(g))
        .mul_ref(&inv)
        .sub_ref(&c(3));
    let lin = c(2).mul_ref(&ab).add_ref(&c(3).mul_ref(a)).add_ref(&c(3).mul_ref(b)).add_ref(&c(1)).mul_ref(t).sub_ref(&c(3).mul_ref(g).sub_ref(&c(4)));
    let (a2, b2) = (a.mul_ref(a), b.mul_ref(b));
    let t2 = ab
        .mul_ref(&ab)
        .add_ref(&c(3).mul_ref(&a2).mul_ref(b))
        .add_ref(&c(3).mul_ref(a).mul_ref(&b2))
        .add_ref(&c(7).mul_ref(&ab))
        .add_ref(&c(2).mul_ref(&a2))
        .add_ref(&c(2).mul_ref(&b2))
        .add_ref(&c(2).mul_ref(a))
        .add_ref(&c(2).mul_ref(b));
    let four_ab = c(3).mul_ref(&ab).add_ref(&c(4).mul_ref(a)).add_ref(&c(4).mul_ref(b));
    let t1 = c(2).mul_ref(&ab).add_ref(&c(4).mul_ref(a)).add_ref(&c(4).mul_ref(b)).sub_ref(&g.mul_ref(&four_ab));
    let bracket = q
        .mul_ref(q)
        .sub_ref(&lin.mul_ref(q))
        .add_ref(&t2.mul_ref(&t.mul_ref(t)))
        .add_ref(&t1.mul_ref(t))
        .add_ref(&c(2).mul_ref(&g.sub_ref(&c(1))).mul_ref(&g.sub_ref(&c(2))));
    let e_prod = bracket.mul_ref(&inv).mul_ref(&inv).scale_rational(&crate::exactalg::scalar::rat(1, 2));
    // (e1+3)(e2+3) = E2 + 3E1 + 9, (e1+1)(e2+1) = E2 + E1 + 1.
    let p3 = e_prod.add_ref(&c(3).mul_ref(&e_sum)).add_ref(&c(9));
    let p1 = e_prod.add_ref(&e_sum).add_ref(&c(1));
    let mid = q
        .sub_ref(&p1.add_ref(&a.add_ref(&c(2)).mul_ref(&b.add_ref(&c(2)))).mul_ref(t))
        .sub_ref(&p3)
        .add_ref(&c(2).mul_ref(&g.add_ref(&c(1))));
    let poles = heun_poles(h);
    let v = ZFrac::from_parts(&poles, vec![t.mul_ref(&p1), mid, p3], vec![2, 1, 1], &c(1)).simplify();
    Ok(Eps2ClosedForm { e_sum, e_prod, v })
}

/// The closed forms for `epsilon = -2`; fails when `t` is not apparent.
pub fn eps2_e1e2<F: Scalar>(h: &HeunParams<F>) -> Result<Eps2ClosedForm<F>, FactorError> {
    require_epsilon(h, -2)?;
    check_apparent(h)?;
    eps2_formula(h)
}

/// `D^2 + ((E1+3)/z + 2/(z-1) + 2/(z-t)) D + v(z)`.
pub fn eps2_left_factor<F: Scalar>(h: &HeunParams<F>, th: &Eps2ClosedForm<F>) -> DiffOp<Coeff<F>> {
    let poles = heun_poles(h);
    let r = h.ring();
    let a = ZFrac::pole_power(&poles, 0, 1, th.e_sum.add_ref(&r.int(3)))
        .add(&ZFrac::pole_power(&poles, 1, 1, r.int(2)))
        .add(&ZFrac::pole_power(&poles, 2, 1, r.int(2)));
    let u = ZFrac::constant(&poles, r.one());
    DiffOp::new(vec![th.v.clone(), a, u.clone()], &u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::rat;
    use crate::exactalg::Rational;
    use crate::ghg::ghg_operator_esym;
    use crate::heun::{heun_operator, HeunSpec, ParamValue};

    fn concrete(gamma: Rational, q: i64) -> HeunParams<Rational> {
        HeunSpec {
            alpha: ParamValue::int(1),
            beta: ParamValue::int(2),
            gamma: ParamValue::rational(&gamma),
            delta: None,
            epsilon: ParamValue::int(-1),
            q: ParamValue::int(q),
            t: ParamValue::int(2),
        }
        .build(&[])
        .unwrap()
    }

    #[test]
    fn maier_concrete_instance() {
        let h = concrete(rat(34, 3), 1);
        let e1 = maier_e1(&h).unwrap();
        assert_eq!(e1.constant_value(), Some(rat(-4, 3)));
        let poles = heun_poles(&h);
        let lg = ghg_operator_esym(&h.alpha, &h.beta, &h.gamma, &[e1.clone()], &poles).unwrap();
        let (quo, rem) = lg.right_divide(&heun_operator(&h)).unwrap();
        assert!(rem.is_zero());
        assert!(quo.equals(&maier_quotient(&h, &e1)));
    }

    #[test]
    fn maier_rejects_non_apparent() {
        let h = concrete(rat(34, 3), 2);
        assert!(matches!(maier_e1(&h), Err(FactorError::NotApparent(_))));
        let e1 = maier_e1_formula(&h).unwrap();
        let lg = ghg_operator_esym(&h.alpha, &h.beta, &h.gamma, &[e1], &heun_poles(&h)).unwrap();
        let (_, rem) = lg.right_divide(&heun_operator(&h)).unwrap();
        assert!(!rem.is_zero());
    }
}
