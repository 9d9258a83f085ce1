//! The Kazakov–Slavyanov parameter map and quasi-polynomial solutions
//! `v(w) = w^(b-g) (w-1)^(b-d) h(w)` of the transformed equation.

use crate::exactalg::{ParamElem, Ring, Scalar};
use crate::factorize::apparency::var_index;
use crate::heun::{
    apparency_poly, as_integer, heun_operator, heun_poles, polytype_solution, Coeff, HeunError, HeunParams, Polytype,
};
use crate::oredop::{apply_quasi, QuasiFunction, ZFrac};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eta {
    Alpha,
    Beta,
}

/// `eta` and the primed parameters.
#[derive(Clone, Debug)]
pub struct KSMap<F> {
    pub eta_choice: Eta,
    pub eta: ParamElem<F>,
    pub primed: HeunParams<F>,
}

/// `g' = g - eta + 1`, `d' = d - eta + 1`, `e' = e - eta + 1`,
/// `a' = 2 - eta`, `b' = a + b - 2 eta + 1`,
/// `q' = q + (1 - eta)(e + d t + (g - eta)(t + 1))`.
pub fn ks_params<F: Scalar>(p: &HeunParams<F>, choice: Eta) -> Result<KSMap<F>, HeunError> {
    let eta = match choice {
        Eta::Alpha => p.alpha.clone(),
        Eta::Beta => p.beta.clone(),
    };
    let r = p.ring();
    let one = r.one();
    let shift = one.sub_ref(&eta);
    let q = p.q.add_ref(
        &shift.mul_ref(&p.epsilon.add_ref(&p.delta.mul_ref(&p.t)).add_ref(&p.gamma.sub_ref(&eta).mul_ref(&p.t.add_ref(&one)))),
    );
    let primed = HeunParams::from_elems(
        r.int(2).sub_ref(&eta),
        p.alpha.add_ref(&p.beta).sub_ref(&r.int(2).mul_ref(&eta)).add_ref(&one),
        p.gamma.add_ref(&shift),
        Some(p.delta.add_ref(&shift)),
        p.epsilon.add_ref(&shift),
        q,
        p.t.clone(),
    )?;
    Ok(KSMap { eta_choice: choice, eta, primed })
}

/// Coefficients `[h_0, h_1, h_2]` of
/// `h(w) = 2a(a+1) w^2 + 2(a+1)(q - a(b+2)t) w
///        + q^2 - ((2ab + 3a + b + 1)t - g + 2) q + a t (t(a+1)(b+1)(b+2) - b g)`.
pub fn h_poly_ep2<F: Scalar>(p: &HeunParams<F>) -> [ParamElem<F>; 3] {
    let r = p.ring();
    let c = |n: i64| r.int(n);
    let (a, b, g, t, q) = (&p.alpha, &p.beta, &p.gamma, &p.t, &p.q);
    let a1 = a.add_ref(&c(1));
    let h2 = c(2).mul_ref(a).mul_ref(&a1);
    let h1 = c(2).mul_ref(&a1).mul_ref(&q.sub_ref(&a.mul_ref(&b.add_ref(&c(2))).mul_ref(t)));
    let lin = c(2)
        .mul_ref(a)
        .mul_ref(b)
        .add_ref(&c(3).mul_ref(a))
        .add_ref(b)
        .add_ref(&c(1))
        .mul_ref(t)
        .sub_ref(g)
        .add_ref(&c(2));
    let tail = t.mul_ref(&a1).mul_ref(&b.add_ref(&c(1))).mul_ref(&b.add_ref(&c(2))).sub_ref(&b.mul_ref(g));
    let h0 = q.mul_ref(q).sub_ref(&lin.mul_ref(q)).add_ref(&a.mul_ref(t).mul_ref(&tail));
    [h0, h1, h2]
}

/// `w^(b-g) (w-1)^(b-d) h(w)` on the pole list `0, 1, t`.
pub fn quasipoly_ep2<F: Scalar>(p: &HeunParams<F>) -> Result<QuasiFunction<ParamElem<F>>, HeunError> {
    let poles = heun_poles(p);
    let h = ZFrac::poly(&poles, h_poly_ep2(p).to_vec(), &p.ring().one());
    Ok(QuasiFunction::new(p.beta.sub_ref(&p.gamma), p.beta.sub_ref(&p.delta), h)?)
}

/// Result of applying the primed operator to `v(w)`.
#[derive(Clone, Debug)]
pub struct QuasiCheck<F> {
    /// Rational part of `L' v` in the ring of `p`.
    pub residual: Coeff<F>,
    /// Whether it vanishes once `P^app(q) = 0` is imposed.
    pub pass: bool,
}

/// Apply the primed Heun operator (`eta = b`) to `v(w)` and reduce the
/// result modulo `P^app(q)`, with `q` the ring variable named `q` when it is
/// symbolic.
pub fn verify_quasipoly<F: Scalar>(p: &HeunParams<F>) -> Result<QuasiCheck<F>, HeunError> {
    if as_integer(&p.epsilon) != Some(-2) {
        return Err(HeunError::NotNonPositiveInteger { name: "epsilon", value: p.epsilon.to_string() });
    }
    let ks = ks_params(p, Eta::Beta)?;
    let lp = heun_operator(&ks.primed);
    let v = quasipoly_ep2(p)?;
    let residual = apply_quasi(&lp, &v).rational_part().clone();
    let reduced = reduce_apparent(p, &residual)?;
    Ok(QuasiCheck { residual, pass: reduced })
}

/// Whether every numerator coefficient of `f` vanishes modulo `P^app(q)`
/// (or exactly, when `q` is not a bare ring variable or a modulus is present).
fn reduce_apparent<F: Scalar>(p: &HeunParams<F>, f: &Coeff<F>) -> Result<bool, HeunError> {
    let ring = p.ring();
    let num = f.numer();
    let qvar = var_index(&p.q);
    if ring.has_modulus() || qvar.is_none() {
        return Ok(num.iter().all(|c| c.is_zero()));
    }
    let name = ring.vars().names()[qvar.unwrap()].clone();
    let modded = ring.with_modulus(apparency_poly(p)?.numer(), &name)?;
    for c in num {
        if !c.rehome(&modded)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For `e <= 0`, the polynomial-type solution `w^(b-g) (w-1)^(b-d) h(w)` of
/// the primed equation (`eta = b`), found from its polynomial condition.
pub fn quasipoly_solution<F: Scalar>(p: &HeunParams<F>) -> Result<Polytype<F>, HeunError> {
    let ks = ks_params(p, Eta::Beta)?;
    let one = p.ring().one();
    let pr = &ks.primed;
    polytype_solution(pr, [one.sub_ref(&pr.gamma), one.sub_ref(&pr.delta), p.ring().zero()])
}

/// Apply the map twice; the composite is only observed, with no claim
/// that it returns to the start.
pub fn ks_twice<F: Scalar>(p: &HeunParams<F>, first: Eta, second: Eta) -> Result<HeunParams<F>, HeunError> {
    let once = ks_params(p, first)?;
    Ok(ks_params(&once.primed, second)?.primed)
}
