//! Whether every root of one condition polynomial is a root of the other.

use num_complex::Complex64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::gauge::polytype_condition;
use super::{apparency_poly, as_integer, heun_poly_condition, HeunError, HeunParams, HeunSpec, ParamValue};
use crate::exactalg::scalar::{rat, rational_to_string};
use crate::exactalg::{ParamElem, Rational, Ring, UPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Implication {
    /// Roots of `P^pol` are roots of `P^app`.
    PolImpliesApp,
    /// Roots of `P^app` are roots of `P^pol`.
    AppImpliesPol,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImplicationCheck {
    pub direction: Implication,
    /// The squarefree part of the source divides the target in `Q[q]`.
    pub divides_exactly: bool,
    pub rational_roots: Vec<String>,
    pub numeric_roots: usize,
    /// Largest `|target(q*)| / sum |c_i| |q*|^i` over numeric source roots.
    pub max_residual: f64,
    pub pass: bool,
}

pub const IMPLICATION_TOL: f64 = 1e-10;

fn relative_residual(p: &UPoly<Complex64>, z: Complex64) -> f64 {
    let scale: f64 = p.coeffs().iter().enumerate().map(|(i, c)| c.norm() * z.norm().powi(i as i32)).sum();
    p.eval(&z).norm() / scale.max(f64::MIN_POSITIVE)
}

/// `p.q` must be the only ring variable left in the condition polynomials.
pub fn check_implication(p: &HeunParams<Rational>, direction: Implication) -> Result<ImplicationCheck, HeunError> {
    let qi = crate::factorize::apparency::var_index(&p.q)
        .ok_or_else(|| HeunError::Degenerate("q must be a ring variable".into()))?;
    let app = UPoly::from_multi(apparency_poly(p)?.numer(), qi)?;
    let pol = UPoly::from_multi(heun_poly_condition(p)?.numer(), qi)?;
    let (src, dst) = match direction {
        Implication::PolImpliesApp => (pol, app),
        Implication::AppImpliesPol => (app, pol),
    };
    let divides_exactly = src.squarefree_part().divides(&dst);
    let rational = src.rational_roots();
    let rational_ok = rational.iter().all(|r| dst.eval(r) == Rational::from_integer(0.into()));
    let dst_c = dst.to_c64();
    let roots = src.to_c64().roots();
    let max_residual = roots.iter().map(|&z| relative_residual(&dst_c, z)).fold(0.0, f64::max);
    Ok(ImplicationCheck {
        direction,
        divides_exactly,
        rational_roots: rational.iter().map(rational_to_string).collect(),
        numeric_roots: roots.len(),
        max_residual,
        pass: rational_ok && max_residual < IMPLICATION_TOL,
    })
}

fn non_integer(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let d = rng.gen_range(2..=7i64);
        let n = rng.gen_range(-30..=30i64);
        if n % d != 0 {
            return rat(n, d);
        }
    }
}

/// Random instance in the regime of `direction`: integers
/// `eps <= alpha <= 0` for [`Implication::PolImpliesApp`],
/// `alpha <= eps <= 0` for [`Implication::AppImpliesPol`], with `-6 <= eps, alpha`.
/// `beta`, `gamma` are non-integer rationals, `t` a rational at distance
/// at least `1/3` from 0 and 1, and `q` is symbolic.
pub fn implication_instance(direction: Implication, seed: u64) -> Result<HeunParams<Rational>, HeunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.gen_range(-6..=0i64);
    let b = rng.gen_range(-6..=0i64);
    let (alpha, eps) = match direction {
        Implication::PolImpliesApp => (a.max(b), a.min(b)),
        Implication::AppImpliesPol => (a.min(b), a.max(b)),
    };
    let (beta, gamma) = loop {
        let (b, g) = (non_integer(&mut rng), non_integer(&mut rng));
        if !(&b - &g).is_integer() {
            break (b, g);
        }
    };
    let t = loop {
        let t = rat(rng.gen_range(-20..=20i64), rng.gen_range(1..=6i64));
        let far = |c: i64| (&t - rat(c, 1)).abs() >= rat(1, 3);
        if far(0) && far(1) {
            break t;
        }
    };
    HeunSpec {
        alpha: ParamValue::int(alpha),
        beta: ParamValue::rational(&beta),
        gamma: ParamValue::rational(&gamma),
        delta: None,
        epsilon: ParamValue::int(eps),
        q: ParamValue::sym("q"),
        t: ParamValue::rational(&t),
    }
    .build(&[])
}

/// Which solution type each apparent `q` admits, for integer `alpha` and
/// `eps = -n <= 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrichotomyCheck {
    pub alpha: i64,
    pub n: i64,
    pub roots: usize,
    /// Per root of `P^app`: a polynomial solution of degree `-alpha` exists.
    pub polynomial: Vec<bool>,
    /// Per root: a solution `z^(1-g) (z-1)^(1-d) h(z)` with `deg h = alpha + n - 1` exists.
    pub prefactored: Vec<bool>,
    pub pass: bool,
}

fn holds_at(cond: &Option<UPoly<Complex64>>, z: Complex64) -> bool {
    cond.as_ref().is_some_and(|c| relative_residual(c, z) < IMPLICATION_TOL)
}

/// At each numeric root of `P^app`: for `alpha > 0` the prefactored
/// solution exists, for `alpha < 1 - n` the polynomial one, otherwise at
/// least one of them.
pub fn trichotomy_check(p: &HeunParams<Rational>) -> Result<TrichotomyCheck, HeunError> {
    let qi = crate::factorize::apparency::var_index(&p.q)
        .ok_or_else(|| HeunError::Degenerate("q must be a ring variable".into()))?;
    let int = |x: &ParamElem<Rational>, name: &'static str| {
        as_integer(x).ok_or_else(|| HeunError::NotNonPositiveInteger { name, value: x.to_string() })
    };
    let alpha = int(&p.alpha, "alpha")?;
    let n = -int(&p.epsilon, "epsilon")?;
    if n < 0 {
        return Err(HeunError::NotNonPositiveInteger { name: "epsilon", value: p.epsilon.to_string() });
    }
    let to_c = |e: ParamElem<Rational>| -> Result<UPoly<Complex64>, HeunError> { Ok(UPoly::from_multi(e.numer(), qi)?.to_c64()) };
    let pol = if alpha <= 0 { Some(to_c(heun_poly_condition(p)?)?) } else { None };
    let one = p.ring().one();
    let sigma = [one.sub_ref(&p.gamma), one.sub_ref(&p.delta), p.ring().zero()];
    let typ = match polytype_condition(p, &sigma)? {
        Some(c) if alpha + n - 1 >= 0 => Some(to_c(c)?),
        _ => None,
    };
    let roots = UPoly::from_multi(apparency_poly(p)?.numer(), qi)?.to_c64().roots();
    let polynomial: Vec<bool> = roots.iter().map(|&z| holds_at(&pol, z)).collect();
    let prefactored: Vec<bool> = roots.iter().map(|&z| holds_at(&typ, z)).collect();
    let pass = polynomial.iter().zip(&prefactored).all(|(&a, &b)| {
        if alpha > 0 {
            b
        } else if alpha < 1 - n {
            a
        } else {
            a || b
        }
    });
    Ok(TrichotomyCheck { alpha, n, roots: roots.len(), polynomial, prefactored, pass })
}
