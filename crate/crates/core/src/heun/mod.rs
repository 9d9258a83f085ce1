//! Heun's equation: the operator, local series, the apparency and
//! Heun-polynomial conditions, and polynomial-type solutions.

pub mod conditions;
pub mod gauge;
pub mod implication;
pub mod params;
pub mod series;

use thiserror::Error;

pub use implication::{check_implication, implication_instance, trichotomy_check, Implication, ImplicationCheck, TrichotomyCheck, IMPLICATION_TOL};
pub use conditions::{apparency_poly, heun_poly_condition, polynomial_solution, scaled_coeffs, PolySolution};
pub use gauge::{gauge_transform, polytype_solution, Polytype};
pub use params::{HeunParams, HeunSpec, ParamValue};
pub use series::{series_at, series_coeffs, LocalSeries, Obstruction, SeriesPoint};

use crate::exactalg::{ExactError, ParamElem, Ring, Scalar};
use crate::oredop::{DiffOp, OreError, Poles, ZFrac};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeunError {
    #[error("Fuchs relation violated: {0}")]
    FuchsRelation(String),
    #[error("degenerate singular point: {0}")]
    Degenerate(String),
    #[error("{name} must be a nonpositive integer, got {value}")]
    NotNonPositiveInteger { name: &'static str, value: String },
    #[error("epsilon = 1 is not supported")]
    EpsilonOne,
    #[error("accessory parameter is not a root: residual {0}")]
    NotARoot(String),
    #[error("gauge transformation needs exact coefficients")]
    InexactGauge,
    #[error("gauged operator is not of Heun form: {0}")]
    NotHeunForm(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Ore(#[from] OreError),
}

/// Operator coefficient ring for Heun-type operators.
pub type Coeff<F> = ZFrac<ParamElem<F>>;

/// The value of `x` as an integer, when it is a constant integer.
pub fn as_integer<F: Scalar>(x: &ParamElem<F>) -> Option<i64> {
    let c = x.constant_value()?;
    let m = c.magnitude();
    if !m.is_finite() || m > 1e9 {
        return None;
    }
    let r = m.round() as i64;
    for k in [r, -r] {
        let diff = c.clone() - F::from_i64(k);
        let ok = if F::EXACT { diff.is_zero() } else { diff.magnitude() <= 1e-30 * (1.0 + m) };
        if ok {
            return Some(k);
        }
    }
    None
}

/// Pole list `[0, 1, t]` in the variable `z`.
pub fn heun_poles<F: Scalar>(p: &HeunParams<F>) -> std::sync::Arc<Poles<ParamElem<F>>> {
    let r = p.ring();
    Poles::new("z", vec![r.zero(), r.one(), p.t.clone()], vec!["0".into(), "1".into(), p.t.to_string()])
}

/// `D^2 + (g/z + d/(z-1) + e/(z-t)) D + (ab z - q)/(z(z-1)(z-t))`.
pub fn heun_operator<F: Scalar>(p: &HeunParams<F>) -> DiffOp<Coeff<F>> {
    let poles = heun_poles(p);
    heun_operator_on(p, &poles)
}

/// As [`heun_operator`], over a caller-supplied pole list whose first three
/// entries are `0, 1, t`.
pub fn heun_operator_on<F: Scalar>(p: &HeunParams<F>, poles: &std::sync::Arc<Poles<ParamElem<F>>>) -> DiffOp<Coeff<F>> {
    let one = p.ring().one();
    let n = poles.len();
    let pp = |i: usize, c: &ParamElem<F>| {
        let mut den = vec![0; n];
        den[i] = 1;
        ZFrac::from_parts(poles, vec![c.clone()], den, &one)
    };
    let c1 = pp(0, &p.gamma).add(&pp(1, &p.delta)).add(&pp(2, &p.epsilon));
    let mut den = vec![0; n];
    den[..3].fill(1);
    let c0 = ZFrac::from_parts(poles, vec![p.q.negate(), p.alpha.mul_ref(&p.beta)], den, &one);
    DiffOp::new(vec![c0, c1, ZFrac::constant(poles, one.clone())], &ZFrac::constant(poles, one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::rint;
    use crate::exactalg::Rational;

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
    fn operator_prints_heun_form() {
        let p = symbolic(ParamValue::sym("epsilon"));
        let l = heun_operator(&p);
        assert_eq!(l.order(), Some(2));
        let c1 = l.coeff(1);
        assert_eq!(c1.den_exponents(), &[1, 1, 1]);
        let c0 = l.coeff(0);
        assert_eq!(c0.numer().len(), 2);
        assert_eq!(c0.numer()[1].to_string(), "alpha*beta");
        assert_eq!(c0.numer()[0].to_string(), "-q");
    }

    #[test]
    fn epsilon_zero_removes_t() {
        // q = ab t cancels (z - t) and the gamma/delta terms give Gauss's operator.
        let p = symbolic(ParamValue::int(0));
        let q = p.alpha.mul_ref(&p.beta).mul_ref(&p.t);
        let p = p.with_q(q);
        let l = heun_operator(&p).tidy();
        for c in l.coeffs() {
            assert_eq!(c.den_exponents()[2], 0);
        }
        let c0 = l.coeff(0);
        assert_eq!(c0.den_exponents(), &[1, 1, 0]);
        assert_eq!(c0.numer()[0], p.alpha.mul_ref(&p.beta));
    }

    #[test]
    fn integer_detection() {
        let p = symbolic(ParamValue::int(-3));
        assert_eq!(as_integer(&p.epsilon), Some(-3));
        assert_eq!(as_integer(&p.alpha), None);
        assert_eq!(as_integer(&p.ring().rational(&crate::exactalg::scalar::rat(1, 2))), None);
        assert_eq!(as_integer(&p.ring().rational(&rint(7))), Some(7));
    }
}
