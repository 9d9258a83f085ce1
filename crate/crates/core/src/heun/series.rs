//! Local power-series solutions with exponent 0.

use super::{HeunError, HeunParams};
use crate::exactalg::{ParamElem, RatFunc, Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesPoint {
    Zero,
    One,
    T,
}

/// A coefficient that cannot be solved for: the factor in front of `c_i`
/// vanishes but the rest of the recurrence does not.
#[derive(Clone, Debug)]
pub struct Obstruction<F> {
    pub index: usize,
    pub residual: RatFunc<F>,
}

/// `y = sum_i c_i (z - point)^i`, `c_0 = 1`.
///
/// When the factor in front of `c_i` vanishes and the recurrence is
/// consistent, `c_i` is free and chosen to be 0; when it is inconsistent the
/// expansion stops and the residual is reported in `obstruction` (a
/// logarithmic term is then forced).
#[derive(Clone, Debug)]
pub struct LocalSeries<F> {
    pub point: SeriesPoint,
    pub exponent: i64,
    pub coeffs: Vec<RatFunc<F>>,
    pub obstruction: Option<Obstruction<F>>,
    pub free_indices: Vec<usize>,
}

pub(crate) fn to_ratfunc<F: Scalar>(e: &ParamElem<F>) -> RatFunc<F> {
    RatFunc::new(e.numer().clone(), e.den_poly()).expect("units are nonzero")
}

/// Solve `lead_i c_i + rest_i(c_{i-1}, c_{i-2}) = 0` for `i = 1..=order`.
fn run<F: Scalar>(
    point: SeriesPoint,
    order: usize,
    lead: impl Fn(usize) -> ParamElem<F>,
    prev1: impl Fn(usize) -> ParamElem<F>,
    prev2: impl Fn(usize) -> ParamElem<F>,
    unit: &ParamElem<F>,
) -> LocalSeries<F> {
    let one = to_ratfunc(&unit.one_like());
    let zero = one.zero_like();
    let mut coeffs = vec![one];
    let mut free = Vec::new();
    for i in 1..=order {
        let c1 = &coeffs[i - 1];
        let c2 = if i >= 2 { coeffs[i - 2].clone() } else { zero.clone() };
        let rest = to_ratfunc(&prev1(i)).mul_ref(c1).add_ref(&to_ratfunc(&prev2(i)).mul_ref(&c2));
        let l = to_ratfunc(&lead(i));
        if l.is_zero() {
            if rest.is_zero() {
                free.push(i);
                coeffs.push(zero.clone());
                continue;
            }
            return LocalSeries { point, exponent: 0, coeffs, obstruction: Some(Obstruction { index: i, residual: rest }), free_indices: free };
        }
        coeffs.push(rest.negate().exact_div(&l).expect("nonzero"));
    }
    LocalSeries { point, exponent: 0, coeffs, obstruction: None, free_indices: free }
}

/// Expansion about `z = t`, coefficients `c_0..=c_order`.
pub fn series_coeffs<F: Scalar>(p: &HeunParams<F>, order: usize) -> LocalSeries<F> {
    let r = p.ring();
    let int = |n: usize| r.int(n as i64);
    let tt = p.t.mul_ref(&p.t.sub_ref(&r.one()));
    let ab = p.alpha.mul_ref(&p.beta);
    let s = p.gamma.add_ref(&p.delta).add_ref(&p.epsilon).add_ref(&p.epsilon);
    let lead = |i: usize| int(i).mul_ref(&int(i).add_ref(&p.epsilon).sub_ref(&r.one())).mul_ref(&tt);
    let prev1 = |i: usize| e_coeff(p, i, &s, &ab);
    let prev2 = |i: usize| {
        if i < 2 {
            r.zero()
        } else {
            int(i).add_ref(&p.alpha).sub_ref(&int(2)).mul_ref(&int(i).add_ref(&p.beta).sub_ref(&int(2)))
        }
    };
    run(SeriesPoint::T, order, lead, prev1, prev2, &r.one())
}

/// `E_i = (i-1)(i-2)(2t-1) + (i-1)((g+d+2e)t - g - e) + ab t - q`.
pub(crate) fn e_coeff<F: Scalar>(p: &HeunParams<F>, i: usize, s: &ParamElem<F>, ab: &ParamElem<F>) -> ParamElem<F> {
    let r = p.ring();
    let i = i as i64;
    let two_t_m1 = p.t.scale_rational(&crate::exactalg::scalar::rint(2)).sub_ref(&r.one());
    let a = two_t_m1.scale_rational(&crate::exactalg::scalar::rint((i - 1) * (i - 2)));
    let b = s.mul_ref(&p.t).sub_ref(&p.gamma).sub_ref(&p.epsilon).scale_rational(&crate::exactalg::scalar::rint(i - 1));
    a.add_ref(&b).add_ref(&ab.mul_ref(&p.t)).sub_ref(&p.q)
}

fn series_at_zero<F: Scalar>(p: &HeunParams<F>, order: usize, point: SeriesPoint) -> LocalSeries<F> {
    // t (n+1)(n+g) c_{n+1} = [n((n-1+g)(1+t) + t d + e) + q] c_n - (n-1+a)(n-1+b) c_{n-1}
    let r = p.ring();
    let int = |n: i64| r.int(n);
    let lead = |i: usize| {
        let n = i as i64 - 1;
        p.t.mul_ref(&int(n + 1)).mul_ref(&int(n).add_ref(&p.gamma))
    };
    let prev1 = |i: usize| {
        let n = i as i64 - 1;
        let inner = int(n - 1)
            .add_ref(&p.gamma)
            .mul_ref(&r.one().add_ref(&p.t))
            .add_ref(&p.t.mul_ref(&p.delta))
            .add_ref(&p.epsilon);
        int(n).mul_ref(&inner).add_ref(&p.q).negate()
    };
    let prev2 = |i: usize| {
        let n = i as i64 - 1;
        int(n - 1).add_ref(&p.alpha).mul_ref(&int(n - 1).add_ref(&p.beta))
    };
    run(point, order, lead, prev1, prev2, &r.one())
}

/// Parameters after `z -> 1 - z`, which swaps the singular points 0 and 1.
pub fn swap_zero_one<F: Scalar>(p: &HeunParams<F>) -> Result<HeunParams<F>, HeunError> {
    let r = p.ring();
    HeunParams::from_elems(
        p.alpha.clone(),
        p.beta.clone(),
        p.delta.clone(),
        Some(p.gamma.clone()),
        p.epsilon.clone(),
        p.alpha.mul_ref(&p.beta).sub_ref(&p.q),
        r.one().sub_ref(&p.t),
    )
}

/// Parameters after `z -> t(1 - z)`, which sends `t` to 0 and 0 to 1.
/// Requires `t` to be invertible.
pub fn swap_t_zero<F: Scalar>(p: &HeunParams<F>) -> Result<HeunParams<F>, HeunError> {
    let r = p.ring();
    let tinv = p.t.try_inverse().ok_or(HeunError::Degenerate("t is not invertible".into()))?;
    HeunParams::from_elems(
        p.alpha.clone(),
        p.beta.clone(),
        p.epsilon.clone(),
        Some(p.gamma.clone()),
        p.delta.clone(),
        p.alpha.mul_ref(&p.beta).sub_ref(&p.q.mul_ref(&tinv)),
        p.t.sub_ref(&r.one()).mul_ref(&tinv),
    )
}

/// Exponent-0 expansion about 0, 1 or `t`.
pub fn series_at<F: Scalar>(p: &HeunParams<F>, point: SeriesPoint, order: usize) -> Result<LocalSeries<F>, HeunError> {
    Ok(match point {
        SeriesPoint::Zero => series_at_zero(p, order, point),
        SeriesPoint::One => {
            // Coefficients of (1 - z)^j become those of (z - 1)^j.
            let mut s = series_at_zero(&swap_zero_one(p)?, order, point);
            for c in s.coeffs.iter_mut().skip(1).step_by(2) {
                *c = c.negate();
            }
            if let Some(ob) = s.obstruction.as_mut() {
                if ob.index % 2 == 1 {
                    ob.residual = ob.residual.negate();
                }
            }
            s
        }
        SeriesPoint::T => series_coeffs(p, order),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{heun_operator, HeunSpec, ParamValue};
    use super::*;
    use crate::exactalg::scalar::{rat, rint};
    use crate::exactalg::{MultiPoly, Rational, UPoly};
    use crate::oredop::ZFrac;

    fn spec(eps: ParamValue) -> HeunSpec {
        HeunSpec {
            alpha: ParamValue::sym("alpha"),
            beta: ParamValue::sym("beta"),
            gamma: ParamValue::sym("gamma"),
            delta: None,
            epsilon: eps,
            q: ParamValue::sym("q"),
            t: ParamValue::sym("t"),
        }
    }

    #[test]
    fn first_coefficient_symbolic() {
        let p: HeunParams<Rational> = spec(ParamValue::sym("epsilon")).build(&[]).unwrap();
        let s = series_coeffs(&p, 1);
        assert!(s.coeffs[0] == RatFunc::from_poly(MultiPoly::one(p.ring().vars())));
        let r = p.ring();
        let expect_num = p.q.sub_ref(&p.alpha.mul_ref(&p.beta).mul_ref(&p.t));
        let expect_den = p.epsilon.mul_ref(&p.t).mul_ref(&p.t.sub_ref(&r.one()));
        let expect = to_ratfunc(&expect_num).exact_div(&to_ratfunc(&expect_den)).unwrap();
        assert!(s.coeffs[1] == expect);
    }

    fn random_rational_q(seed: i64) -> HeunParams<Rational> {
        HeunSpec {
            alpha: ParamValue::rational(&rat(3 + seed, 7)),
            beta: ParamValue::rational(&rat(-2, 5 + seed)),
            gamma: ParamValue::rational(&rat(11, 13)),
            delta: None,
            epsilon: ParamValue::rational(&rat(5, 3)),
            q: ParamValue::sym("q"),
            t: ParamValue::rational(&rat(-4, 9)),
        }
        .build(&[])
        .unwrap()
    }

    #[test]
    fn degree_in_q_grows_by_one() {
        let p = random_rational_q(1);
        let s = series_coeffs(&p, 4);
        for (i, c) in s.coeffs.iter().enumerate() {
            assert!(c.denom().is_constant());
            assert_eq!(UPoly::from_multi(c.numer(), 0).unwrap().degree(), Some(i));
        }
    }

    /// Residual of the truncated series under the operator: the low-order
    /// Taylor coefficients at the expansion point must vanish.
    fn check_residual(p: &HeunParams<Rational>, point: SeriesPoint, center: Rational) {
        let k = 8;
        let s = series_at(p, point, k).unwrap();
        assert!(s.obstruction.is_none());
        let r = p.ring();
        let l = heun_operator(p);
        let poles = l.coeff(0).poles().clone();
        // y(z) = sum c_i (z - center)^i as a polynomial in z.
        let mut y = ZFrac::zero(&poles, &r.one());
        let lin = ZFrac::z(&poles, &r.one()).sub(&ZFrac::constant(&poles, r.rational(&center)));
        let mut pw = ZFrac::constant(&poles, r.one());
        for c in &s.coeffs {
            let cv = c.numer().constant_term() / c.denom().constant_value().unwrap();
            y = y.add(&pw.scale(&r.rational(&cv)));
            pw = pw.mul(&lin);
        }
        let res = l.apply(&y);
        // Clear the poles and look at the Taylor expansion.
        let poly = res.numer_over(&[1, 1, 1]);
        let shifted = crate::oredop::zfrac::ptaylor_shift(&poly, &r.rational(&center));
        for c in shifted.iter().take(k - 1) {
            assert!(c.is_zero(), "{point:?}: residual coefficient {c}");
        }
    }

    #[test]
    fn series_satisfy_equation() {
        let p = HeunSpec {
            alpha: ParamValue::rational(&rat(1, 3)),
            beta: ParamValue::rational(&rat(5, 2)),
            gamma: ParamValue::rational(&rat(-7, 4)),
            delta: None,
            epsilon: ParamValue::rational(&rat(2, 9)),
            q: ParamValue::rational(&rat(3, 11)),
            t: ParamValue::rational(&rat(5, 3)),
        }
        .build::<Rational>(&[])
        .unwrap();
        check_residual(&p, SeriesPoint::T, rat(5, 3));
        check_residual(&p, SeriesPoint::Zero, rint(0));
        check_residual(&p, SeriesPoint::One, rint(1));
    }

    #[test]
    fn swap_symmetry_matches_t_recurrence() {
        // c_j^{(t)} (-t)^j equals the exponent-0 series at 0 of the swapped equation.
        let p: HeunParams<Rational> = spec(ParamValue::sym("epsilon")).build(&[]).unwrap();
        let sw = swap_t_zero(&p).unwrap();
        let a = series_coeffs(&p, 3);
        let b = series_at(&sw, SeriesPoint::Zero, 3).unwrap();
        let mt = to_ratfunc(&p.t.negate());
        let mut pw = mt.one_like();
        for j in 0..=3 {
            assert!(a.coeffs[j].mul_ref(&pw) == b.coeffs[j], "index {j}");
            pw = pw.mul_ref(&mt);
        }
    }

    #[test]
    fn obstruction_and_free_coefficient() {
        // epsilon = 0: the i = 1 factor vanishes; residual is (ab t - q).
        let p: HeunParams<Rational> = spec(ParamValue::int(0)).build(&[]).unwrap();
        let s = series_coeffs(&p, 3);
        let ob = s.obstruction.unwrap();
        assert_eq!(ob.index, 1);
        let expect = to_ratfunc(&p.alpha.mul_ref(&p.beta).mul_ref(&p.t).sub_ref(&p.q));
        assert!(ob.residual == expect);
        let apparent = p.with_q(p.alpha.mul_ref(&p.beta).mul_ref(&p.t));
        let s = series_coeffs(&apparent, 3);
        assert!(s.obstruction.is_none());
        assert_eq!(s.free_indices, vec![1]);
    }
}
