//! Apparency conditions at the extra singular points of `L~`.

use super::{ApparentFuchsian, FactorError};
use crate::exactalg::{ParamElem, Ring, Scalar};
use crate::oredop::zfrac::ptaylor_shift;

/// Obstruction to a log-free exponent-0 solution at `t_j`: the residual of
/// the Frobenius recurrence at index `m_j + 1`. Requires the factors
/// `t_j (t_j - 1) prod_{k != j} (t_j - t_k)` to be invertible.
pub fn local_obstruction<F: Scalar>(lt: &ApparentFuchsian<F>, j: usize) -> Result<ParamElem<F>, FactorError> {
    let poles = lt.poles();
    let op = lt.operator_on(&poles);
    let k = poles.len();
    let full = vec![1u32; k];
    // Clear denominators: P2 y'' + P1 y' + P0 y = 0 with P2 = z(z-1) prod (z - t_k).
    let shift = |c: &crate::heun::Coeff<F>| ptaylor_shift(&c.numer_over(&full), &lt.sing[j].0);
    let p2 = shift(&op.coeff(2));
    let p1 = shift(&op.coeff(1));
    let p0 = shift(&op.coeff(0));
    let r = lt.gamma.ring();
    let at = |v: &[ParamElem<F>], i: isize| if i < 0 { r.zero() } else { v.get(i as usize).cloned().unwrap_or_else(|| r.zero()) };
    let m = lt.sing[j].1 as usize;
    let mut c = vec![r.one()];
    for s in 0..=m {
        let mut acc = r.zero();
        for (n, cn) in c.iter().enumerate() {
            let (ni, si) = (n as i64, s as isize - n as isize);
            let f = r
                .int(ni * (ni - 1))
                .mul_ref(&at(&p2, si + 2))
                .add_ref(&r.int(ni).mul_ref(&at(&p1, si + 1)))
                .add_ref(&at(&p0, si));
            acc = acc.add_ref(&f.mul_ref(cn));
        }
        if s == m {
            return Ok(acc);
        }
        let s1 = s as i64 + 1;
        let lead = r.int(s1 * (s1 - 1)).mul_ref(&at(&p2, 1)).add_ref(&r.int(s1).mul_ref(&at(&p1, 0)));
        let inv = lead.try_inverse().ok_or_else(|| FactorError::NonUnitDeterminant(lead.to_string()))?;
        c.push(acc.mul_ref(&inv).negate());
    }
    unreachable!()
}

/// `[P_1, .., P_M]`; when `p_j` is a ring variable whose top coefficient is
/// invertible, `P_j` is normalized to be monic in `p_j`.
pub fn apparency_system<F: Scalar>(lt: &ApparentFuchsian<F>) -> Result<Vec<ParamElem<F>>, FactorError> {
    let mut out = Vec::with_capacity(lt.sing.len());
    for j in 0..lt.sing.len() {
        let mut pj = local_obstruction(lt, j)?;
        if let Some(idx) = var_index(&lt.p[j]) {
            let coeffs = pj.numer().coeffs_in(idx);
            if let Some(top) = coeffs.last() {
                let top = lt.gamma.ring().poly(top.clone());
                if let Some(inv) = top.try_inverse() {
                    pj = pj.mul_ref(&inv);
                }
            }
        }
        out.push(pj);
    }
    Ok(out)
}

/// Index of `x` when it is a bare ring variable.
pub(crate) fn var_index<F: Scalar>(x: &ParamElem<F>) -> Option<usize> {
    if !x.is_polynomial() || x.numer().nterms() != 1 || x.numer().total_degree() != 1 {
        return None;
    }
    let (m, c) = x.numer().leading()?;
    if !c.is_one_exact() {
        return None;
    }
    m.exps().iter().position(|&e| e == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::rat;
    use crate::exactalg::{ParamRing, PolyRing, Rational};
    use crate::heun::{apparency_poly, HeunParams, HeunSpec, ParamValue};

    #[test]
    fn single_point_matches_heun() {
        for m in 1..=3 {
            let h: HeunParams<Rational> = HeunSpec {
                alpha: ParamValue::sym("alpha"),
                beta: ParamValue::sym("beta"),
                gamma: ParamValue::sym("gamma"),
                delta: None,
                epsilon: ParamValue::int(-m),
                q: ParamValue::sym("q"),
                t: ParamValue::sym("t"),
            }
            .build(&[])
            .unwrap();
            let lt = ApparentFuchsian::from_heun(&h).unwrap();
            let ob = local_obstruction(&lt, 0).unwrap();
            let papp = apparency_poly(&h).unwrap();
            let ratio = papp.exact_div(&ob).expect("unit multiple");
            assert!(ratio.try_inverse().is_some(), "m = {m}: ratio {ratio}");
        }
    }

    #[test]
    fn two_point_degrees() {
        let r = ParamRing::<Rational>::new(PolyRing::new(["p1", "p2"]));
        let lt = ApparentFuchsian::new(
            r.rational(&rat(2, 3)),
            r.rational(&rat(-5, 7)),
            r.rational(&rat(3, 4)),
            vec![(r.rational(&rat(-2, 1)), 1), (r.rational(&rat(5, 2)), 1)],
            vec![r.var("p1").unwrap(), r.var("p2").unwrap()],
        )
        .unwrap();
        let sys = apparency_system(&lt).unwrap();
        let d = |x: &ParamElem<Rational>, i| x.numer().degree_in(i);
        assert_eq!(d(&sys[0], 0), 2);
        assert!(d(&sys[0], 1) <= 1);
        assert_eq!(d(&sys[1], 1), 2);
        assert!(d(&sys[1], 0) <= 1);
        let lc = sys[0].numer().coeffs_in(0).last().unwrap().constant_value().unwrap();
        assert!(lc.is_one_exact());
    }
}
