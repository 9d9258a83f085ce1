//! Right division of the hypergeometric operator by `L~` with symbolic
//! elementary symmetric functions, and the linear solve for them.

use std::sync::Arc;

use super::{ApparentFuchsian, FactorError, VerificationReport};
use crate::exactalg::{select_independent_rows, solve_fraction_free, ExactError, ParamElem, ParamRing, Ring, Scalar};
use crate::ghg::ghg_operator_esym_sp;
use crate::heun::Coeff;
use crate::oredop::zfrac::ptaylor_shift;
use crate::oredop::{DiffOp, Poles, ZFrac};

/// `b + sum_j a_j e_j` with coefficients in the instance ring.
#[derive(Clone, Debug)]
pub struct LinearForm<F> {
    pub constant: ParamElem<F>,
    pub coeffs: Vec<ParamElem<F>>,
}

impl<F: Scalar> LinearForm<F> {
    pub fn eval(&self, e: &[ParamElem<F>]) -> ParamElem<F> {
        self.coeffs.iter().zip(e).fold(self.constant.clone(), |acc, (a, x)| acc.add_ref(&a.mul_ref(x)))
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(|a| a.is_zero())
    }
}

/// Quotient `D~` (coefficients `v_0 .. v_{N-1}`, `v_N = 1`) and remainder
/// `w_1 D + w_0` of `L_GHG = D~ L~ + w_1 D + w_0`, with the `𝔢_j` kept as
/// the ring variables `e1, .., eN`.
#[derive(Clone, Debug)]
pub struct FactorizationWork<F> {
    /// Instance ring without modulus.
    pub base: Arc<ParamRing<F>>,
    /// `base` extended by `e1, .., eN`.
    pub ring: Arc<ParamRing<F>>,
    pub e_idx: Vec<usize>,
    pub poles: Arc<Poles<ParamElem<F>>>,
    pub quotient: DiffOp<Coeff<F>>,
    pub w1: Coeff<F>,
    pub w0: Coeff<F>,
}

impl<F: Scalar> FactorizationWork<F> {
    pub fn order_n(&self) -> usize {
        self.e_idx.len()
    }

    pub fn v_coeffs(&self) -> &[Coeff<F>] {
        self.quotient.coeffs()
    }

    /// Split an element of `ring` into its linear form in the `e_j`.
    pub fn linear_form(&self, x: &ParamElem<F>) -> Result<LinearForm<F>, FactorError> {
        let zero: Vec<(usize, F)> = self.e_idx.iter().map(|&i| (i, F::zero())).collect();
        let vars = self.base.vars();
        let down = |p: crate::exactalg::MultiPoly<F>| -> Result<ParamElem<F>, FactorError> {
            Ok(ParamElem::from_parts(&self.base, p.embed(vars)?, x.den_exponents().to_vec()))
        };
        for &i in &self.e_idx {
            if x.numer().degree_in(i) > 1 {
                return Err(ExactError::Dimension("remainder is not linear in the symmetric functions".into()).into());
            }
        }
        let constant = down(x.numer().eval_partial(&zero))?;
        let coeffs = self
            .e_idx
            .iter()
            .map(|&i| down(x.numer().derivative(i).eval_partial(&zero)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinearForm { constant, coeffs })
    }

    fn forms_of(&self, num: &[ParamElem<F>]) -> Result<Vec<LinearForm<F>>, FactorError> {
        num.iter().map(|c| self.linear_form(c)).collect()
    }

    /// Numerator coefficients of `w_1` over its own denominator, expanded
    /// about `z = 0` (`M = 1`) or `z = 1` (`M >= 2`).
    pub fn w1_rows(&self, about_one: bool) -> Result<Vec<LinearForm<F>>, FactorError> {
        let num = self.w1.numer_over(self.w1.den_exponents());
        let num = if about_one { ptaylor_shift(&num, &self.ring.one()) } else { num };
        self.forms_of(&num)
    }

    /// Every numerator coefficient of `w_1` and `w_0`, labelled.
    pub fn defect_forms(&self) -> Result<Vec<(String, LinearForm<F>)>, FactorError> {
        let mut out = Vec::new();
        for (name, w) in [("w1", &self.w1), ("w0", &self.w0)] {
            let num = w.numer_over(w.den_exponents());
            for (k, f) in self.forms_of(&num)?.into_iter().enumerate() {
                out.push((format!("{name}: coefficient of z^{k}"), f));
            }
        }
        Ok(out)
    }

    /// Quotient coefficients as linear forms, indexed `[j][k]` for the
    /// `z^k` numerator coefficient of `v_j`.
    pub fn quotient_forms(&self) -> Result<Vec<(Vec<u32>, Vec<LinearForm<F>>)>, FactorError> {
        self.quotient
            .coeffs()
            .iter()
            .map(|c| Ok((c.den_exponents().to_vec(), self.forms_of(c.numer())?)))
            .collect()
    }

    /// `D~` with the given `𝔢` substituted, over `ring`'s value ring.
    pub fn quotient_at(&self, e: &[ParamElem<F>], target: &Arc<ParamRing<F>>) -> Result<DiffOp<Coeff<F>>, FactorError> {
        let poles = rehome_poles(&self.poles, target)?;
        let one = target.one();
        let mut coeffs = Vec::new();
        for (den, forms) in self.quotient_forms()? {
            let num = forms.iter().map(|f| f.eval(e).rehome(target)).collect::<Result<Vec<_>, _>>()?;
            coeffs.push(ZFrac::from_parts(&poles, num, den, &one).simplify());
        }
        Ok(DiffOp::new(coeffs, &ZFrac::constant(&poles, one)))
    }
}

pub(crate) fn rehome_poles<F: Scalar>(
    poles: &Arc<Poles<ParamElem<F>>>,
    ring: &Arc<ParamRing<F>>,
) -> Result<Arc<Poles<ParamElem<F>>>, ExactError> {
    let values = poles.values().iter().map(|p| p.rehome(ring)).collect::<Result<Vec<_>, _>>()?;
    let labels = values.iter().map(|v| v.to_string()).collect();
    Ok(Poles::new(poles.var(), values, labels))
}

/// Right-divide `L_GHG` (with symbolic `𝔢`) by `L~`.
pub fn defect_symbolic<F: Scalar>(lt: &ApparentFuchsian<F>) -> Result<FactorizationWork<F>, FactorError> {
    let n = lt.order_n() as usize;
    let base = lt.gamma.ring().without_modulus();
    let names: Vec<String> = (1..=n).map(|j| format!("e{j}")).collect();
    for nm in &names {
        if base.vars().index_of(nm).is_some() {
            return Err(ExactError::Dimension(format!("instance ring already uses the name {nm}")).into());
        }
    }
    let ring = base.extend(&names)?;
    let e_idx: Vec<usize> = names.iter().map(|nm| ring.vars().index_of(nm).unwrap()).collect();
    let lt_ext = lt.rehome(&ring)?;
    let poles = lt_ext.poles();
    let esym: Vec<ParamElem<F>> = names.iter().map(|nm| ring.var(nm)).collect::<Result<_, _>>()?;
    let lg = ghg_operator_esym_sp(&lt_ext.ab_sum, &lt_ext.ab_prod, &lt_ext.gamma, &esym, &poles)?;
    let (quotient, rem) = lg.right_divide(&lt_ext.operator_on(&poles))?;
    let w1 = rem.coeff(1).simplify();
    let w0 = rem.coeff(0).simplify();
    Ok(FactorizationWork { base, ring, e_idx, poles, quotient, w1, w0 })
}

/// Solved `𝔢_1 .. 𝔢_N` and the rows used.
#[derive(Clone, Debug)]
pub struct EsymVector<F> {
    pub esym: Vec<ParamElem<F>>,
    pub rows: Vec<usize>,
    pub det: ParamElem<F>,
}

fn solve_rows<F: Scalar>(rows: &[LinearForm<F>], pick: &[usize]) -> Result<EsymVector<F>, FactorError> {
    let a: Vec<Vec<ParamElem<F>>> = pick.iter().map(|&i| rows[i].coeffs.clone()).collect();
    let b: Vec<ParamElem<F>> = pick.iter().map(|&i| rows[i].constant.negate()).collect();
    let ff = solve_fraction_free(&a, &b).map_err(|e| match e {
        ExactError::Singular { rank, size } => FactorError::Degenerate { rank, size },
        other => other.into(),
    })?;
    // A non-unit determinant is fine as long as it divides every numerator.
    let esym = ff
        .numerators
        .iter()
        .map(|x| x.exact_div(&ff.det))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| FactorError::NonUnitDeterminant(ff.det.to_string()))?;
    Ok(EsymVector { esym, rows: pick.to_vec(), det: ff.det })
}

/// Solve the `w_1` system for `𝔢` from the first `N` numerator
/// coefficients, falling back to a maximal-rank subset in row order.
pub fn solve_esym_from<F: Scalar>(work: &FactorizationWork<F>, about_one: bool) -> Result<EsymVector<F>, FactorError> {
    let n = work.order_n();
    let rows = work.w1_rows(about_one)?;
    if rows.len() >= n {
        let first: Vec<usize> = (0..n).collect();
        match solve_rows(&rows, &first) {
            Ok(s) => return Ok(s),
            Err(FactorError::Degenerate { .. }) | Err(FactorError::NonUnitDeterminant(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mat: Vec<Vec<ParamElem<F>>> = rows.iter().map(|r| r.coeffs.clone()).collect();
    let pick = select_independent_rows(&mat, n, 1e-40);
    if pick.len() < n {
        return Err(FactorError::Degenerate { rank: pick.len(), size: n });
    }
    solve_rows(&rows, &pick)
}

/// `𝔢` for a supported profile.
pub fn solve_esym<F: Scalar>(lt: &ApparentFuchsian<F>) -> Result<(FactorizationWork<F>, EsymVector<F>), FactorError> {
    let profile = lt.profile();
    if !super::profile_supported(&profile) {
        return Err(FactorError::Unsupported(profile));
    }
    let work = defect_symbolic(lt)?;
    let sol = solve_esym_from(&work, lt.sing.len() >= 2)?;
    Ok((work, sol))
}

/// Outcome of an exact verification: nonzero defect coefficients after
/// reduction in the instance ring (with its modulus, if any).
#[derive(Clone, Debug)]
pub struct ExactVerification<F> {
    pub esym: Vec<ParamElem<F>>,
    pub offending: Vec<(String, ParamElem<F>)>,
    pub quotient: DiffOp<Coeff<F>>,
}

impl<F> ExactVerification<F> {
    pub fn pass(&self) -> bool {
        self.offending.is_empty()
    }
}

impl<F: Scalar> ExactVerification<F> {
    /// `defect_max` is `"0"` on success; otherwise the first offending
    /// coefficient is reported.
    pub fn report(&self, profile: Vec<u32>) -> VerificationReport {
        VerificationReport {
            mode: "exact".into(),
            profile,
            esym: self.esym.iter().map(|e| e.to_string()).collect(),
            defect_max: if self.pass() { "0".into() } else { "nonzero".into() },
            pass: self.pass(),
            quotient_operator: self.quotient.to_string(),
            offending: self.offending.first().map(|(label, v)| format!("{label}: {v}")),
        }
    }
}

/// Substitute `esym` into every defect coefficient and reduce in the ring
/// of `lt` (which carries the apparency modulus for symbolic `M = 1`).
pub fn verify_factorization<F: Scalar>(
    lt: &ApparentFuchsian<F>,
    work: &FactorizationWork<F>,
    esym: &[ParamElem<F>],
) -> Result<ExactVerification<F>, FactorError> {
    let target = lt.gamma.ring().clone();
    let mut offending = Vec::new();
    let esym_t: Vec<ParamElem<F>> = esym.iter().map(|x| x.rehome(&target)).collect::<Result<_, _>>()?;
    let esym_b: Vec<ParamElem<F>> = esym.iter().map(|x| x.rehome(&work.base)).collect::<Result<_, _>>()?;
    for (label, form) in work.defect_forms()? {
        let v = form.eval(&esym_b).rehome(&target)?;
        if !v.is_zero() {
            offending.push((label, v));
        }
    }
    let quotient = work.quotient_at(&esym_b, &target)?;
    Ok(ExactVerification { esym: esym_t, offending, quotient })
}

/// `solve_esym` followed by `verify_factorization`.
pub fn verify_exact<F: Scalar>(lt: &ApparentFuchsian<F>) -> Result<ExactVerification<F>, FactorError> {
    let (work, sol) = solve_esym(lt)?;
    verify_factorization(lt, &work, &sol.esym)
}
