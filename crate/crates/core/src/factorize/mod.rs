//! Factorization of generalized hypergeometric operators through
//! second-order Fuchsian operators with apparent singularities:
//! `L_{a, b, e_1+1, .., e_N+1; c, e_1, .., e_N} = D~ L~`.
//!
//! The operator `L~` has singular points `0, 1, t_1, .., t_M` with exponents
//! `0, m_k + 1` at `t_k`, and `N = m_1 + .. + m_M`. Since the hypergeometric
//! operator depends linearly on the elementary symmetric functions `𝔢_j` of
//! the `e_i`, so does the remainder of its right division by `L~`; the `𝔢_j`
//! are found from a linear system and the remaining coefficients are then
//! checked against the apparency conditions.

pub mod apparency;
pub mod closed;
pub mod elim;
pub mod numeric;
pub mod report;

use std::sync::Arc;

use thiserror::Error;

pub use apparency::{apparency_system, local_obstruction};
pub use closed::{check_apparent, maier_e1, maier_e1_formula, maier_quotient, eps2_e1e2, eps2_formula, eps2_left_factor, Eps2ClosedForm};
pub use elim::{
    defect_symbolic, solve_esym, solve_esym_from, verify_exact, verify_factorization, EsymVector, ExactVerification, FactorizationWork,
    LinearForm,
};
pub use numeric::{random_instance, verify_numeric, NumericInstance, NumericOptions};
pub use report::VerificationReport;

use crate::exactalg::{ExactError, ParamElem, ParamRing, Ring, Scalar};
use crate::ghg::GhgError;
use crate::heun::{as_integer, Coeff, HeunError, HeunParams};
use crate::oredop::{DiffOp, OreError, Poles, ZFrac};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FactorError {
    #[error("singular points must be distinct from each other and from 0, 1")]
    CoincidentPoints,
    #[error("multiplicities must be positive")]
    ZeroMultiplicity,
    #[error("profile {0:?} is outside the supported cases")]
    Unsupported(Vec<u32>),
    #[error("apparency violated: residual {0}")]
    NotApparent(String),
    #[error("degenerate instance: the system for the symmetric functions has rank {rank} < {size}")]
    Degenerate { rank: usize, size: usize },
    #[error("determinant `{0}` is not invertible in the parameter ring")]
    NonUnitDeterminant(String),
    #[error("Newton iteration did not converge: {0}")]
    NoConvergence(String),
    #[error(transparent)]
    Heun(#[from] HeunError),
    #[error(transparent)]
    Ghg(#[from] GhgError),
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `L~ = D^2 + (c/z + d/(z-1) - sum m_k/(z-t_k)) D + ab/(z(z-1)) + sum p_k/(z(z-1)(z-t_k))`
/// with `d = a + b - c + N + 1`. Only `a + b` and `ab` enter.
#[derive(Clone, Debug)]
pub struct ApparentFuchsian<F> {
    pub ab_sum: ParamElem<F>,
    pub ab_prod: ParamElem<F>,
    pub gamma: ParamElem<F>,
    pub sing: Vec<(ParamElem<F>, u32)>,
    pub p: Vec<ParamElem<F>>,
}

impl<F: Scalar> ApparentFuchsian<F> {
    pub fn new(
        ab_sum: ParamElem<F>,
        ab_prod: ParamElem<F>,
        gamma: ParamElem<F>,
        sing: Vec<(ParamElem<F>, u32)>,
        p: Vec<ParamElem<F>>,
    ) -> Result<Self, FactorError> {
        if sing.len() != p.len() {
            return Err(ExactError::Dimension(format!("{} singular points, {} residues", sing.len(), p.len())).into());
        }
        if sing.iter().any(|(_, m)| *m == 0) {
            return Err(FactorError::ZeroMultiplicity);
        }
        let r = gamma.ring();
        let mut pts = vec![r.zero(), r.one()];
        for (t, _) in &sing {
            if pts.iter().any(|x| x.sub_ref(t).is_zero()) {
                return Err(FactorError::CoincidentPoints);
            }
            pts.push(t.clone());
        }
        Ok(ApparentFuchsian { ab_sum, ab_prod, gamma, sing, p })
    }

    /// `H_[e=-m]`: Heun's operator with `epsilon = -m`; `p = ab t - q`.
    pub fn from_heun(h: &HeunParams<F>) -> Result<Self, FactorError> {
        let m = match as_integer(&h.epsilon) {
            Some(e) if e < 0 => (-e) as u32,
            _ => return Err(HeunError::NotNonPositiveInteger { name: "epsilon", value: h.epsilon.to_string() }.into()),
        };
        let ab = h.alpha.mul_ref(&h.beta);
        let p = ab.mul_ref(&h.t).sub_ref(&h.q);
        ApparentFuchsian::new(h.alpha.add_ref(&h.beta), ab, h.gamma.clone(), vec![(h.t.clone(), m)], vec![p])
    }

    /// From the numerator `s_M z^M + .. + s_0` over `z(z-1) prod (z-t_k)`,
    /// with `ab = s_M` and `a + b = d + c - N - 1`.
    pub fn from_s_form(gamma: ParamElem<F>, delta: ParamElem<F>, sing: Vec<(ParamElem<F>, u32)>, s: &[ParamElem<F>]) -> Result<Self, FactorError> {
        let m = sing.len();
        if s.len() != m + 1 {
            return Err(ExactError::Dimension(format!("expected {} numerator coefficients", m + 1)).into());
        }
        let r = gamma.ring().clone();
        let n: u32 = sing.iter().map(|x| x.1).sum();
        let ab_sum = delta.add_ref(&gamma).sub_ref(&r.int(n as i64 + 1));
        let mut p = Vec::with_capacity(m);
        for k in 0..m {
            let tk = &sing[k].0;
            let val = s.iter().rev().fold(r.zero(), |acc, c| acc.mul_ref(tk).add_ref(c));
            let mut den = r.one();
            for (j, (tj, _)) in sing.iter().enumerate() {
                if j != k {
                    den = den.mul_ref(&tk.sub_ref(tj));
                }
            }
            let inv = den.try_inverse().ok_or(FactorError::CoincidentPoints)?;
            p.push(val.mul_ref(&inv));
        }
        ApparentFuchsian::new(ab_sum, s[m].clone(), gamma, sing, p)
    }

    pub fn profile(&self) -> Vec<u32> {
        self.sing.iter().map(|x| x.1).collect()
    }

    pub fn order_n(&self) -> u32 {
        self.sing.iter().map(|x| x.1).sum()
    }

    pub fn delta(&self) -> ParamElem<F> {
        let r = self.gamma.ring();
        self.ab_sum.sub_ref(&self.gamma).add_ref(&r.int(self.order_n() as i64 + 1))
    }

    /// `[0, 1, t_1, .., t_M]`.
    pub fn poles(&self) -> Arc<Poles<ParamElem<F>>> {
        let r = self.gamma.ring();
        let mut v = vec![r.zero(), r.one()];
        let mut labels = vec!["0".to_string(), "1".to_string()];
        for (t, _) in &self.sing {
            v.push(t.clone());
            labels.push(t.to_string());
        }
        Poles::new("z", v, labels)
    }

    pub fn operator_on(&self, poles: &Arc<Poles<ParamElem<F>>>) -> DiffOp<Coeff<F>> {
        let r = self.gamma.ring();
        let one = r.one();
        let k = poles.len();
        let frac = |c: ParamElem<F>, idx: &[usize]| {
            let mut den = vec![0; k];
            for &i in idx {
                den[i] = 1;
            }
            ZFrac::from_parts(poles, vec![c], den, &one)
        };
        let mut a = frac(self.gamma.clone(), &[0]).add(&frac(self.delta(), &[1]));
        let mut b = frac(self.ab_prod.clone(), &[0, 1]);
        for (j, ((_, m), pj)) in self.sing.iter().zip(&self.p).enumerate() {
            a = a.add(&frac(r.int(-(*m as i64)), &[2 + j]));
            b = b.add(&frac(pj.clone(), &[0, 1, 2 + j]));
        }
        DiffOp::new(vec![b, a, ZFrac::constant(poles, one.clone())], &ZFrac::constant(poles, one))
    }

    pub fn operator(&self) -> DiffOp<Coeff<F>> {
        self.operator_on(&self.poles())
    }

    /// The same instance in another ring with the same units.
    pub fn rehome(&self, ring: &Arc<ParamRing<F>>) -> Result<Self, ExactError> {
        let h = |x: &ParamElem<F>| x.rehome(ring);
        Ok(ApparentFuchsian {
            ab_sum: h(&self.ab_sum)?,
            ab_prod: h(&self.ab_prod)?,
            gamma: h(&self.gamma)?,
            sing: self.sing.iter().map(|(t, m)| Ok((h(t)?, *m))).collect::<Result<_, ExactError>>()?,
            p: self.p.iter().map(h).collect::<Result<_, _>>()?,
        })
    }

    /// Same operator with other residues.
    pub fn with_p(&self, p: Vec<ParamElem<F>>) -> Self {
        ApparentFuchsian { p, ..self.clone() }
    }
}

/// Profiles covered by the default verification: `M = 1, m <= 5`;
/// `M = 2, m_1 + m_2 <= 4`; `M = 3, m = (1, 1, 1)`.
pub fn profile_supported(profile: &[u32]) -> bool {
    match profile.len() {
        1 => (1..=5).contains(&profile[0]),
        2 => profile.iter().all(|&m| m >= 1) && profile.iter().sum::<u32>() <= 4,
        3 => profile.iter().all(|&m| m == 1),
        _ => false,
    }
}
