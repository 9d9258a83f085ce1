//! Least-squares fits of Heun solutions against sums of Gauss
//! hypergeometric functions at `z = 0` and `z = 1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::{local_pair_at_zero, NumError, NumHeun};

/// `2F1(a, b; c; z)` by direct summation, `|z| < 1`.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = sum;
    let mut quiet = 0;
    for n in 0..20_000 {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum
}

/// Which six functions to fit against (`k = 0, 1, 2` in each family).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FitBasis {
    /// `z^(1-g+k) F(a-g+1, b-g+k+1; 2-g+k; z)` and
    /// `(1-z)^(g-a-b+k) F(g-a+k, g-b; g-a-b+k+1; 1-z)`.
    AlphaGamma,
    /// `z^(1-g+k) F(d-b, b-g+k+1; 2-g+k; z)` and
    /// `(1-z)^(1-d+k) F(g-b, b-d+k+1; 2-d+k; 1-z)`; coincides with
    /// `AlphaGamma` at `e = 0`.
    DeltaBeta,
}

impl FitBasis {
    fn eval(&self, p: &NumHeun, z: Complex64) -> [Complex64; 6] {
        let (a, b, g, d) = (p.alpha, p.beta, p.gamma, p.delta);
        let mut out = [Complex64::new(0.0, 0.0); 6];
        let w = 1.0 - z;
        for k in 0..3 {
            let kf = k as f64;
            let (f, h) = match self {
                FitBasis::AlphaGamma => (
                    z.powc(1.0 - g + kf) * hyp2f1(a - g + 1.0, b - g + kf + 1.0, 2.0 - g + kf, z),
                    w.powc(g - a - b + kf) * hyp2f1(g - a + kf, g - b, g - a - b + kf + 1.0, w),
                ),
                FitBasis::DeltaBeta => (
                    z.powc(1.0 - g + kf) * hyp2f1(d - b, b - g + kf + 1.0, 2.0 - g + kf, z),
                    w.powc(1.0 - d + kf) * hyp2f1(g - b, b - d + kf + 1.0, 2.0 - d + kf, w),
                ),
            };
            out[k] = f;
            out[3 + k] = h;
        }
        out
    }
}

/// Fitted coefficients for both local solutions at 0 (exponents 0 and
/// `1 - g`) and the worst relative residual at held-out points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub basis: FitBasis,
    pub coefficients: [[Complex64; 6]; 2],
    pub residual: f64,
    pub condition: f64,
}

const MAX_CONDITION: f64 = 1e13;
const SERIES_TERMS: usize = 400;

fn near_integer(x: Complex64) -> bool {
    x.im.abs() < 1e-9 && (x.re - x.re.round()).abs() < 1e-9
}

/// Points in a small disc inside both `|z| < min(1, |t|)` and `|1 - z| < 1`.
pub fn default_samples(p: &NumHeun) -> Vec<Complex64> {
    let rho = p.t.norm().min(1.0);
    let center = Complex64::new(0.5 * rho, 0.0);
    let mut out = Vec::new();
    for (j, r) in [0.08, 0.15, 0.2].iter().enumerate() {
        for i in 0..10 {
            let th = (i as f64 + 0.37 * j as f64) * std::f64::consts::TAU / 10.0;
            out.push(center + Complex64::from_polar(r * rho, th));
        }
    }
    out
}

/// Least-squares fit of `f` on the six basis functions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub coefficients: [Complex64; 6],
    /// Worst `|f - fit|` at held-out points relative to the largest `|f|` there.
    pub residual: f64,
    pub condition: f64,
}

fn check_samples(p: &NumHeun, samples: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>), NumError> {
    let rho = p.t.norm().min(1.0);
    for &z in samples {
        if z.norm() >= 0.9 * rho || (1.0 - z).norm() >= 1.0 || z.im == 0.0 && z.re <= 0.0 {
            return Err(NumError::BadSample(z));
        }
    }
    let fit: Vec<_> = samples.iter().step_by(2).copied().collect();
    let held: Vec<_> = samples.iter().skip(1).step_by(2).copied().collect();
    if fit.len() < 8 || held.is_empty() {
        return Err(NumError::Precondition(format!("need at least 8 fit points, got {}", fit.len())));
    }
    Ok((fit, held))
}

/// Fit `f` using the even-indexed samples; score it on the odd-indexed ones.
pub fn fit_function(
    p: &NumHeun,
    basis: FitBasis,
    samples: &[Complex64],
    f: impl Fn(Complex64) -> Complex64,
) -> Result<Fit, NumError> {
    let (fit, held) = check_samples(p, samples)?;
    let rows: Vec<[Complex64; 6]> = fit.iter().map(|&z| basis.eval(p, z)).collect();
    let mut scale = [0.0f64; 6];
    for r in &rows {
        for j in 0..6 {
            scale[j] = scale[j].max(r[j].norm());
        }
    }
    let a = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j] / scale[j]);
    let svd = a.svd(true, true);
    let condition = svd.singular_values.max() / svd.singular_values.min();
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(NumError::IllConditioned(condition));
    }
    let rhs = DVector::from_iterator(fit.len(), fit.iter().map(|&z| f(z)));
    let x = svd.solve(&rhs, 0.0).map_err(|e| NumError::Precondition(e.to_string()))?;
    let mut coefficients = [Complex64::new(0.0, 0.0); 6];
    for j in 0..6 {
        coefficients[j] = x[j] / scale[j];
    }
    let (mut worst, mut size) = (0.0f64, 0.0f64);
    for &z in &held {
        let y = f(z);
        let b = basis.eval(p, z);
        let approx: Complex64 = (0..6).map(|j| coefficients[j] * b[j]).sum();
        worst = worst.max((y - approx).norm());
        size = size.max(y.norm());
    }
    Ok(Fit { coefficients, residual: worst / size, condition })
}

/// Fit both local solutions at 0 against the six basis functions.
/// Requires `e = -2` and `a, b, b - g, b - d` non-integer.
pub fn decompose_2f1(p: &NumHeun, basis: FitBasis, samples: &[Complex64]) -> Result<Decomposition, NumError> {
    if (p.epsilon + 2.0).norm() > 1e-12 {
        return Err(NumError::Precondition(format!("epsilon must be -2, got {}", p.epsilon)));
    }
    for (name, x) in [("alpha", p.alpha), ("beta", p.beta), ("beta - gamma", p.beta - p.gamma), ("beta - delta", p.beta - p.delta)] {
        if near_integer(x) {
            return Err(NumError::Precondition(format!("{name} = {x} is an integer")));
        }
    }
    let mut coefficients = [[Complex64::new(0.0, 0.0); 6]; 2];
    let (mut residual, mut condition) = (0.0f64, 0.0);
    for (s, out) in coefficients.iter_mut().enumerate() {
        let fit = fit_function(p, basis, samples, |z| local_pair_at_zero(p, z, SERIES_TERMS)[s].0)?;
        *out = fit.coefficients;
        residual = residual.max(fit.residual);
        condition = fit.condition;
    }
    Ok(Decomposition { basis, coefficients, residual, condition })
}

/// The six basis functions at `z`.
pub fn basis_values(p: &NumHeun, basis: FitBasis, z: Complex64) -> [Complex64; 6] {
    basis.eval(p, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::rat;
    use crate::heun::{HeunSpec, ParamValue};
    use crate::numcheck::{apparent_q_roots, num_params_with_q};

    fn ep2(a: (i64, i64), b: (i64, i64), g: (i64, i64), t: (i64, i64)) -> (crate::heun::HeunParams<crate::Rational>, Vec<Complex64>) {
        let p = HeunSpec {
            alpha: ParamValue::rational(&rat(a.0, a.1)),
            beta: ParamValue::rational(&rat(b.0, b.1)),
            gamma: ParamValue::rational(&rat(g.0, g.1)),
            delta: None,
            epsilon: ParamValue::int(-2),
            q: ParamValue::sym("q"),
            t: ParamValue::rational(&rat(t.0, t.1)),
        }
        .build(&[])
        .unwrap();
        let roots = apparent_q_roots(&p).unwrap();
        (p, roots)
    }

    fn instances() -> Vec<((i64, i64), (i64, i64), (i64, i64), (i64, i64))> {
        vec![
            ((1, 3), (2, 5), (3, 7), (3, 2)),
            ((-5, 4), (7, 3), (1, 6), (5, 2)),
            ((2, 7), (-1, 3), (5, 4), (-3, 2)),
        ]
    }

    #[test]
    fn apparent_instances_fit() {
        for inst in instances() {
            let (p, roots) = ep2(inst.0, inst.1, inst.2, inst.3);
            assert_eq!(roots.len(), 3);
            for q in roots {
                let n = num_params_with_q(&p, q).unwrap();
                let d = decompose_2f1(&n, FitBasis::DeltaBeta, &default_samples(&n)).unwrap();
                assert!(d.residual < 1e-8, "{inst:?}: {}", d.residual);
            }
        }
    }

    #[test]
    fn broken_apparency_fails_bound() {
        for inst in instances() {
            let (p, _) = ep2(inst.0, inst.1, inst.2, inst.3);
            let n = num_params_with_q(&p, Complex64::new(0.37, 0.0)).unwrap();
            let d = decompose_2f1(&n, FitBasis::DeltaBeta, &default_samples(&n)).unwrap();
            assert!(d.residual > 1e-8, "{inst:?}: {}", d.residual);
        }
    }

    #[test]
    fn alpha_gamma_form_misses_at_minus_two() {
        // The epsilon = 0 form of the basis does not span the solutions here.
        let (p, roots) = ep2((1, 3), (2, 5), (3, 7), (3, 2));
        let n = num_params_with_q(&p, roots[0]).unwrap();
        let d = decompose_2f1(&n, FitBasis::AlphaGamma, &default_samples(&n)).unwrap();
        assert!(d.residual > 1e-4);
    }

    #[test]
    fn single_basis_element() {
        let (p, roots) = ep2((1, 3), (2, 5), (3, 7), (3, 2));
        let n = num_params_with_q(&p, roots[0]).unwrap();
        let fit = fit_function(&n, FitBasis::DeltaBeta, &default_samples(&n), |z| basis_values(&n, FitBasis::DeltaBeta, z)[4] * 2.5).unwrap();
        assert!((fit.coefficients[4] - 2.5).norm() < 1e-8);
        for (j, c) in fit.coefficients.iter().enumerate() {
            if j != 4 {
                assert!(c.norm() < 1e-8);
            }
        }
    }

    #[test]
    fn rejects_wrong_epsilon_and_samples() {
        let n = NumHeun::new(Complex64::new(0.3, 0.0), Complex64::new(0.4, 0.0), Complex64::new(0.2, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.1, 0.0), Complex64::new(2.0, 0.0));
        assert!(matches!(decompose_2f1(&n, FitBasis::DeltaBeta, &default_samples(&n)), Err(NumError::Precondition(_))));
        let m = NumHeun { epsilon: Complex64::new(-2.0, 0.0), ..n };
        assert!(matches!(decompose_2f1(&m, FitBasis::DeltaBeta, &[Complex64::new(1.5, 0.0)]), Err(NumError::BadSample(_))));
    }
}
