//! High-precision numeric verification: the residues `p_k` are found by
//! Newton's method on the apparency system and the symmetric functions by
//! solving the `w_1` rows at that point. The remainder `w_1 D + w_0` is
//! computed exactly with `p_k` and `𝔢_j` symbolic, so only the final
//! evaluation is inexact.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::apparency::{apparency_system, var_index};
use super::elim::{defect_symbolic, FactorizationWork, LinearForm};
use super::report::VerificationReport;
use super::{ApparentFuchsian, FactorError};
use crate::exactalg::scalar::{hp_abs, hp_from_c64, hp_from_rational, hp_to_c64, rat};
use crate::exactalg::{select_independent_rows, solve_linear, HpComplex, HpFloat, MultiPoly, ParamElem, ParamRing, PolyRing, Rational, UPoly};
use crate::oredop::{DiffOp, Poles, ZFrac};

#[derive(Clone, Debug)]
pub struct NumericOptions {
    pub bits: usize,
    /// Relative residual required of the Newton solution.
    pub newton_tol: f64,
    /// Relative defect below which the factorization is accepted.
    pub defect_tol: f64,
    pub starts: usize,
    pub max_iter: usize,
    pub seed: u64,
    /// Shift applied to `q_1 = ab t_1 - p_1` after Newton, to break apparency.
    pub perturb: Option<Rational>,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions { bits: 300, newton_tol: 1e-70, defect_tol: 1e-60, starts: 200, max_iter: 400, seed: 0, perturb: None }
    }
}

/// A verified numeric instance.
#[derive(Clone, Debug)]
pub struct NumericInstance {
    pub p: Vec<HpComplex>,
    pub esym: Vec<HpComplex>,
    pub newton_residual: f64,
    pub defect_max: f64,
    pub report: VerificationReport,
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(1..=6i64);
    let n = rng.gen_range(-24..=24i64);
    rat(n, d)
}

/// Random `a, b, c` and singular points `t_k` with symbolic residues
/// `p1, .., pM`. Parameters are kept away from integers and the points away
/// from each other and from `0, 1`.
pub fn random_instance(profile: &[u32], seed: u64) -> Result<ApparentFuchsian<Rational>, FactorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (1..=profile.len()).map(|k| format!("p{k}")).collect();
    let ring = ParamRing::<Rational>::new(PolyRing::new(names.clone()));
    let non_int = |rng: &mut ChaCha8Rng| loop {
        let x = small_rational(rng);
        if !x.is_integer() {
            return x;
        }
    };
    let (a, b, c) = (non_int(&mut rng), non_int(&mut rng), non_int(&mut rng));
    let mut pts: Vec<Rational> = vec![rat(0, 1), rat(1, 1)];
    let mut sing = Vec::new();
    for &m in profile {
        let t = loop {
            let x = small_rational(&mut rng);
            if pts.iter().all(|y| (&x - y).abs() >= rat(1, 3)) {
                break x;
            }
        };
        pts.push(t.clone());
        sing.push((ring.rational(&t), m));
    }
    let p = names.iter().map(|n| ring.var(n)).collect::<Result<Vec<_>, _>>()?;
    ApparentFuchsian::new(ring.rational(&(&a + &b)), ring.rational(&(&a * &b)), ring.rational(&c), sing, p)
}

struct HpPoly {
    value: MultiPoly<HpComplex>,
    abs: MultiPoly<HpComplex>,
}

impl HpPoly {
    fn new(p: &MultiPoly<Rational>, bits: usize) -> Self {
        HpPoly { value: p.map_coeffs(|c| hp_from_rational(c, bits)), abs: p.map_coeffs(|c| hp_from_rational(&c.abs(), bits)) }
    }

    /// Value and the sum of absolute values of its terms.
    fn eval(&self, x: &[HpComplex], xabs: &[HpComplex]) -> (HpComplex, HpFloat) {
        (self.value.eval(x), self.abs.eval(xabs).re)
    }
}

fn abs_point(x: &[HpComplex]) -> Vec<HpComplex> {
    x.iter().map(|v| HpComplex::new(hp_abs(v), HpFloat::zero())).collect()
}

fn rel(v: &HpComplex, scale: &HpFloat) -> f64 {
    let a = hp_abs(v);
    if a.is_zero() {
        return 0.0;
    }
    if scale.is_zero() {
        return f64::INFINITY;
    }
    (a / scale.clone()).to_f64()
}

/// Polynomial in the residue variables; the ring must have no units.
fn as_poly(x: &ParamElem<Rational>) -> Result<&MultiPoly<Rational>, FactorError> {
    if !x.is_polynomial() {
        return Err(FactorError::Exact(crate::exactalg::ExactError::Dimension("numeric path needs polynomial coefficients".into())));
    }
    Ok(x.numer())
}

/// Newton's method on the apparency system from seeded starts.
fn newton(
    sys: &[MultiPoly<Rational>],
    nvars: usize,
    opts: &NumericOptions,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<HpComplex>, f64), FactorError> {
    let bits = opts.bits;
    let f: Vec<HpPoly> = sys.iter().map(|p| HpPoly::new(p, bits)).collect();
    let jac: Vec<Vec<MultiPoly<HpComplex>>> =
        sys.iter().map(|p| (0..nvars).map(|i| p.derivative(i).map_coeffs(|c| hp_from_rational(c, bits))).collect()).collect();
    let residual = |x: &[HpComplex]| -> (Vec<HpComplex>, f64) {
        let xa = abs_point(x);
        let mut worst = 0.0f64;
        let vals = f
            .iter()
            .map(|p| {
                let (v, s) = p.eval(x, &xa);
                worst = worst.max(rel(&v, &s));
                v
            })
            .collect();
        (vals, worst)
    };
    let mut seeds: Vec<Vec<Complex64>> = Vec::new();
    if nvars == 1 {
        let u = UPoly::from_multi(&sys[0], 0)?;
        for r in u.to_c64().roots() {
            seeds.push(vec![r]);
        }
    }
    let mut best: Option<(Vec<HpComplex>, f64)> = None;
    for k in 0..opts.starts.max(seeds.len()) {
        let start: Vec<Complex64> = match seeds.get(k) {
            Some(s) => s.clone(),
            None => {
                let radius = 10f64.powf(rng.gen_range(-0.5..2.0));
                (0..nvars).map(|_| Complex64::from_polar(radius * rng.gen::<f64>(), rng.gen_range(0.0..std::f64::consts::TAU))).collect()
            }
        };
        let mut x: Vec<HpComplex> = start.iter().map(|z| hp_from_c64(*z, bits)).collect();
        let (mut fx, mut res) = residual(&x);
        for _ in 0..opts.max_iter {
            if res < opts.newton_tol {
                break;
            }
            let j: Vec<Vec<HpComplex>> = jac.iter().map(|row| row.iter().map(|d| d.eval(&x)).collect()).collect();
            let rhs: Vec<HpComplex> = fx.iter().map(|v| -v.clone()).collect();
            let Ok(step) = solve_linear(&j, &rhs) else { break };
            // Damped step: halve until the residual does not grow.
            let mut lambda = HpComplex::new(HpFloat::from_rational_prec(&rat(1, 1), bits), HpFloat::zero());
            let half = HpComplex::new(HpFloat::from_rational_prec(&rat(1, 2), bits), HpFloat::zero());
            let mut accepted = false;
            for _ in 0..30 {
                let y: Vec<HpComplex> = x.iter().zip(&step).map(|(a, s)| a.clone() + lambda.clone() * s.clone()).collect();
                let (fy, ry) = residual(&y);
                if ry <= res || ry < opts.newton_tol {
                    x = y;
                    fx = fy;
                    res = ry;
                    accepted = true;
                    break;
                }
                lambda = lambda * half.clone();
            }
            if !accepted {
                break;
            }
        }
        if res < opts.newton_tol {
            return Ok((x, res));
        }
        if best.as_ref().is_none_or(|b| res < b.1) {
            best = Some((x, res));
        }
    }
    Err(FactorError::NoConvergence(format!("best relative residual {:.3e}", best.map_or(f64::INFINITY, |b| b.1))))
}

fn eval_form(form: &LinearForm<Rational>, x: &[HpComplex], xa: &[HpComplex], bits: usize) -> Result<(HpComplex, Vec<HpComplex>, HpFloat, Vec<HpFloat>), FactorError> {
    let (b, bs) = HpPoly::new(as_poly(&form.constant)?, bits).eval(x, xa);
    let mut a = Vec::new();
    let mut asc = Vec::new();
    for c in &form.coeffs {
        let (v, s) = HpPoly::new(as_poly(c)?, bits).eval(x, xa);
        a.push(v);
        asc.push(s);
    }
    Ok((b, a, bs, asc))
}

/// Relative size of `b + sum a_j e_j` against its terms.
fn form_defect(form: &LinearForm<Rational>, x: &[HpComplex], xa: &[HpComplex], e: &[HpComplex], bits: usize) -> Result<f64, FactorError> {
    let (b, a, bs, asc) = eval_form(form, x, xa, bits)?;
    let mut v = b;
    let mut scale = bs;
    for ((aj, sj), ej) in a.iter().zip(&asc).zip(e) {
        v = v + aj.clone() * ej.clone();
        scale = scale + sj.clone() * hp_abs(ej);
    }
    Ok(rel(&v, &scale))
}

fn solve_numeric(work: &FactorizationWork<Rational>, about_one: bool, x: &[HpComplex], bits: usize) -> Result<Vec<HpComplex>, FactorError> {
    let n = work.order_n();
    let xa = abs_point(x);
    let rows = work.w1_rows(about_one)?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in &rows {
        let (c, coeffs, _, _) = eval_form(r, x, &xa, bits)?;
        a.push(coeffs);
        b.push(-c);
    }
    let pick = select_independent_rows(&a, n, 1e-40);
    if pick.len() < n {
        return Err(FactorError::Degenerate { rank: pick.len(), size: n });
    }
    // Prefer the leading rows when they are independent.
    let first: Vec<usize> = (0..n).collect();
    let use_rows = if select_independent_rows(&a[..n.min(a.len())], n, 1e-40).len() == n { first } else { pick };
    let am: Vec<Vec<HpComplex>> = use_rows.iter().map(|&i| a[i].clone()).collect();
    let bm: Vec<HpComplex> = use_rows.iter().map(|&i| b[i].clone()).collect();
    Ok(solve_linear(&am, &bm)?)
}

fn fmt_c(z: &HpComplex) -> String {
    let c = hp_to_c64(z);
    if c.im == 0.0 {
        format!("{:.15e}", c.re)
    } else {
        format!("{:.15e}{:+.15e}i", c.re, c.im)
    }
}

fn quotient_string(work: &FactorizationWork<Rational>, x: &[HpComplex], e: &[HpComplex], bits: usize) -> Result<String, FactorError> {
    let xa = abs_point(x);
    let vals: Vec<Complex64> = work
        .poles
        .values()
        .iter()
        .map(|p| p.constant_value().map(|c| Complex64::new(crate::exactalg::scalar::rational_to_f64(&c), 0.0)))
        .collect::<Option<_>>()
        .ok_or_else(|| FactorError::Exact(crate::exactalg::ExactError::Dimension("symbolic singular point".into())))?;
    let labels = work.poles.values().iter().map(|p| p.to_string()).collect();
    let poles = Poles::new("z", vals, labels);
    let one = Complex64::new(1.0, 0.0);
    let mut coeffs = Vec::new();
    for (den, forms) in work.quotient_forms()? {
        let mut num = Vec::new();
        for f in &forms {
            let (b, a, _, _) = eval_form(f, x, &xa, bits)?;
            let v = a.iter().zip(e).fold(b, |acc, (aj, ej)| acc + aj.clone() * ej.clone());
            num.push(hp_to_c64(&v));
        }
        coeffs.push(ZFrac::from_parts(&poles, num, den, &one));
    }
    Ok(DiffOp::new(coeffs, &ZFrac::constant(&poles, one)).to_string())
}

/// Numeric verification of `L_GHG = D~ L~` for `lt` with symbolic residues
/// `p_k` (ring variables) and rational remaining parameters.
pub fn verify_numeric(lt: &ApparentFuchsian<Rational>, opts: &NumericOptions) -> Result<NumericInstance, FactorError> {
    let profile = lt.profile();
    let ring = lt.gamma.ring();
    if !ring.units().is_empty() || ring.has_modulus() {
        return Err(FactorError::Exact(crate::exactalg::ExactError::Dimension("numeric path needs a plain polynomial ring".into())));
    }
    let nvars = ring.vars().nvars();
    let idx: Vec<Option<usize>> = lt.p.iter().map(var_index).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut x, newton_residual) = if nvars == 0 {
        (Vec::new(), 0.0)
    } else {
        if nvars != lt.p.len() || idx.iter().enumerate().any(|(k, i)| *i != Some(k)) {
            return Err(FactorError::Exact(crate::exactalg::ExactError::Dimension(
                "residues must be the ring variables p1..pM in order, or all constant".into(),
            )));
        }
        let sys = apparency_system(lt)?;
        let polys = sys.iter().map(|p| as_poly(p).cloned()).collect::<Result<Vec<_>, _>>()?;
        newton(&polys, nvars, opts, &mut rng)?
    };
    if let Some(d) = &opts.perturb {
        // q_1 -> q_1 + d is p_1 -> p_1 - d.
        if x.is_empty() {
            return Err(FactorError::Exact(crate::exactalg::ExactError::Dimension("perturbation needs symbolic residues".into())));
        }
        x[0] = x[0].clone() - hp_from_rational(d, opts.bits);
    }
    let work = defect_symbolic(lt)?;
    let about_one = lt.sing.len() >= 2;
    let esym = solve_numeric(&work, about_one, &x, opts.bits)?;
    let xa = abs_point(&x);
    let mut defect_max = 0.0f64;
    let mut offending = None;
    for (label, form) in work.defect_forms()? {
        let d = form_defect(&form, &x, &xa, &esym, opts.bits)?;
        if d > defect_max {
            defect_max = d;
            offending = Some(label);
        }
    }
    let pass = defect_max < opts.defect_tol;
    let report = VerificationReport {
        mode: "numeric".into(),
        profile,
        esym: esym.iter().map(fmt_c).collect(),
        defect_max: format!("{defect_max:.3e}"),
        pass,
        quotient_operator: quotient_string(&work, &x, &esym, opts.bits)?,
        offending: if pass { None } else { offending },
    };
    Ok(NumericInstance { p: x, esym, newton_residual, defect_max, report })
}
