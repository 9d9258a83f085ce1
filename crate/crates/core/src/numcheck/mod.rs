//! Double-precision checks: monodromy of Heun's equation, a common
//! invariant line of two monodromy matrices, and fits against sums of
//! Gauss hypergeometric functions.

mod decompose;
mod monodromy;
mod ode;

pub use decompose::{basis_values, decompose_2f1, default_samples, fit_function, hyp2f1, Decomposition, Fit, FitBasis};
pub use monodromy::{
    classify_apparency, mat_dist, monodromy, monodromy_family, reducibility_witness, Apparency, LoopTarget, MonodromyFamily,
    MonodromyMatrix, Witness,
};
pub use ode::{integrate, PathPiece};

use num_complex::Complex64;
use thiserror::Error;

use crate::exactalg::scalar::rational_to_f64;
use crate::exactalg::{Rational, UPoly};
use crate::heun::{apparency_poly, HeunError, HeunParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("step size collapsed to {h:e} at z = {z}; shrink the loop radius or loosen the tolerance")]
    StepCollapse { z: Complex64, h: f64 },
    #[error("step budget exhausted at z = {0}")]
    TooManySteps(Complex64),
    #[error("parameter {0} is not a numeric constant")]
    NotConcrete(&'static str),
    #[error("basis is ill-conditioned: condition number {0:e}")]
    IllConditioned(f64),
    #[error("sample point {0} lies outside the convergence region")]
    BadSample(Complex64),
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Heun(#[from] HeunError),
}

/// Heun parameters as complex doubles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumHeun {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub epsilon: Complex64,
    pub q: Complex64,
    pub t: Complex64,
}

impl NumHeun {
    /// `delta` from the Fuchs relation.
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, epsilon: Complex64, q: Complex64, t: Complex64) -> Self {
        let delta = alpha + beta + 1.0 - gamma - epsilon;
        NumHeun { alpha, beta, gamma, delta, epsilon, q, t }
    }

    pub fn from_rational(p: &HeunParams<Rational>) -> Result<Self, NumError> {
        let mut v = [Complex64::new(0.0, 0.0); 7];
        for (slot, (name, e)) in v.iter_mut().zip(p.entries()) {
            let r = e.constant_value().ok_or(NumError::NotConcrete(name))?;
            *slot = Complex64::new(rational_to_f64(&r), 0.0);
        }
        Ok(NumHeun { alpha: v[0], beta: v[1], gamma: v[2], delta: v[3], epsilon: v[4], q: v[5], t: v[6] })
    }

    pub fn with_q(&self, q: Complex64) -> Self {
        NumHeun { q, ..*self }
    }

    /// `(y, y') -> y''`.
    pub fn second_derivative(&self, z: Complex64, y: Complex64, dy: Complex64) -> Complex64 {
        let p = self.gamma / z + self.delta / (z - 1.0) + self.epsilon / (z - self.t);
        let r = (self.alpha * self.beta * z - self.q) / (z * (z - 1.0) * (z - self.t));
        -p * dy - r * y
    }

    /// Coefficients of the local solution at 0 with exponent 0 and `c_0 = 1`.
    pub fn series_at_zero(&self, terms: usize) -> Vec<Complex64> {
        let (a, b, g, d, e, q, t) = (self.alpha, self.beta, self.gamma, self.delta, self.epsilon, self.q, self.t);
        let mut c = vec![Complex64::new(1.0, 0.0)];
        if terms > 1 {
            c.push(q / (t * g));
        }
        while c.len() < terms {
            let n = (c.len() - 1) as f64;
            let rhs = (n * ((n - 1.0 + g) * (1.0 + t) + t * d + e) + q) * c[c.len() - 1]
                - (n - 1.0 + a) * (n - 1.0 + b) * c[c.len() - 2];
            c.push(rhs / (t * (n + 1.0) * (n + g)));
        }
        c
    }

    /// Parameters of `z^(g-1) y` for `y` a solution: exponent `1 - g` at 0 becomes 0.
    pub fn second_exponent_chart(&self) -> NumHeun {
        let s = 1.0 - self.gamma;
        NumHeun {
            alpha: self.alpha + s,
            beta: self.beta + s,
            gamma: 2.0 - self.gamma,
            delta: self.delta,
            epsilon: self.epsilon,
            q: self.q + s * (self.epsilon + self.t * self.delta),
            t: self.t,
        }
    }
}

/// Sum a power series at `z`, stopping once terms are negligible.
pub fn eval_series(c: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for ck in c {
        acc += ck * zn;
        zn *= z;
    }
    acc
}

/// The two local solutions at 0 (exponents 0 and `1 - g`) and their
/// derivatives, using the principal branch of `z^(1-g)`. Requires
/// `|z| < min(1, |t|)`.
pub fn local_pair_at_zero(p: &NumHeun, z: Complex64, terms: usize) -> [(Complex64, Complex64); 2] {
    let d = |c: &[Complex64]| c.iter().enumerate().skip(1).map(|(k, ck)| ck * k as f64).collect::<Vec<_>>();
    let c0 = p.series_at_zero(terms);
    let c1 = p.second_exponent_chart().series_at_zero(terms);
    let s = 1.0 - p.gamma;
    let pw = z.powc(s);
    let f1 = eval_series(&c1, z);
    let df1 = eval_series(&d(&c1), z);
    [(eval_series(&c0, z), eval_series(&d(&c0), z)), (pw * f1, pw * (s * f1 / z + df1))]
}

/// Roots in `q` of the apparency condition for otherwise concrete parameters.
/// `p.q` must be a ring variable.
pub fn apparent_q_roots(p: &HeunParams<Rational>) -> Result<Vec<Complex64>, NumError> {
    let qi = crate::factorize::apparency::var_index(&p.q).ok_or_else(|| NumError::Precondition("q must be symbolic".into()))?;
    let papp = apparency_poly(p)?;
    let u = UPoly::from_multi(papp.numer(), qi).map_err(HeunError::from)?;
    Ok(u.to_c64().roots())
}

/// Complex parameters from a ring element that may still contain `q`:
/// every other entry must be constant.
pub fn num_params_with_q(p: &HeunParams<Rational>, q: Complex64) -> Result<NumHeun, NumError> {
    let mut v = [Complex64::new(0.0, 0.0); 7];
    for (i, (slot, (name, e))) in v.iter_mut().zip(p.entries()).enumerate() {
        if i == 5 {
            *slot = q;
            continue;
        }
        let r = e.constant_value().ok_or(NumError::NotConcrete(name))?;
        *slot = Complex64::new(rational_to_f64(&r), 0.0);
    }
    Ok(NumHeun { alpha: v[0], beta: v[1], gamma: v[2], delta: v[3], epsilon: v[4], q: v[5], t: v[6] })
}

/// Shift applied to `q` for non-apparent controls.
pub const PERTURBATION: f64 = 0.5;

/// Random `epsilon in {-1, -2}` instance with non-integer rational
/// `alpha, beta, gamma`, rational `t` at distance at least `1/2` from 0 and 1,
/// and `q` a root of `P^app` (shifted by [`PERTURBATION`] when `apparent` is false).
pub fn monodromy_instance(seed: u64, apparent: bool) -> Result<(HeunParams<Rational>, NumHeun), NumError> {
    use crate::exactalg::scalar::rat;
    use crate::heun::{HeunSpec, ParamValue};
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut frac = || loop {
        let d = rng.gen_range(2..=5i64);
        let n = rng.gen_range(-12..=12i64);
        if n % d != 0 {
            break rat(n, d);
        }
    };
    let (a, b, g) = (frac(), frac(), frac());
    let t = loop {
        let t = frac() * rat(3, 1);
        let far = |c: i64| {
            let d = &t - rat(c, 1);
            d >= rat(1, 2) || d <= rat(-1, 2)
        };
        if far(0) && far(1) {
            break t;
        }
    };
    let eps = if seed % 2 == 0 { -1 } else { -2 };
    let p = HeunSpec {
        alpha: ParamValue::rational(&a),
        beta: ParamValue::rational(&b),
        gamma: ParamValue::rational(&g),
        delta: None,
        epsilon: ParamValue::int(eps),
        q: ParamValue::sym("q"),
        t: ParamValue::rational(&t),
    }
    .build(&[])?;
    let roots = apparent_q_roots(&p)?;
    let q = roots[(seed / 2) as usize % roots.len()];
    let q = if apparent { q } else { q + PERTURBATION };
    let num = num_params_with_q(&p, q)?;
    Ok((p, num))
}
