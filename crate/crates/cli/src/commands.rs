//! One function per subcommand. Each returns a JSON report and whether the
//! verification it performs passed.

use num_complex::Complex64;
use serde_json::{json, Value};

use heunfactor::exactalg::scalar::{parse_rational, rational_to_string};
use heunfactor::exactalg::{ParamElem, ParamRing, PolyRing, Rational};
use heunfactor::factorize::{apparency_system, profile_supported, verify_exact, verify_numeric, ApparentFuchsian, NumericOptions};
use heunfactor::heun::{apparency_poly, as_integer, HeunParams, HeunSpec};
use heunfactor::numcheck::{apparent_q_roots, classify_apparency, num_params_with_q, Apparency, NumHeun};
use heunfactor::xjacobi::{
    orthogonality_check, x1_4f3_check, x1_e1e2, x1_heun_annihilates, x1_heun_params, x1_jacobi, x1_ode_residual, xi_tilde,
    JacobiParams,
};

use crate::error::CliError;
use crate::instance::{concrete, FuchsianSpec, Instance, Loaded, Mode, XJacobiSpec};

pub const DEFAULT_BITS: usize = 300;
pub const DEFAULT_ODE_TOL: f64 = 1e-12;
/// Off-diagonal inner products must stay below this times the norm scale.
pub const ORTHO_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub mode: Option<Mode>,
    pub precision_bits: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub deep: bool,
    pub ortho_max: u32,
}

pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

fn c64(z: &Complex64) -> Value {
    // Imaginary parts at roundoff level are printed as zero.
    let im = if z.im.abs() <= 1e-14 * z.norm() { 0.0 } else { z.im };
    let z = Complex64::new(z.re, im);
    json!({ "re": format!("{:.15e}", z.re), "im": format!("{:.15e}", z.im) })
}

fn sorted_roots(mut r: Vec<Complex64>) -> Vec<Complex64> {
    r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    r
}

fn build_heun(spec: &HeunSpec) -> Result<HeunParams<Rational>, CliError> {
    Ok(spec.build::<Rational>(&[])?)
}

fn q_symbol(p: &HeunParams<Rational>) -> Option<String> {
    let s = p.q.to_string();
    p.ring().vars().index_of(&s).map(|_| s)
}

// ---------------------------------------------------------------------------

pub fn apparency(inst: &Loaded, _opts: &Options) -> Result<Outcome, CliError> {
    match &inst.instance {
        Instance::Heun(spec) => {
            let p = build_heun(spec)?;
            let papp = apparency_poly(&p)?;
            let mut report = json!({
                "command": "apparency",
                "kind": "heun",
                "parameters": p.to_json_map(),
                "p_app": papp.to_string(),
            });
            let mut pass = true;
            if let Some(q) = q_symbol(&p) {
                let qi = p.ring().vars().index_of(&q).unwrap();
                report["degree_in_q"] = json!(papp.numer().degree_in(qi));
                if let Ok(roots) = apparent_q_roots(&p) {
                    report["roots"] = Value::Array(sorted_roots(roots).iter().map(c64).collect());
                }
            } else if p.entries().iter().all(|(_, e)| e.constant_value().is_some()) {
                pass = papp.is_zero();
                report["apparent"] = json!(pass);
            }
            report["pass"] = json!(pass);
            Ok(Outcome { report, pass })
        }
        Instance::Fuchsian(spec) => {
            let lt = spec.build()?;
            let sys = apparency_system(&lt)?;
            let pass = !spec.has_residues() || sys.iter().all(|e| e.is_zero());
            let report = json!({
                "command": "apparency",
                "kind": "apparent_fuchsian",
                "profile": spec.profile(),
                "system": sys.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "pass": pass,
            });
            Ok(Outcome { report, pass })
        }
        Instance::XJacobi(_) => Err(CliError::Usage("apparency expects a heun or apparent_fuchsian instance".into())),
    }
}

// ---------------------------------------------------------------------------

fn numeric_options(inst: &Loaded, opts: &Options) -> NumericOptions {
    let mut o = NumericOptions {
        bits: opts.precision_bits.or(inst.precision_bits).unwrap_or(DEFAULT_BITS),
        seed: opts.seed.or(inst.seed).unwrap_or(0),
        ..Default::default()
    };
    if let Some(t) = opts.tol {
        o.defect_tol = t;
    }
    o
}

fn check_profile(profile: &[u32], deep: bool) -> Result<(), CliError> {
    if !deep && !profile_supported(profile) {
        return Err(CliError::Usage(format!("unsupported profile {profile:?}; pass --deep to attempt it")));
    }
    Ok(())
}

fn exact_or_numeric(chosen: Option<Mode>, profile: &[u32]) -> Mode {
    chosen.unwrap_or(if profile.len() == 1 && profile[0] <= 3 { Mode::Exact } else { Mode::Numeric })
}

fn factor_report(mode: Mode, report: heunfactor::factorize::VerificationReport, extra: Value) -> Outcome {
    let pass = report.pass;
    let mut v = json!({ "command": "factorize", "mode": mode.name(), "verification": report });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
        dst.extend(src);
    }
    v["pass"] = json!(pass);
    Outcome { report: v, pass }
}

pub fn factorize(inst: &Loaded, opts: &Options) -> Result<Outcome, CliError> {
    match &inst.instance {
        Instance::Heun(spec) => factorize_heun(spec, inst, opts),
        Instance::Fuchsian(spec) => factorize_fuchsian(spec, inst, opts),
        Instance::XJacobi(_) => Err(CliError::Usage("factorize expects a heun or apparent_fuchsian instance".into())),
    }
}

fn factorize_heun(spec: &HeunSpec, inst: &Loaded, opts: &Options) -> Result<Outcome, CliError> {
    let p = build_heun(spec)?;
    let m = match as_integer(&p.epsilon) {
        Some(e) if e < 0 => (-e) as u32,
        _ => return Err(CliError::Usage(format!("factorize needs epsilon a negative integer, got {}", p.epsilon))),
    };
    let profile = vec![m];
    check_profile(&profile, opts.deep)?;
    let mode = exact_or_numeric(opts.mode.or(inst.mode), &profile);
    let extra = json!({ "kind": "heun", "parameters": p.to_json_map() });
    match mode {
        Mode::Exact => {
            let pm = match q_symbol(&p) {
                Some(q) => {
                    let ring = p.ring().with_modulus(apparency_poly(&p)?.numer(), &q).map_err(|e| CliError::Schema(e.to_string()))?;
                    p.rehome(&ring)?
                }
                None => p.clone(),
            };
            let ver = verify_exact(&ApparentFuchsian::from_heun(&pm)?)?;
            Ok(factor_report(mode, ver.report(profile), extra))
        }
        Mode::Numeric => {
            let val = |e: &ParamElem<Rational>, name: &str| {
                e.constant_value().ok_or_else(|| CliError::Usage(format!("numeric mode needs a rational {name}")))
            };
            let (a, b, g, t) = (val(&p.alpha, "alpha")?, val(&p.beta, "beta")?, val(&p.gamma, "gamma")?, val(&p.t, "t")?);
            let lt = match q_symbol(&p) {
                Some(_) => {
                    let ring = ParamRing::<Rational>::new(PolyRing::new(["p1"]));
                    let pv = ring.var("p1").map_err(|e| CliError::Schema(e.to_string()))?;
                    ApparentFuchsian::new(ring.rational(&(&a + &b)), ring.rational(&(&a * &b)), ring.rational(&g), vec![(ring.rational(&t), m)], vec![pv])?
                }
                None => {
                    let q = val(&p.q, "q")?;
                    let ring = ParamRing::<Rational>::new(PolyRing::new(Vec::<String>::new()));
                    let pk = &a * &b * &t - q;
                    ApparentFuchsian::new(ring.rational(&(&a + &b)), ring.rational(&(&a * &b)), ring.rational(&g), vec![(ring.rational(&t), m)], vec![ring.rational(&pk)])?
                }
            };
            let out = verify_numeric(&lt, &numeric_options(inst, opts))?;
            Ok(factor_report(mode, out.report, extra))
        }
    }
}

fn factorize_fuchsian(spec: &FuchsianSpec, inst: &Loaded, opts: &Options) -> Result<Outcome, CliError> {
    let profile = spec.profile();
    check_profile(&profile, opts.deep)?;
    let mode = exact_or_numeric(opts.mode.or(inst.mode), &profile);
    let lt = spec.build()?;
    let extra = json!({ "kind": "apparent_fuchsian" });
    match mode {
        Mode::Exact => {
            let lt = if spec.has_residues() {
                lt
            } else if profile.len() == 1 {
                let sys = apparency_system(&lt)?;
                let ring = lt.gamma.ring().with_modulus(sys[0].numer(), "p1").map_err(|e| CliError::Schema(e.to_string()))?;
                lt.rehome(&ring).map_err(|e| CliError::Schema(e.to_string()))?
            } else {
                return Err(CliError::Usage("exact mode with several points needs explicit residues; use --mode numeric".into()));
            };
            let ver = verify_exact(&lt)?;
            Ok(factor_report(mode, ver.report(profile), extra))
        }
        Mode::Numeric => {
            let out = verify_numeric(&lt, &numeric_options(inst, opts))?;
            Ok(factor_report(mode, out.report, extra))
        }
    }
}

// ---------------------------------------------------------------------------

pub fn x1_from_args(k: u32, g: &str, h: &str, opts: &Options) -> Result<Outcome, CliError> {
    let parse = |s: &str, name: &str| parse_rational(s).map_err(|e| CliError::Usage(format!("{name}: {e}")));
    x1(&JacobiParams::new(k, parse(g, "g")?, parse(h, "h")?)?, opts)
}

pub fn x1_from_instance(inst: &Loaded, opts: &Options) -> Result<Outcome, CliError> {
    match &inst.instance {
        Instance::XJacobi(XJacobiSpec { k, g, h }) => x1(&JacobiParams::new(*k, concrete(g, "g")?, concrete(h, "h")?)?, opts),
        _ => Err(CliError::Usage("x1 expects an xjacobi instance".into())),
    }
}

fn x1(p: &JacobiParams, opts: &Options) -> Result<Outcome, CliError> {
    let hp = x1_heun_params(p)?;
    let x = x1_jacobi(p);
    let ode = x1_ode_residual(p, &x.poly).is_zero();
    let heun = x1_heun_annihilates(p)?;
    let (e1, e2) = x1_e1e2(p);
    let d = x1_4f3_check(p)?;
    let mut report = json!({
        "command": "x1",
        "parameters": p,
        "degree": x.degree(),
        "coefficients": x.coefficient_strings(),
        "ode_annihilates": ode,
        "heun_parameters": hp.to_json_map(),
        "heun_annihilates": heun,
        "e1_plus_e2": rational_to_string(&e1),
        "e1_times_e2": rational_to_string(&e2),
        "d_k": rational_to_string(&d),
    });
    if p.k == 0 {
        report["equals_xi_tilde"] = json!(x.poly == xi_tilde(p));
    }
    let mut pass = ode && heun;
    let half = Rational::new(1.into(), 2.into());
    let neg_half = -half;
    if p.g > neg_half && p.h > neg_half {
        let mut worst = 0.0f64;
        let mut pairs = 0;
        for j in 0..=opts.ortho_max {
            for k in (j + 1)..=opts.ortho_max {
                let ip = orthogonality_check(j, k, &p.g, &p.h, 40)?;
                worst = worst.max(ip.value.abs() / ip.scale.max(1.0));
                pairs += 1;
            }
        }
        let ok = worst < ORTHO_TOL;
        pass &= ok;
        report["orthogonality"] = json!({ "max_degree": opts.ortho_max, "pairs": pairs, "max_relative_offdiagonal": format!("{worst:.3e}"), "pass": ok });
    } else {
        report["orthogonality"] = json!({ "skipped": "needs g, h > -1/2" });
    }
    report["pass"] = json!(pass);
    Ok(Outcome { report, pass })
}

// ---------------------------------------------------------------------------

fn classification(a: &Apparency) -> Value {
    let (verdict, d) = match a {
        Apparency::Apparent(d) => ("apparent", d),
        Apparency::NotApparent(d) => ("not_apparent", d),
        Apparency::Inconclusive(d) => ("inconclusive", d),
    };
    json!({ "verdict": verdict, "distance": format!("{d:.3e}") })
}

pub fn monodromy(inst: &Loaded, opts: &Options) -> Result<Outcome, CliError> {
    let Instance::Heun(spec) = &inst.instance else {
        return Err(CliError::Usage("monodromy expects a heun instance".into()));
    };
    let p = build_heun(spec)?;
    let tol = opts.tol.unwrap_or(DEFAULT_ODE_TOL);
    let mut report = json!({ "command": "monodromy", "parameters": p.to_json_map(), "tolerance": tol });
    let pass = match q_symbol(&p) {
        Some(_) => {
            // Every root of P^app must give trivial monodromy about t.
            let mut rows = Vec::new();
            let mut all = true;
            for q in sorted_roots(apparent_q_roots(&p)?) {
                let c = classify_apparency(&num_params_with_q(&p, q)?, tol)?;
                all &= matches!(c, Apparency::Apparent(_));
                rows.push(json!({ "q": c64(&q), "classification": classification(&c) }));
            }
            report["roots"] = Value::Array(rows);
            all
        }
        None => {
            let num = NumHeun::from_rational(&p)?;
            let c = classify_apparency(&num, tol)?;
            let oracle = apparency_poly(&p)?.is_zero();
            let agree = match c {
                Apparency::Apparent(_) => oracle,
                Apparency::NotApparent(_) => !oracle,
                Apparency::Inconclusive(_) => false,
            };
            report["classification"] = classification(&c);
            report["p_app_zero"] = json!(oracle);
            report["agree"] = json!(agree);
            agree
        }
    };
    report["pass"] = json!(pass);
    Ok(Outcome { report, pass })
}
