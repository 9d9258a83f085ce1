//! Monodromy matrices of Heun's equation from numerical continuation.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use super::ode::{integrate, PathPiece};
use super::{NumError, NumHeun};

pub type Mat2 = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopTarget {
    Zero,
    One,
    T,
    Infinity,
}

/// Continuation of the fundamental system normalized to the identity
/// Wronskian at `basepoint`: continuing `Y` around the loop gives `Y M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonodromyMatrix {
    pub entries: Mat2,
    pub target: LoopTarget,
    pub basepoint: Complex64,
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn det2(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Max-entry distance between two matrices.
pub fn mat_dist(a: &Mat2, b: &Mat2) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

pub const IDENTITY: Mat2 = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];

impl MonodromyMatrix {
    pub fn det(&self) -> Complex64 {
        det2(&self.entries)
    }

    /// `max |M - I|` over entries.
    pub fn distance_to_identity(&self) -> f64 {
        mat_dist(&self.entries, &IDENTITY)
    }
}

fn singular_points(p: &NumHeun) -> [Complex64; 3] {
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), p.t]
}

fn target_point(target: LoopTarget) -> Option<usize> {
    match target {
        LoopTarget::Zero => Some(0),
        LoopTarget::One => Some(1),
        LoopTarget::T => Some(2),
        LoopTarget::Infinity => None,
    }
}

/// Half the distance from singular point `i` to the nearest other one.
fn radius(pts: &[Complex64; 3], i: usize) -> f64 {
    (0..3).filter(|&j| j != i).map(|j| (pts[i] - pts[j]).norm()).fold(f64::INFINITY, f64::min) / 2.0
}

/// Center and radius of a circle enclosing every finite singular point
/// with room to spare.
fn outer_circle(pts: &[Complex64; 3]) -> (Complex64, f64) {
    let c = (pts[0] + pts[1] + pts[2]) / 3.0;
    let r = pts.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    (c, 2.0 * r + 1.0)
}

/// Monodromy about one singular point along a circle of half the distance
/// to the nearest other singularity, starting at the top of the circle.
/// Infinity uses a clockwise circle around all finite singular points.
pub fn monodromy(p: &NumHeun, target: LoopTarget, tol: f64) -> Result<MonodromyMatrix, NumError> {
    let pts = singular_points(p);
    let piece = match target_point(target) {
        Some(i) => PathPiece::circle(pts[i], radius(&pts, i), FRAC_PI_2),
        None => {
            let (c, r) = outer_circle(&pts);
            PathPiece::Arc(c, r, FRAC_PI_2, -2.0 * std::f64::consts::PI)
        }
    };
    let entries = integrate(p, &[piece], tol)?;
    Ok(MonodromyMatrix { entries, target, basepoint: piece.start() })
}

/// All four monodromy matrices over one basepoint, for composing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonodromyFamily {
    pub basepoint: Complex64,
    pub t: Complex64,
    pub m0: MonodromyMatrix,
    pub m1: MonodromyMatrix,
    pub mt: MonodromyMatrix,
    pub minf: MonodromyMatrix,
}

impl MonodromyFamily {
    /// `max |M_inf M_c M_b M_a - I|` with `a, b, c` the finite singular
    /// points ordered by increasing real part.
    pub fn product_defect(&self) -> f64 {
        let mut fin = [(0.0, &self.m0), (1.0, &self.m1), (self.t.re, &self.mt)];
        fin.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut acc = self.minf.entries;
        for (_, m) in fin.iter().rev() {
            acc = mat_mul(&acc, &m.entries);
        }
        mat_dist(&acc, &IDENTITY)
    }
}

/// Loops from a basepoint above every singular point: a straight segment
/// down to the top of the small circle, the circle counterclockwise, and
/// the segment back. Infinity is the clockwise outer circle through the
/// basepoint. Singular points are expected to lie close to a common line
/// below the basepoint (always the case for real `t`).
pub fn monodromy_family(p: &NumHeun, tol: f64) -> Result<MonodromyFamily, NumError> {
    let pts = singular_points(p);
    let (c, big) = outer_circle(&pts);
    let base = c + Complex64::new(0.0, big);
    let mut ms = Vec::with_capacity(3);
    for (i, target) in [LoopTarget::Zero, LoopTarget::One, LoopTarget::T].into_iter().enumerate() {
        let r = radius(&pts, i);
        let top = pts[i] + Complex64::new(0.0, r);
        let path = [PathPiece::Line(base, top), PathPiece::circle(pts[i], r, FRAC_PI_2), PathPiece::Line(top, base)];
        ms.push(MonodromyMatrix { entries: integrate(p, &path, tol)?, target, basepoint: base });
    }
    let minf = MonodromyMatrix {
        entries: integrate(p, &[PathPiece::Arc(c, big, FRAC_PI_2, -2.0 * std::f64::consts::PI)], tol)?,
        target: LoopTarget::Infinity,
        basepoint: base,
    };
    Ok(MonodromyFamily { basepoint: base, t: p.t, m0: ms[0], m1: ms[1], mt: ms[2], minf })
}

/// Outcome of the trivial-monodromy test about `z = t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "distance", rename_all = "lowercase")]
pub enum Apparency {
    Apparent(f64),
    NotApparent(f64),
    Inconclusive(f64),
}

pub const APPARENT_BELOW: f64 = 1e-6;
pub const NOT_APPARENT_ABOVE: f64 = 1e-3;

impl Apparency {
    pub fn distance(&self) -> f64 {
        match *self {
            Apparency::Apparent(d) | Apparency::NotApparent(d) | Apparency::Inconclusive(d) => d,
        }
    }
}

/// `Apparent` when `|M_t - I| < 1e-6`, `NotApparent` above `1e-3`.
pub fn classify_apparency(p: &NumHeun, tol: f64) -> Result<Apparency, NumError> {
    let d = monodromy(p, LoopTarget::T, tol)?.distance_to_identity();
    Ok(if d < APPARENT_BELOW {
        Apparency::Apparent(d)
    } else if d > NOT_APPARENT_ABOVE {
        Apparency::NotApparent(d)
    } else {
        Apparency::Inconclusive(d)
    })
}

/// A candidate common eigenvector and its angle defect (largest sine of
/// the angle between `v` and `M v`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub vector: [Complex64; 2],
    pub defect: f64,
}

pub const WITNESS_TOL: f64 = 1e-5;

impl Witness {
    pub fn found(&self) -> bool {
        self.defect <= WITNESS_TOL
    }
}

fn normalize(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Sine of the angle between `v` and `m v` (0 when `m v = 0`).
fn angle_defect(m: &Mat2, v: &[Complex64; 2]) -> f64 {
    let w = [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
    let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    if nw == 0.0 {
        return 0.0;
    }
    let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    (v[0] * w[1] - v[1] * w[0]).norm() / (nv * nw)
}

fn eigenvectors(m: &Mat2) -> Vec<[Complex64; 2]> {
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let half = (a + d) / 2.0;
    let disc = (half * half - det2(m)).sqrt();
    let mut out = Vec::new();
    for lam in [half + disc, half - disc] {
        let u = [b, lam - a];
        let w = [lam - d, c];
        let nu = u[0].norm() + u[1].norm();
        let nw = w[0].norm() + w[1].norm();
        let v = if nu >= nw { u } else { w };
        if v[0].norm() + v[1].norm() > 0.0 {
            out.push(normalize(v));
        }
    }
    if out.is_empty() {
        // Scalar matrix: every vector is an eigenvector.
        out.push([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        out.push([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    }
    out
}

/// The eigenvector of either matrix that is closest to being a common
/// eigenvector of both.
pub fn common_eigenvector(m0: &Mat2, m1: &Mat2) -> Witness {
    let mut best = Witness { vector: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], defect: f64::INFINITY };
    for v in eigenvectors(m0).into_iter().chain(eigenvectors(m1)) {
        let defect = angle_defect(m0, &v).max(angle_defect(m1, &v));
        if defect < best.defect {
            best = Witness { vector: v, defect };
        }
    }
    best
}

/// Common invariant line of the monodromy about 0 and 1, taken over the
/// common basepoint of [`monodromy_family`]. The returned vector holds the
/// value and derivative at the basepoint of the invariant solution.
pub fn reducibility_witness(p: &NumHeun, tol: f64) -> Result<(Witness, MonodromyFamily), NumError> {
    let fam = monodromy_family(p, tol)?;
    Ok((common_eigenvector(&fam.m0.entries, &fam.m1.entries), fam))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn maier_instance(q: f64) -> NumHeun {
        NumHeun::new(c(1.0), c(2.0), c(34.0 / 3.0), c(-1.0), c(q), c(2.0))
    }

    #[test]
    fn apparent_and_perturbed() {
        let m = monodromy(&maier_instance(1.0), LoopTarget::T, 1e-12).unwrap();
        assert!(m.distance_to_identity() < 1e-6, "{}", m.distance_to_identity());
        let m2 = monodromy(&maier_instance(2.0), LoopTarget::T, 1e-12).unwrap();
        assert!(m2.distance_to_identity() > 1e-3);
        assert!((m2.det() - 1.0).norm() < 1e-6);
    }

    #[test]
    fn determinant_matches_exponents() {
        let p = NumHeun::new(c(0.3), c(1.7), c(0.4), c(-1.2), c(0.9), c(2.5));
        for (target, s) in [(LoopTarget::Zero, p.gamma), (LoopTarget::One, p.delta), (LoopTarget::T, p.epsilon)] {
            let m = monodromy(&p, target, 1e-12).unwrap();
            // Exponents {0, 1 - s}: det = exp(2 pi i (1 - s)).
            let want = (Complex64::new(0.0, 2.0 * PI) * (1.0 - s)).exp();
            assert!((m.det() - want).norm() < 1e-6, "{target:?}");
        }
    }

    #[test]
    fn product_relation() {
        let p = NumHeun::new(c(0.3), c(1.7), c(0.4), c(-1.2), c(0.9), c(2.5));
        let fam = monodromy_family(&p, 1e-12).unwrap();
        assert!(fam.product_defect() < 1e-6, "{}", fam.product_defect());
        let q = NumHeun::new(c(0.3), c(1.7), c(0.4), c(-1.2), c(0.9), c(-1.5));
        let fam = monodromy_family(&q, 1e-12).unwrap();
        assert!(fam.product_defect() < 1e-6, "{}", fam.product_defect());
    }

    #[test]
    fn witness_for_integer_alpha() {
        let (w, fam) = reducibility_witness(&maier_instance(1.0), 1e-12).unwrap();
        assert!(fam.mt.distance_to_identity() < 1e-6);
        assert!(w.found(), "{}", w.defect);
    }

    #[test]
    fn halving_tolerance() {
        let p = NumHeun::new(c(0.3), c(1.7), c(0.4), c(-1.2), c(0.9), c(2.5));
        let a = monodromy(&p, LoopTarget::T, 1e-10).unwrap();
        let b = monodromy(&p, LoopTarget::T, 5e-11).unwrap();
        assert!(mat_dist(&a.entries, &b.entries) < 1e-9);
    }

    #[test]
    fn witness_is_polynomial_line() {
        use crate::exactalg::scalar::rat;
        use crate::exactalg::UPoly;
        use crate::heun::{heun_poly_condition, HeunSpec, ParamValue};
        let spec = HeunSpec {
            alpha: ParamValue::int(-1),
            beta: ParamValue::rational(&rat(5, 3)),
            gamma: ParamValue::rational(&rat(2, 7)),
            delta: None,
            epsilon: ParamValue::rational(&rat(-1, 2)),
            q: ParamValue::sym("q"),
            t: ParamValue::int(3),
        };
        let hp = spec.build::<crate::Rational>(&[]).unwrap();
        let cond = heun_poly_condition(&hp).unwrap();
        let roots = UPoly::from_multi(cond.numer(), 0).unwrap().to_c64().roots();
        assert_eq!(roots.len(), 2);
        for q in roots {
            let p = crate::numcheck::num_params_with_q(&hp, q).unwrap();
            let (w, fam) = reducibility_witness(&p, 1e-12).unwrap();
            assert!(w.found(), "{}", w.defect);
            // y = 1 + c1 z is single-valued; its (y, y') at the basepoint spans the line.
            let c1 = p.q / (p.t * p.gamma);
            let line = [1.0 + c1 * fam.basepoint, c1];
            let cross = (line[0] * w.vector[1] - line[1] * w.vector[0]).norm();
            let n = (line[0].norm_sqr() + line[1].norm_sqr()).sqrt();
            assert!(cross / n < 1e-6, "{}", cross / n);
        }
    }
}
