//! Adaptive Dormand–Prince 5(4) integration of the Heun equation along
//! piecewise-smooth paths in the complex plane.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{NumError, NumHeun};

/// A path piece parametrized by `s in [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathPiece {
    Line(Complex64, Complex64),
    /// Center, radius, start angle, total swept angle (positive = counterclockwise).
    Arc(Complex64, f64, f64, f64),
}

impl PathPiece {
    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Line(a, b) => a + (b - a) * s,
            PathPiece::Arc(c, r, th0, sweep) => c + Complex64::from_polar(r, th0 + sweep * s),
        }
    }

    pub fn velocity(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Line(a, b) => b - a,
            PathPiece::Arc(_, r, th0, sweep) => Complex64::new(0.0, sweep) * Complex64::from_polar(r, th0 + sweep * s),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    /// Full counterclockwise circle starting at angle `th0`.
    pub fn circle(center: Complex64, r: f64, th0: f64) -> Self {
        PathPiece::Arc(center, r, th0, 2.0 * PI)
    }
}

// Dormand–Prince tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 2_000_000;

type State = [Complex64; 4];

fn rhs(p: &NumHeun, piece: &PathPiece, s: f64, y: &State) -> State {
    let z = piece.point(s);
    let v = piece.velocity(s);
    [v * y[1], v * p.second_derivative(z, y[0], y[1]), v * y[3], v * p.second_derivative(z, y[2], y[3])]
}

fn axpy(y: &State, h: f64, coeffs: &[f64], k: &[State]) -> State {
    let mut out = *y;
    for (a, kk) in coeffs.iter().zip(k) {
        if *a != 0.0 {
            for i in 0..4 {
                out[i] += kk[i] * (h * a);
            }
        }
    }
    out
}

fn integrate_piece(p: &NumHeun, piece: &PathPiece, mut y: State, tol: f64) -> Result<State, NumError> {
    let mut s = 0.0;
    let mut h: f64 = 0.01;
    let mut k = [[Complex64::new(0.0, 0.0); 4]; 7];
    k[0] = rhs(p, piece, s, &y);
    for _ in 0..MAX_STEPS {
        if s >= 1.0 {
            return Ok(y);
        }
        h = h.min(1.0 - s);
        for st in 1..7 {
            let yi = axpy(&y, h, &A[st][..st], &k[..st]);
            k[st] = rhs(p, piece, s + C[st] * h, &yi);
        }
        let y5 = axpy(&y, h, &B5, &k);
        let y4 = axpy(&y, h, &B4, &k);
        let mut err: f64 = 0.0;
        for i in 0..4 {
            let sc = tol + tol * y[i].norm().max(y5[i].norm());
            let e = (y5[i] - y4[i]).norm() / sc;
            err = if e.is_finite() { err.max(e) } else { f64::INFINITY };
        }
        if err <= 1.0 {
            s += h;
            y = y5;
            k[0] = k[6];
        }
        let fac = if err == 0.0 {
            5.0
        } else if !err.is_finite() {
            0.2
        } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h < 1e-13 {
            return Err(NumError::StepCollapse { z: piece.point(s), h });
        }
    }
    Err(NumError::TooManySteps(piece.point(s)))
}

/// Integrate the fundamental system with `W(start) = I` along the pieces,
/// returning the final Wronskian matrix `[[y1, y2], [y1', y2']]`.
pub fn integrate(p: &NumHeun, path: &[PathPiece], tol: f64) -> Result<[[Complex64; 2]; 2], NumError> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut y: State = [one, zero, zero, one];
    for piece in path {
        y = integrate_piece(p, piece, y, tol)?;
    }
    Ok([[y[0], y[2]], [y[1], y[3]]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn line_matches_local_series() {
        let p = NumHeun::new(c(0.3), c(1.7), c(0.4), c(-1.2), c(0.9), c(2.5));
        let (a, b) = (Complex64::new(0.2, 0.1), Complex64::new(0.35, -0.2));
        let w = integrate(&p, &[PathPiece::Line(a, b)], 1e-12).unwrap();
        let ya = super::super::local_pair_at_zero(&p, a, 150);
        let yb = super::super::local_pair_at_zero(&p, b, 150);
        // Express the propagated identity system through the local pair.
        let wa = [[ya[0].0, ya[1].0], [ya[0].1, ya[1].1]];
        let wb = [[yb[0].0, yb[1].0], [yb[0].1, yb[1].1]];
        // wb = w * wa
        for i in 0..2 {
            for j in 0..2 {
                let prod = w[i][0] * wa[0][j] + w[i][1] * wa[1][j];
                assert!((prod - wb[i][j]).norm() < 1e-9, "{i}{j}: {prod} vs {}", wb[i][j]);
            }
        }
    }

    #[test]
    fn collapse_near_singularity() {
        let p = NumHeun::new(c(0.3), c(1.7), c(0.4), c(-1.2), c(0.9), c(2.5));
        let r = integrate(&p, &[PathPiece::Line(c(0.5), c(-0.5))], 1e-12);
        assert!(matches!(r, Err(NumError::StepCollapse { .. }) | Err(NumError::TooManySteps(_))));
    }
}
