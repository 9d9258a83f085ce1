//! Fraction-free (Bareiss) elimination over any [`Ring`] with exact division.

use super::ring::Ring;
use super::ExactError;

/// Result of fraction-free elimination: `x_i = numerators[i] / det`.
#[derive(Clone, Debug)]
pub struct FractionFree<R> {
    pub numerators: Vec<R>,
    pub det: R,
}

fn pivot_row<R: Ring>(m: &[Vec<R>], k: usize) -> Option<usize> {
    if R::EXACT {
        (k..m.len()).find(|&i| !m[i][k].is_zero_elem())
    } else {
        (k..m.len())
            .filter(|&i| !m[i][k].is_zero_elem())
            .max_by(|&a, &b| m[a][k].magnitude().total_cmp(&m[b][k].magnitude()))
    }
}

fn check_shape<R>(a: &[Vec<R>], b: &[R]) -> Result<usize, ExactError> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(ExactError::Dimension(format!("expected a square {n}x{n} system")));
    }
    Ok(n)
}

/// Solve `a x = b` and return numerators over a common determinant.
/// Every division performed is exact in the ring.
pub fn solve_fraction_free<R: Ring>(a: &[Vec<R>], b: &[R]) -> Result<FractionFree<R>, ExactError> {
    let n = check_shape(a, b)?;
    if n == 0 {
        return Err(ExactError::Dimension("empty system".into()));
    }
    let mut m: Vec<Vec<R>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut prev = a[0][0].one_like();
    let mut sign_flip = false;
    for k in 0..n {
        let Some(p) = pivot_row(&m, k) else {
            return Err(ExactError::Singular { rank: rank(a, 0.0), size: n });
        };
        if p != k {
            m.swap(p, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = m[k][k].mul_ref(&m[i][j]).sub_ref(&m[i][k].mul_ref(&m[k][j]));
                m[i][j] = v.exact_div(&prev).ok_or(ExactError::NotDivisible)?;
            }
            m[i][k] = m[i][k].zero_like();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    let mut y: Vec<R> = vec![det.zero_like(); n];
    for i in (0..n).rev() {
        let mut acc = det.mul_ref(&m[i][n]);
        for j in i + 1..n {
            acc = acc.sub_ref(&m[i][j].mul_ref(&y[j]));
        }
        y[i] = acc.exact_div(&m[i][i]).ok_or(ExactError::NotDivisible)?;
    }
    let det = if sign_flip { det.negate() } else { det };
    if sign_flip {
        y = y.iter().map(|v| v.negate()).collect();
    }
    Ok(FractionFree { numerators: y, det })
}

/// Solve `a x = b`, requiring each `x_i` to lie in the ring.
pub fn solve_linear<R: Ring>(a: &[Vec<R>], b: &[R]) -> Result<Vec<R>, ExactError> {
    let ff = solve_fraction_free(a, b)?;
    ff.numerators
        .iter()
        .map(|y| y.exact_div(&ff.det).ok_or(ExactError::NotDivisible))
        .collect()
}

/// Reduce `row` against an echelon basis; returns the residual row.
fn reduce_row<R: Ring>(basis: &[(usize, Vec<R>)], mut row: Vec<R>) -> Vec<R> {
    for (p, b) in basis {
        if row[*p].is_zero_elem() {
            continue;
        }
        if R::EXACT {
            let (bp, rp) = (b[*p].clone(), row[*p].clone());
            row = row
                .iter()
                .zip(b)
                .map(|(x, y)| bp.mul_ref(x).sub_ref(&rp.mul_ref(y)))
                .collect();
        } else {
            let f = row[*p].exact_div(&b[*p]).expect("nonzero pivot");
            row = row.iter().zip(b).map(|(x, y)| x.sub_ref(&f.mul_ref(y))).collect();
            row[*p] = row[*p].zero_like();
        }
    }
    row
}

fn leading_index<R: Ring>(row: &[R], scale: f64, tol: f64) -> Option<usize> {
    if R::EXACT {
        row.iter().position(|x| !x.is_zero_elem())
    } else {
        let (i, best) = row
            .iter()
            .enumerate()
            .map(|(i, x)| (i, x.magnitude()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        (best > tol * scale.max(f64::MIN_POSITIVE)).then_some(i)
    }
}

/// Greedily pick rows (in order) that increase the rank, stopping at `want`.
/// `tol` is the relative threshold for inexact rings.
pub fn select_independent_rows<R: Ring>(rows: &[Vec<R>], want: usize, tol: f64) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<R>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        if chosen.len() == want {
            break;
        }
        let scale = row.iter().map(|x| x.magnitude()).fold(0.0, f64::max);
        if scale == 0.0 && !R::EXACT {
            continue;
        }
        let red = reduce_row(&basis, row.clone());
        if let Some(p) = leading_index(&red, scale, tol) {
            basis.push((p, red));
            chosen.push(idx);
        }
    }
    chosen
}

/// Rank of a matrix (relative tolerance `tol` for inexact rings).
pub fn rank<R: Ring>(rows: &[Vec<R>], tol: f64) -> usize {
    let tol = if tol > 0.0 { tol } else { 1e-12 };
    select_independent_rows(rows, usize::MAX, tol).len()
}
