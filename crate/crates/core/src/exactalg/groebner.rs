//! Buchberger's algorithm in graded lex order over an exact coefficient field.

use super::multipoly::MultiPoly;
use super::scalar::Scalar;
use super::ExactError;

/// Full reduction of `p` by `basis` (every term, not just the leading one).
pub fn normal_form<F: Scalar>(p: &MultiPoly<F>, basis: &[MultiPoly<F>]) -> MultiPoly<F> {
    let leads: Vec<_> = basis
        .iter()
        .filter_map(|g| g.leading().map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    let basis: Vec<&MultiPoly<F>> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut rem = MultiPoly::zero(p.ring());
    let mut r = p.clone();
    while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let (lm, lc) = &leads[k];
                let t = m.div(lm);
                let f = c / lc.clone();
                r = &r - &basis[k].mul_monomial(&t, &f);
            }
            None => {
                rem.add_term(m.clone(), c.clone());
                r = &r - &MultiPoly::monomial(p.ring(), m, c);
            }
        }
    }
    rem
}

fn s_poly<F: Scalar>(f: &MultiPoly<F>, g: &MultiPoly<F>) -> MultiPoly<F> {
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_monomial(&l.div(fm), &(F::one() / fc.clone()));
    let b = g.mul_monomial(&l.div(gm), &(F::one() / gc.clone()));
    &a - &b
}

fn coprime(a: &super::multipoly::Monomial, b: &super::multipoly::Monomial) -> bool {
    a.exps().iter().zip(b.exps()).all(|(x, y)| *x == 0 || *y == 0)
}

/// Reduced Gröbner basis of the ideal generated by `gens`. `budget` bounds
/// the number of S-polynomial reductions.
pub fn groebner_basis<F: Scalar>(gens: &[MultiPoly<F>], budget: usize) -> Result<Vec<MultiPoly<F>>, ExactError> {
    let mut g: Vec<MultiPoly<F>> = gens.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut spent = 0;
    while !pairs.is_empty() {
        // Normal selection strategy: smallest lcm first.
        let k = (0..pairs.len())
            .min_by_key(|&k| {
                let (i, j) = pairs[k];
                g[i].leading().unwrap().0.lcm(g[j].leading().unwrap().0)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(k);
        if coprime(g[i].leading().unwrap().0, g[j].leading().unwrap().0) {
            continue;
        }
        spent += 1;
        if spent > budget {
            return Err(ExactError::Budget(budget));
        }
        let r = normal_form(&s_poly(&g[i], &g[j]), &g);
        if !r.is_zero() {
            let n = g.len();
            g.push(r.monic());
            for i in 0..n {
                pairs.push((i, n));
            }
        }
    }
    Ok(reduce_basis(g))
}

fn reduce_basis<F: Scalar>(mut g: Vec<MultiPoly<F>>) -> Vec<MultiPoly<F>> {
    // Drop elements whose leading monomial is divisible by another's.
    let mut keep: Vec<MultiPoly<F>> = Vec::new();
    g.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    for p in g {
        let lm = p.leading().unwrap().0.clone();
        if !keep.iter().any(|q| q.leading().unwrap().0.divides(&lm)) {
            keep.push(p);
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let others: Vec<MultiPoly<F>> = keep.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p.clone()).collect();
        let lead = keep[k].leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let tail = &keep[k] - &MultiPoly::monomial(keep[k].ring(), lead.0.clone(), lead.1.clone());
        let mut r = normal_form(&tail, &others);
        r.add_term(lead.0, lead.1);
        out.push(r.monic());
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

/// Whether every S-polynomial of `basis` reduces to zero.
pub fn is_groebner<F: Scalar>(basis: &[MultiPoly<F>]) -> bool {
    for j in 0..basis.len() {
        for i in 0..j {
            if !normal_form(&s_poly(&basis[i], &basis[j]), basis).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Normal form of `p` modulo the ideal of `basis`; recomputes a Gröbner
/// basis first when `basis` is not one.
pub fn groebner_reduce<F: Scalar>(p: &MultiPoly<F>, basis: &[MultiPoly<F>], budget: usize) -> Result<MultiPoly<F>, ExactError> {
    if is_groebner(basis) {
        Ok(normal_form(p, basis))
    } else {
        let g = groebner_basis(basis, budget)?;
        Ok(normal_form(p, &g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::multipoly::PolyRing;
    use crate::exactalg::scalar::{rint, Rational};

    type P = MultiPoly<Rational>;

    #[test]
    fn member_and_unit() {
        let r = PolyRing::new(["x", "y"]);
        let x = P::var(&r, "x").unwrap();
        let y = P::var(&r, "y").unwrap();
        let f1 = &(&x * &x) - &y;
        let f2 = &(&x * &y) - &P::one(&r);
        let g = groebner_basis(&[f1.clone(), f2.clone()], 1000).unwrap();
        assert!(is_groebner(&g));
        assert!(normal_form(&f1, &g).is_zero());
        assert!(normal_form(&(&f1 * &y + &f2 * &x), &g).is_zero());
        assert_eq!(groebner_reduce(&P::one(&r), &[f1, f2], 1000).unwrap(), P::one(&r));
        // Inconsistent system collapses to {1}.
        let bad = groebner_basis(&[x.clone(), &x - &P::from_rational(&r, &rint(1))], 100).unwrap();
        assert_eq!(bad, vec![P::one(&r)]);
    }
}
