use heunfactor::exactalg::scalar::{rat, rint};
use heunfactor::ghg::{ghg_operator, pfq_eval, pfq_sym_eval, pfq_terms, GHGParams};
use heunfactor::oredop::ZFrac;
use heunfactor::Rational;
use proptest::prelude::*;

/// Rationals with denominator 2..=7 and a nonzero fractional part, so no
/// Pochhammer symbol of a lower parameter vanishes.
fn fractional() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 2i64..=7)
        .prop_filter("non-integer", |(n, d)| n % d != 0)
        .prop_map(|(n, d)| rat(n, d))
}

fn ghg_params() -> impl Strategy<Value = GHGParams<Rational>> {
    (1usize..=3).prop_flat_map(|q| {
        (prop::collection::vec(fractional(), q + 1), prop::collection::vec(fractional(), q))
            .prop_map(|(u, l)| GHGParams::new(u, l))
    })
}

const K: usize = 12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn operator_annihilates_partial_sums(g in ghg_params()) {
        let q = g.lower.len();
        let one = rint(1);
        let l = ghg_operator(&g).unwrap();
        prop_assert_eq!(l.order(), Some(q + 1));
        let lc = l.leading().unwrap();
        prop_assert!(lc.is_polynomial() && lc.numer() == [rint(1)]);
        let t = pfq_terms(&g.upper, &g.lower, &one, K).unwrap();
        let y = ZFrac::poly(l.coeff(0).poles(), t, &one);
        let num = l.apply(&y).numer_over(&[q as u32, 1]);
        for n in 0..=(K - q - 1) {
            prop_assert!(num.get(n).is_none_or(|c| c == &rint(0)), "z^{}", n);
        }
    }

    #[test]
    fn symmetric_form_matches_explicit(
        k in 0u32..=6,
        g in (1i64..=12, 1i64..=4).prop_map(|(n, d)| rat(n, d)),
        h in (-8i64..=8, 1i64..=4).prop_map(|(n, d)| rat(n, d)),
        e1 in fractional(),
        e2 in fractional(),
        z in (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d)),
    ) {
        let explicit = GHGParams::new(
            vec![rint(-(k as i64) - 1), rint(k as i64 + 1) + &g + &h, &e1 + rint(1), &e2 + rint(1)],
            vec![&g + rat(3, 2), e1.clone(), e2.clone()],
        );
        let v = pfq_eval(&explicit, &z, 64).unwrap();
        prop_assert!(v.terminating);
        prop_assert_eq!(pfq_sym_eval(k, &g, &h, &(&e1 + &e2), &(&e1 * &e2), &z).unwrap(), v.value);
    }
}
