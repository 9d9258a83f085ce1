use heunfactor::exactalg::scalar::rat;
use heunfactor::xjacobi::{
    orthogonality_check, x1_4f3_check, x1_heun_annihilates, x1_heun_params, x1_jacobi, x1_linear_root, x1_ode_residual, x1_point,
    JacobiParams,
};
use heunfactor::Rational;
use num_traits::Zero;
use proptest::prelude::*;

/// `(g, h)` with `g, h > -1/2` and `g != h`.
fn gh() -> impl Strategy<Value = (Rational, Rational)> {
    ((-3i64..=40, 1i64..=8), (-3i64..=40, 1i64..=8))
        .prop_map(|((a, b), (c, d))| (rat(a, b), rat(c, d)))
        .prop_filter("integrable, distinct", |(g, h)| *g > rat(-1, 2) && *h > rat(-1, 2) && g != h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_identities((g, h) in gh(), k in 0u32..=6) {
        let p = JacobiParams::new(k, g, h).unwrap();
        let x = x1_jacobi(&p);
        prop_assert_eq!(x.degree(), k as usize + 1);
        prop_assert!(x1_ode_residual(&p, &x.poly).is_zero());
        prop_assert!(x1_heun_annihilates(&p).unwrap());
        prop_assert!(!x1_4f3_check(&p).unwrap().is_zero());
    }

    #[test]
    fn heun_data_on_the_x1_locus((g, h) in gh(), k in 0u32..=6) {
        let hp = x1_heun_params(&JacobiParams::new(k, g, h).unwrap()).unwrap();
        prop_assert_eq!(x1_point(&hp.alpha, &hp.beta, &hp.gamma).unwrap(), hp.t.clone());
        prop_assert_eq!(x1_linear_root(&hp.alpha, &hp.beta, &hp.gamma).unwrap(), hp.q.clone());
    }

    #[test]
    fn orthogonal_for_distinct_degrees((g, h) in gh(), j in 0u32..=5, dk in 1u32..=3) {
        let ip = orthogonality_check(j, j + dk, &g, &h, 40).unwrap();
        prop_assert!(ip.value.abs() < 1e-8 * ip.scale.max(1.0), "{:?}", ip);
    }
}
