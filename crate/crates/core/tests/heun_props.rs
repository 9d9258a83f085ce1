use heunfactor::exactalg::scalar::rat;
use heunfactor::exactalg::{ParamElem, Ring};
use heunfactor::heun::{
    apparency_poly, check_implication, implication_instance, trichotomy_check, HeunParams, HeunSpec, Implication, ParamValue,
};
use heunfactor::Rational;
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn implication_suite() {
    let mut failed = Vec::new();
    for (i, dir) in [Implication::PolImpliesApp, Implication::AppImpliesPol].into_iter().enumerate() {
        for seed in 0..50u64 {
            let p = implication_instance(dir, 1000 * i as u64 + seed).unwrap();
            let c = check_implication(&p, dir).unwrap();
            if !(c.pass && c.divides_exactly) {
                failed.push((dir, seed, c));
            }
        }
    }
    assert!(failed.is_empty(), "{failed:?}");
}

fn grid_instance(alpha: i64, eps: i64, rng: &mut ChaCha8Rng) -> HeunParams<Rational> {
    let mut frac = || loop {
        let d = rng.gen_range(2..=7i64);
        let n = rng.gen_range(-30..=30i64);
        if n % d != 0 {
            break rat(n, d);
        }
    };
    let (beta, gamma) = (frac(), frac());
    let t = rat(2, 1) + frac().abs();
    HeunSpec {
        alpha: ParamValue::int(alpha),
        beta: ParamValue::rational(&beta),
        gamma: ParamValue::rational(&gamma),
        delta: None,
        epsilon: ParamValue::int(eps),
        q: ParamValue::sym("q"),
        t: ParamValue::rational(&t),
    }
    .build(&[])
    .unwrap()
}

#[test]
fn trichotomy_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let mut failed = Vec::new();
    for alpha in -5..=5 {
        for eps in -5..=0 {
            let p = grid_instance(alpha, eps, &mut rng);
            let c = trichotomy_check(&p).unwrap();
            assert_eq!(c.roots as i64, 1 - eps);
            if !c.pass {
                failed.push(c);
            }
        }
    }
    assert!(failed.is_empty(), "{failed:?}");
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn epsilon_minus_one_closed_form(a in rational(), b in rational(), g in rational(), t in rational()) {
        prop_assume!(t != rat(0, 1) && t != rat(1, 1));
        let p: HeunParams<Rational> = HeunSpec {
            alpha: ParamValue::rational(&a),
            beta: ParamValue::rational(&b),
            gamma: ParamValue::rational(&g),
            delta: None,
            epsilon: ParamValue::int(-1),
            q: ParamValue::sym("q"),
            t: ParamValue::rational(&t),
        }
        .build(&[])
        .unwrap();
        let r = p.ring();
        let c = |x: &Rational| -> ParamElem<Rational> { r.rational(x) };
        let q = p.q.clone();
        // q^2 - ((2ab + a + b) t - g + 1) q + ab t ((a+1)(b+1) t - g)
        let lin = c(&((rat(2, 1) * &a * &b + &a + &b) * &t - &g + rat(1, 1)));
        let tail = c(&(&a * &b * &t * ((&a + rat(1, 1)) * (&b + rat(1, 1)) * &t - &g)));
        let expect = q.mul_ref(&q).sub_ref(&lin.mul_ref(&q)).add_ref(&tail);
        prop_assert_eq!(apparency_poly(&p).unwrap(), expect);
    }
}
