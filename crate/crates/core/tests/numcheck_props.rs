use heunfactor::numcheck::{classify_apparency, mat_dist, monodromy, monodromy_instance, Apparency, LoopTarget};

#[test]
fn classification_of_sampled_instances() {
    for seed in 0..8u64 {
        let (_, ap) = monodromy_instance(seed, true).unwrap();
        let c = classify_apparency(&ap, 1e-12).unwrap();
        assert!(matches!(c, Apparency::Apparent(_)), "seed {seed}: {c:?}");
        let (_, bad) = monodromy_instance(seed, false).unwrap();
        let c = classify_apparency(&bad, 1e-12).unwrap();
        assert!(matches!(c, Apparency::NotApparent(_)), "seed {seed}: {c:?}");
    }
}

#[test]
fn halving_the_tolerance_is_stable() {
    for seed in 0..4u64 {
        let (_, p) = monodromy_instance(seed, seed % 2 == 0).unwrap();
        for target in [LoopTarget::Zero, LoopTarget::One, LoopTarget::T] {
            let a = monodromy(&p, target, 1e-10).unwrap();
            let b = monodromy(&p, target, 5e-11).unwrap();
            let d = mat_dist(&a.entries, &b.entries);
            assert!(d < 1e-7, "seed {seed} {target:?}: {d}");
        }
    }
}
