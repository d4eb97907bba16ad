use catbell_core::bosonic::default_cutoff;
use catbell_core::encoding::{
    bell_target, entangled_analytic, logical_product, prepare_modes, rotation_fidelity, BellKind,
    EncodingParams, Factorization, ModeSel, RotationFidelity,
};
use catbell_core::tensor::{partial_trace_pure, state_fidelity};
use catbell_core::MODE_A;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn logical_basis_is_orthonormal(alpha in 0.5f64..4.0, beta in 0.5f64..4.0) {
        let p = EncodingParams::new(alpha, beta).unwrap();
        let basis: Vec<_> = (0..4u8).map(|k| logical_product(k >> 1, k & 1, &p).unwrap()).collect();
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let g = u.inner(v).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g.re - want).abs() < 1e-10 && g.im.abs() < 1e-10, "G[{}][{}] = {}", i, j, g);
            }
        }
    }

    #[test]
    fn both_factorizations_agree(alpha in 0.5f64..4.0, beta in 0.5f64..4.0) {
        let p = EncodingParams::new(alpha, beta).unwrap();
        let on_b = entangled_analytic(&p, Factorization::CatsOnB).unwrap();
        let on_a = entangled_analytic(&p, Factorization::CatsOnA).unwrap();
        let f = state_fidelity(&on_a, &on_b).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-10, "{}", f);
        let prepared = prepare_modes(&p).unwrap();
        prop_assert!((state_fidelity(&prepared, &on_b).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn branch_fidelity_approaches_gaussian_law() {
    let theta = core::f64::consts::FRAC_PI_4;
    for alpha in [2.0, 3.0, 4.0] {
        // the default cutoff leaks ~1e-10 of norm, which would swamp the
        // bound at α=4
        let n = default_cutoff(alpha) + 20;
        let p = EncodingParams::with_cutoffs(alpha, alpha, n, n).unwrap();
        let f = rotation_fidelity(theta, ModeSel::A, &p).unwrap();
        let bound = 5.0 * (-2.0 * alpha * alpha).exp();
        assert!(
            f.max_error() <= bound,
            "alpha={alpha} error={} bound={bound}",
            f.max_error()
        );
        assert!(f.max_error() <= RotationFidelity::tolerance(alpha));
    }
}

#[test]
fn bell_target_is_maximally_entangled() {
    for alpha in [1.0, 2.0, 3.0] {
        let p = EncodingParams::new(alpha, alpha).unwrap();
        let phi = bell_target(BellKind::PhiPlus, &p).unwrap();
        let s = partial_trace_pure(&phi, &[MODE_A]).unwrap().entropy_bits();
        assert!((s - 1.0).abs() < 1e-6, "alpha={alpha} S={s}");
    }
}
