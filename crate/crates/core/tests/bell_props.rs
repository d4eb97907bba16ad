mod common;

use catbell_core::bell::{
    chsh, chsh_analytic, correlation_analytic, correlation_exact, correlation_rotated, BellAngles,
    ChshMode,
};
use catbell_core::encoding::EncodingParams;
use catbell_core::gates::electronic_phi_plus;
use catbell_core::noise::{mixed_bell, HeatingParams};
use catbell_core::pipeline::{default_config, full_pipeline, gamma_for_delta};
use catbell_core::{DensityMatrix, SpaceLayout};
use common::{complex_vec, ket};
use core::f64::consts::PI;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn product_states_respect_the_classical_bound(a in complex_vec(2), b in complex_vec(2)) {
        let q = SpaceLayout::new([2]).unwrap();
        let (Some(a), Some(b)) = (ket(&q, a), ket(&q, b)) else { return Ok(()) };
        let rho = DensityMatrix::from_pure(&a.tensor(&b).unwrap());
        let out = chsh(&rho, &BellAngles::default(), ChshMode::Exact).unwrap();
        prop_assert!(out.b <= 2.0 + 1e-8, "B={}", out.b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn phi_plus_never_exceeds_tsirelson(t in prop::array::uniform4(-PI..PI)) {
        let rho = DensityMatrix::from_pure(&electronic_phi_plus().unwrap());
        let out = chsh(&rho, &BellAngles::new(t[0], t[1], t[2], t[3]), ChshMode::Exact).unwrap();
        prop_assert!(out.b <= 2.0 * 2f64.sqrt() + 1e-6);
    }
}

#[test]
fn correlation_formulas_agree() {
    for delta in [0.0, 0.1, 0.29, 0.5] {
        let rho = mixed_bell(delta).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let t1 = -PI + 2.0 * PI * i as f64 / 10.0;
                let t2 = -PI + 2.0 * PI * j as f64 / 10.0;
                let e = correlation_exact(&rho, t1, t2).unwrap();
                let r = correlation_rotated(&rho, t1, t2).unwrap();
                let a = correlation_analytic(delta, t1, t2);
                assert!(
                    (e - r).abs() < 1e-8 && (e - a).abs() < 1e-8 && (r - a).abs() < 1e-8,
                    "delta={delta} ({t1},{t2}): {e} {r} {a}"
                );
            }
        }
    }
}

#[test]
fn pipeline_closes_on_the_analytic_value() {
    for delta in [0.0, 0.1] {
        let enc = EncodingParams::with_cutoffs(2.0, 2.0, 30, 30).unwrap();
        let heat = HeatingParams::new(gamma_for_delta(delta, 2.0, 1.0), 0.0, 1.0, 0.01).unwrap();
        let out = full_pipeline(&default_config(enc, heat)).unwrap();
        let want = chsh_analytic(delta);
        assert!(
            (out.bell.b - want).abs() < 2e-3,
            "delta={delta} B={} want {want}",
            out.bell.b
        );
    }
}
