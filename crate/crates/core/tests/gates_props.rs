use catbell_core::encoding::{with_ions, EncodingParams, ModeSel};
use catbell_core::gates::{
    cnot_ion_control, parity_leakage, swap_map, truth_table, u_ev, u_ev_surrogate, u_swap,
    u_ve_ideal, u_ve_literal, EvRealization, UevCalibration, VeVariant,
};
use catbell_core::pipeline::swap_operators;
use catbell_core::tensor::apply;
use catbell_core::StateVector;
use proptest::prelude::*;

fn params(alpha: f64) -> EncodingParams {
    EncodingParams::new(alpha, alpha).unwrap()
}

#[test]
fn every_gate_is_unitary() {
    for alpha in [2.0, 3.0, 4.0, 6.0, 8.0] {
        let p = params(alpha);
        for sel in [ModeSel::A, ModeSel::B] {
            let gates = [
                u_ve_ideal(sel, &p).unwrap(),
                u_ve_literal(sel, &p).unwrap().0,
                u_ev(sel, &p, UevCalibration::QuarterTurn).unwrap(),
                u_ev(sel, &p, UevCalibration::HalfTurn).unwrap(),
                u_ev_surrogate(sel, &p).unwrap(),
                u_swap(sel, &p, VeVariant::Ideal, EvRealization::Surrogate).unwrap(),
            ];
            for g in &gates {
                assert!(
                    g.unitarity_residual() < 1e-10,
                    "alpha={alpha} residual={}",
                    g.unitarity_residual()
                );
            }
        }
    }
}

#[test]
fn u_ve_ideal_is_parity_block_diagonal() {
    for alpha in [1.0, 2.0, 4.0, 8.0] {
        let u = u_ve_ideal(ModeSel::A, &params(alpha)).unwrap();
        assert!(parity_leakage(&u) < 1e-12);
    }
}

/// Flipping rows of `u_ev` at `ε = π/(2α)` against `exp(−(π/2α)²)`. This does
/// not hold: `D(iε)` turns the code by `2αε`, so `ε = π/(2α)` is a half turn
/// and the flip rows land on the wrong state.
#[test]
fn u_ev_flip_rows_follow_gaussian_law() {
    let mut failures = Vec::new();
    for alpha in [4.0, 6.0, 8.0] {
        let p = params(alpha);
        let u = u_ev(ModeSel::A, &p, UevCalibration::HalfTurn).unwrap();
        let report = truth_table("u_ev", &u, ModeSel::A, &p, cnot_ion_control).unwrap();
        let eps = core::f64::consts::PI / (2.0 * alpha);
        let want = (-eps * eps).exp();
        for input in [(0, 1), (1, 1)] {
            let got = report.row(input).unwrap().fidelity;
            if (got - want).abs() > 1e-3 {
                failures.push(format!(
                    "alpha={alpha} row {input:?}: {got:.6e} vs {want:.6}"
                ));
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("; "));
}

#[test]
fn swaps_on_different_modes_commute() {
    let p = EncodingParams::with_cutoffs(2.0, 2.0, 24, 24).unwrap();
    let [sa, sb] = swap_operators(&p, VeVariant::Ideal, EvRealization::Surrogate).unwrap();
    let layout = p.full_layout().unwrap();
    let n = layout.total_dim();
    let amps = (0..n)
        .map(|i| {
            catbell_core::C64::new(
                ((i * 7919) % 101) as f64 - 50.0,
                ((i * 104729) % 97) as f64 - 48.0,
            )
        })
        .collect();
    let psi = StateVector::new(layout, amps)
        .unwrap()
        .normalized()
        .unwrap();
    let ab = apply(&sa, &apply(&sb, &psi).unwrap()).unwrap();
    let ba = apply(&sb, &apply(&sa, &psi).unwrap()).unwrap();
    let diff = ab
        .plus(catbell_core::C64::new(-1.0, 0.0), &ba)
        .unwrap()
        .norm();
    assert!(diff < 1e-12, "{diff}");
    // also on a lifted code state
    let modes = catbell_core::encoding::logical_product(1, 0, &p).unwrap();
    let lifted = with_ions(&modes, &p).unwrap();
    let ab = apply(&sa, &apply(&sb, &lifted).unwrap()).unwrap();
    let ba = apply(&sb, &apply(&sa, &lifted).unwrap()).unwrap();
    assert!(
        ab.plus(catbell_core::C64::new(-1.0, 0.0), &ba)
            .unwrap()
            .norm()
            < 1e-12
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn surrogate_swap_transfers_exactly(alpha in 1.0f64..5.0) {
        let p = params(alpha);
        for sel in [ModeSel::A, ModeSel::B] {
            let u = u_swap(sel, &p, VeVariant::Ideal, EvRealization::Surrogate).unwrap();
            let report = truth_table("swap", &u, sel, &p, swap_map).unwrap();
            for row in &report.rows {
                prop_assert!((row.fidelity - 1.0).abs() < 1e-10, "{:?}", row);
            }
        }
    }
}
