mod common;

use catbell_core::bosonic::{annihilation, cat, creation, number_op, ModeParams, Parity};
use catbell_core::encoding::{bell_target, BellKind, EncodingParams};
use catbell_core::noise::{
    evolve_lindblad, mixed_bell, mode_parity, project_to_code, sample_ensemble, HeatingParams,
    RateModel,
};
use catbell_core::oracles::poisson_odd_probability;
use catbell_core::tensor::{apply, expectation, expectation_dm, uhlmann_fidelity};
use catbell_core::{DensityMatrix, SpaceLayout, StateVector, C64, MODE_A, MODE_B};
use common::complex_vec;
use proptest::prelude::*;

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn trajectories_reproduce_the_master_equation() {
    let mode = ModeParams::new(30, 1e-4).unwrap();
    let psi = cat(C64::new(2.0, 0.0), Parity::Even, &mode).unwrap();
    let heat = HeatingParams::new(0.05, 0.0, 1.0, 0.01).unwrap();
    let rho = evolve_lindblad(&DensityMatrix::from_pure(&psi), &heat, &[0]).unwrap();
    let n_op = number_op(&mode).unwrap();
    let n_me = expectation_dm(&n_op, &rho).unwrap().re;
    let par_me = (0..30)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * rho.matrix()[(k, k)].re)
        .sum::<f64>();

    let ens = sample_ensemble(&psi, &heat, &[0], RateModel::Instantaneous, 10_000, 11).unwrap();
    let ns: Vec<f64> = ens
        .iter()
        .map(|t| expectation(&n_op, &t.state).unwrap().re)
        .collect();
    let ps: Vec<f64> = ens
        .iter()
        .map(|t| mode_parity(&t.state, 0).unwrap())
        .collect();
    let (n_mc, n_se) = mean_and_se(&ns);
    let (p_mc, p_se) = mean_and_se(&ps);
    assert!(
        (n_mc - n_me).abs() <= 3.0 * n_se,
        "<n>: {n_mc} ± {n_se} vs {n_me}"
    );
    assert!(
        (p_mc - par_me).abs() <= 3.0 * p_se,
        "parity: {p_mc} ± {p_se} vs {par_me}"
    );
}

/// Logical-projected ensemble state, each trajectory weighted by its code
/// weight.
fn projected_ensemble(states: &[StateVector], p: &EncodingParams) -> DensityMatrix {
    let mut comps = Vec::new();
    for s in states {
        let (w, ket) = project_to_code(s, p).unwrap();
        if let Some(k) = ket {
            comps.push((w, k));
        }
    }
    let total: f64 = comps.iter().map(|c| c.0).sum();
    let refs: Vec<_> = comps.iter().map(|(w, k)| (w / total, k)).collect();
    DensityMatrix::from_mixture(&refs).unwrap()
}

#[test]
fn single_jump_model_holds_for_small_delta() {
    let p = EncodingParams::with_cutoffs(2.0, 2.0, 26, 26).unwrap();
    let phi = bell_target(BellKind::PhiPlus, &p).unwrap();
    let n_op = number_op(&p.mode_a)
        .unwrap()
        .on(phi.layout(), &[MODE_A])
        .unwrap();
    let n0 = expectation(&n_op, &phi).unwrap().re;
    for delta in [0.02, 0.05] {
        let gamma = delta / 4.0;
        let heat = HeatingParams::new(gamma, 0.0, 1.0, 0.01).unwrap();
        let ens =
            sample_ensemble(&phi, &heat, &[MODE_A], RateModel::Instantaneous, 2_000, 5).unwrap();
        let states: Vec<_> = ens.into_iter().map(|t| t.state).collect();
        let rho = projected_ensemble(&states, &p);
        // every up or down jump flips the code parity
        let flip = poisson_odd_probability(gamma * (2.0 * n0 + 1.0));
        let f = uhlmann_fidelity(&rho, &mixed_bell(flip).unwrap()).unwrap();
        assert!(f >= 0.995, "delta={delta} F={f}");
    }
}

#[test]
fn a_jump_on_either_mode_lands_in_psi_plus() {
    let p = EncodingParams::new(3.0, 3.0).unwrap();
    let phi = bell_target(BellKind::PhiPlus, &p).unwrap();
    let psi_plus = StateVector::new(
        SpaceLayout::new([2, 2]).unwrap(),
        vec![
            C64::new(0.0, 0.0),
            C64::new(0.5f64.sqrt(), 0.0),
            C64::new(0.5f64.sqrt(), 0.0),
            C64::new(0.0, 0.0),
        ],
    )
    .unwrap();
    for (sub, mode) in [(MODE_A, &p.mode_a), (MODE_B, &p.mode_b)] {
        let a = annihilation(mode)
            .unwrap()
            .on(phi.layout(), &[sub])
            .unwrap();
        let out = apply(&a, &phi).unwrap().normalized().unwrap();
        let (_, ket) = project_to_code(&out, &p).unwrap();
        let f = catbell_core::tensor::state_fidelity(&ket.unwrap(), &psi_plus).unwrap();
        assert!((f - 1.0).abs() < 1e-8, "subsystem {sub}: F={f}");
    }
}

proptest! {
    #[test]
    fn ladder_operators_flip_parity_support(amps in complex_vec(20)) {
        let mode = ModeParams::new(20, 1e-4).unwrap();
        let layout = mode.layout().unwrap();
        let even: Vec<C64> = amps.iter().enumerate()
            .map(|(n, &a)| if n % 2 == 0 { a } else { C64::new(0.0, 0.0) })
            .collect();
        let psi = StateVector::new(layout, even).unwrap();
        for op in [annihilation(&mode).unwrap(), creation(&mode).unwrap()] {
            let out = apply(&op, &psi).unwrap();
            for (n, a) in out.amplitudes().iter().enumerate() {
                if n % 2 == 0 {
                    prop_assert!(*a == C64::new(0.0, 0.0), "even level {} populated", n);
                }
            }
        }
    }
}
