//! The end-to-end protocol: cross-Kerr preparation, a Hadamard on mode `a`,
//! heating, a swap into each ion, and a CHSH test on the ions.
//!
//! Mixedness is carried as a [`Mixture`] of kets on the full layout, so no
//! full-space density matrix is ever formed.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;

use crate::bell::{chsh, BellAngles, BellOutcome, ChshMode};
use crate::encoding::{
    ideal_logical_rotation, prepare_modes, with_ions, EncodingParams, LogicalRotation, ModeSel,
};
use crate::gates::{electronic_phi_plus, u_swap, EvRealization, VeVariant};
use crate::noise::{
    delta_of, mixed_bell, sample_trajectory, trajectory_rng, HeatingParams, RateModel, Trajectory,
};
use crate::tensor::{
    apply, dm_fidelity, uhlmann_fidelity, DensityMatrix, Mixture, OperatorMatrix, StateVector,
};
use crate::{Result, ION_1, ION_2, MODE_A, MODE_B};

/// How heating enters the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeatingStage {
    /// Weight `1 − δ` untouched, weight `δ_a` (`δ_b`) one phonon removed from
    /// mode `a` (`b`), with `δ_m = γ_m α_m² T`.
    SingleJump,
    /// Equal-weight ensemble of quantum-jump trajectories.
    Trajectories {
        count: usize,
        seed: u64,
        model: RateModel,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub encoding: EncodingParams,
    pub heating: HeatingParams,
    pub heating_stage: HeatingStage,
    pub ve: VeVariant,
    pub ev: EvRealization,
    pub angles: BellAngles,
    pub chsh_mode: ChshMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineResult {
    /// `δ_a + δ_b`.
    pub delta: f64,
    /// Reduced state of the two ions after both swaps.
    pub ion_state: DensityMatrix,
    /// `⟨φ⁺|ρ_ions|φ⁺⟩`.
    pub phi_plus_fidelity: f64,
    /// Uhlmann fidelity of `ρ_ions` with `mixed_bell(δ)`.
    pub mixed_bell_fidelity: f64,
    pub bell: BellOutcome,
}

/// `δ_a + δ_b` for the configured rates.
pub fn pipeline_delta(encoding: &EncodingParams, heating: &HeatingParams) -> f64 {
    delta_of(heating.gamma_a, encoding.alpha, heating.duration)
        + delta_of(heating.gamma_b, encoding.beta, heating.duration)
}

/// Cross-Kerr preparation followed by the ideal Hadamard on mode `a`, on the
/// two-mode layout.
pub fn stage_prepare(encoding: &EncodingParams) -> Result<StateVector> {
    let psi = prepare_modes(encoding)?;
    let h = ideal_logical_rotation(LogicalRotation::Hadamard, ModeSel::A, encoding)?
        .on(psi.layout(), &[MODE_A])?;
    apply(&h, &psi)
}

fn lowered(state: &StateVector, subsystem: usize) -> Result<StateVector> {
    let layout = state.layout();
    let cutoff = layout.dims()[subsystem];
    let a = crate::bosonic::annihilation(&crate::bosonic::ModeParams {
        cutoff,
        leak_tol: crate::bosonic::DEFAULT_LEAK_TOL,
    })?
    .on(layout, &[subsystem])?;
    apply(&a, state)?.normalized()
}

/// Single-jump heating channel on a two-mode ket.
pub fn stage_heat_single_jump(
    state: &StateVector,
    encoding: &EncodingParams,
    heating: &HeatingParams,
) -> Result<Mixture> {
    let da = delta_of(heating.gamma_a, encoding.alpha, heating.duration);
    let db = delta_of(heating.gamma_b, encoding.beta, heating.duration);
    let mut components = Vec::with_capacity(3);
    components.push((1.0 - da - db, state.clone()));
    if da > 0.0 {
        components.push((da, lowered(state, MODE_A)?));
    }
    if db > 0.0 {
        components.push((db, lowered(state, MODE_B)?));
    }
    Mixture::new(components)
}

/// Samples trajectory `index` of the heating ensemble.
pub fn heating_trajectory(
    state: &StateVector,
    heating: &HeatingParams,
    model: RateModel,
    seed: u64,
    index: usize,
) -> Result<Trajectory> {
    let mut rng = trajectory_rng(seed, index as u64);
    sample_trajectory(state, heating, &[MODE_A, MODE_B], model, &mut rng)
}

/// Equal-weight mixture of trajectory end states.
pub fn mixture_from_trajectories(trajectories: Vec<Trajectory>) -> Result<Mixture> {
    let w = 1.0 / trajectories.len() as f64;
    Mixture::new(trajectories.into_iter().map(|t| (w, t.state)).collect())
}

/// Appends the ions and applies the swap on `(a, ion 1)` and then on
/// `(b, ion 2)`.
pub fn stage_swap(
    heated: &Mixture,
    encoding: &EncodingParams,
    ve: VeVariant,
    ev: EvRealization,
) -> Result<Mixture> {
    let full = encoding.full_layout()?;
    let swap_a = u_swap(ModeSel::A, encoding, ve, ev)?.on(&full, &[MODE_A, ION_1])?;
    let swap_b = u_swap(ModeSel::B, encoding, ve, ev)?.on(&full, &[MODE_B, ION_2])?;
    heated.map(|psi| {
        let lifted = with_ions(psi, encoding)?;
        apply(&swap_b, &apply(&swap_a, &lifted)?)
    })
}

/// Both swaps as operators on the full layout, in application order.
pub fn swap_operators(
    encoding: &EncodingParams,
    ve: VeVariant,
    ev: EvRealization,
) -> Result<[OperatorMatrix; 2]> {
    let full = encoding.full_layout()?;
    Ok([
        u_swap(ModeSel::A, encoding, ve, ev)?.on(&full, &[MODE_A, ION_1])?,
        u_swap(ModeSel::B, encoding, ve, ev)?.on(&full, &[MODE_B, ION_2])?,
    ])
}

/// Ion state, fidelities and CHSH value of the swapped mixture.
pub fn stage_readout(
    swapped: &Mixture,
    delta: f64,
    angles: &BellAngles,
    mode: ChshMode,
) -> Result<PipelineResult> {
    let ion_state = swapped.reduced(&[ION_1, ION_2])?.symmetrized();
    let phi = electronic_phi_plus()?;
    let phi_plus_fidelity = dm_fidelity(&ion_state, &phi)?;
    let reference = mixed_bell(delta.clamp(0.0, 1.0))?;
    let mixed_bell_fidelity = uhlmann_fidelity(&ion_state, &reference)?;
    let bell = chsh(&ion_state, angles, mode)?;
    Ok(PipelineResult {
        delta,
        ion_state,
        phi_plus_fidelity,
        mixed_bell_fidelity,
        bell,
    })
}

/// Runs everything after heating on an already heated two-mode mixture.
pub fn finish_pipeline(config: &PipelineConfig, heated: &Mixture) -> Result<PipelineResult> {
    let swapped = stage_swap(heated, &config.encoding, config.ve, config.ev)?;
    let delta = pipeline_delta(&config.encoding, &config.heating);
    stage_readout(&swapped, delta, &config.angles, config.chsh_mode)
}

/// The whole protocol, single-threaded.
pub fn full_pipeline(config: &PipelineConfig) -> Result<PipelineResult> {
    config.encoding.validate()?;
    config.heating.validate()?;
    let prepared = stage_prepare(&config.encoding)?;
    let heated = match config.heating_stage {
        HeatingStage::SingleJump => {
            stage_heat_single_jump(&prepared, &config.encoding, &config.heating)?
        }
        HeatingStage::Trajectories { count, seed, model } => {
            let trajectories = (0..count)
                .map(|i| heating_trajectory(&prepared, &config.heating, model, seed, i))
                .collect::<Result<Vec<_>>>()?;
            mixture_from_trajectories(trajectories)?
        }
    };
    finish_pipeline(config, &heated)
}

/// Pipeline defaults: single-jump heating on mode `a` only, ideal `U_ve`,
/// surrogate `U_ev`, default angles, exact CHSH.
pub fn default_config(encoding: EncodingParams, heating: HeatingParams) -> PipelineConfig {
    PipelineConfig {
        encoding,
        heating,
        heating_stage: HeatingStage::SingleJump,
        ve: VeVariant::Ideal,
        ev: EvRealization::Surrogate,
        angles: BellAngles::default(),
        chsh_mode: ChshMode::Exact,
    }
}

/// Heating rate on mode `a` that gives `δ` over `duration`.
pub fn gamma_for_delta(delta: f64, alpha: f64, duration: f64) -> f64 {
    delta / (alpha * alpha * duration)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::chsh_analytic;

    fn config(delta: f64) -> PipelineConfig {
        let enc = EncodingParams::with_cutoffs(2.0, 2.0, 20, 20).unwrap();
        let enc = EncodingParams {
            mode_a: crate::bosonic::ModeParams::new(20, 1e-4).unwrap(),
            mode_b: crate::bosonic::ModeParams::new(20, 1e-4).unwrap(),
            ..enc
        };
        let heat = HeatingParams::new(gamma_for_delta(delta, 2.0, 1.0), 0.0, 1.0, 0.01).unwrap();
        default_config(enc, heat)
    }

    #[test]
    fn noiseless_pipeline_violates_maximally() {
        let out = full_pipeline(&config(0.0)).unwrap();
        assert!(
            (out.bell.b - chsh_analytic(0.0)).abs() < 1e-6,
            "{}",
            out.bell.b
        );
        assert!((out.phi_plus_fidelity - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_jump_pipeline_follows_delta() {
        let out = full_pipeline(&config(0.1)).unwrap();
        assert!(
            (out.bell.b - chsh_analytic(0.1)).abs() < 2e-3,
            "{}",
            out.bell.b
        );
        assert!(out.mixed_bell_fidelity > 0.999);
    }
}
