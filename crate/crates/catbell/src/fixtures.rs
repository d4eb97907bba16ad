//! Frozen oracle values and the code that regenerates them.

use std::path::{Path, PathBuf};

use catbell_core::bosonic::{cat, ModeParams, Parity};
use catbell_core::encoding::{EncodingParams, ModeSel};
use catbell_core::gates::{transfer_fidelity, u_swap, EvRealization, UevCalibration, VeVariant};
use catbell_core::noise::{evolve_lindblad, HeatingParams};
use catbell_core::oracles::{
    double_swap_bell_fidelity, liouvillian_expm, swap_transfer_fidelity, OracleReport,
};
use catbell_core::pipeline::{default_config, full_pipeline};
use catbell_core::{DensityMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SWAP_TRANSFER: &str = "swap_transfer_fidelity_alpha8";
pub const DOUBLE_SWAP: &str = "double_swap_phi_plus_fidelity_alpha8";
pub const CAT_PARITY_HEATING: &str = "cat_parity_after_heating";

/// Serialized form of an [`OracleReport`] plus the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub quantity: String,
    pub oracle_value: f64,
    pub main_value: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub config: serde_json::Value,
}

impl FixtureRecord {
    fn from_report(r: OracleReport, config: serde_json::Value) -> Self {
        FixtureRecord {
            quantity: r.quantity,
            oracle_value: r.oracle_value,
            main_value: r.main_value,
            abs_error: r.abs_error,
            rel_error: r.rel_error,
            tolerance: r.tolerance,
            pass: r.pass,
            config,
        }
    }
}

/// Location of the checked-in golden file.
pub fn golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join("golden.json")
}

pub fn load(path: &Path) -> Result<Vec<FixtureRecord>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Fixture(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Fixture(format!("{}: {e}", path.display())))
}

pub fn find<'a>(records: &'a [FixtureRecord], quantity: &str) -> Result<&'a FixtureRecord> {
    records
        .iter()
        .find(|r| r.quantity == quantity)
        .ok_or_else(|| CliError::Fixture(format!("no golden value for `{quantity}`")))
}

/// Dense swap with the quarter-turn displacement at `α = 8`, transfer
/// fidelity on `(|0_L⟩ + |1_L⟩)/√2 ⊗ |0⟩`.
pub fn swap_transfer_main() -> Result<f64> {
    let p = EncodingParams::new(8.0, 8.0)?;
    let ev = EvRealization::Displacement(UevCalibration::QuarterTurn);
    let u = u_swap(ModeSel::A, &p, VeVariant::Ideal, ev)?;
    Ok(transfer_fidelity(&u, ModeSel::A, &p)?)
}

/// Noiseless pipeline with the displacement realization at `α = β = 8`.
pub fn double_swap_main() -> Result<f64> {
    let p = EncodingParams::new(8.0, 8.0)?.with_max_dim(1 << 16);
    let heat = HeatingParams::new(0.0, 0.0, 0.0, 0.01)?;
    let mut cfg = default_config(p, heat);
    cfg.ev = EvRealization::Displacement(UevCalibration::QuarterTurn);
    Ok(full_pipeline(&cfg)?.phi_plus_fidelity)
}

fn small_cat() -> Result<(ModeParams, DensityMatrix)> {
    let mode = ModeParams::new(12, 1e-4)?;
    let psi = cat(C64::new(1.5, 0.0), Parity::Even, &mode)?;
    Ok((mode, DensityMatrix::from_pure(&psi)))
}

fn parity(rho: &DensityMatrix) -> f64 {
    (0..rho.layout().total_dim())
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * rho.matrix()[(k, k)].re)
        .sum()
}

/// Parity of `cat(1.5, +)` at cutoff 12 after `γt = 0.02`, from the RK4
/// integrator.
pub fn cat_parity_main() -> Result<f64> {
    let (_, rho) = small_cat()?;
    let heat = HeatingParams::new(0.02, 0.0, 1.0, 0.01)?;
    Ok(parity(&evolve_lindblad(&rho, &heat, &[0])?))
}

/// Recomputes every golden record from the oracles.
pub fn generate() -> Result<Vec<FixtureRecord>> {
    let eps = UevCalibration::QuarterTurn.epsilon(8.0);
    let (_, rho) = small_cat()?;
    let parity_oracle = parity(&liouvillian_expm(&rho, 0.02, 1.0)?);
    Ok(vec![
        FixtureRecord::from_report(
            OracleReport::compare(
                SWAP_TRANSFER,
                swap_transfer_fidelity(8.0, eps),
                swap_transfer_main()?,
                1e-6,
            ),
            serde_json::json!({"alpha": 8.0, "epsilon": eps, "calibration": "quarter-turn", "oracle": "coherent-state expansion"}),
        ),
        FixtureRecord::from_report(
            OracleReport::compare(
                DOUBLE_SWAP,
                double_swap_bell_fidelity(8.0, 8.0, eps, eps),
                double_swap_main()?,
                1e-6,
            ),
            serde_json::json!({"alpha": 8.0, "beta": 8.0, "epsilon": eps, "calibration": "quarter-turn", "order": "mode a first", "oracle": "coherent-state expansion"}),
        ),
        FixtureRecord::from_report(
            OracleReport::compare(CAT_PARITY_HEATING, parity_oracle, cat_parity_main()?, 1e-6),
            serde_json::json!({"alpha": 1.5, "parity": "even", "cutoff": 12, "leak_tol": 1e-4, "gamma_t": 0.02, "oracle": "vectorized Liouvillian exponential"}),
        ),
    ])
}

/// Pretty JSON for the golden file.
pub fn render(records: &[FixtureRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("fixtures serialize");
    s.push('\n');
    s
}
