//! Experiment configuration: one flat JSON document, one object per section.

use std::path::{Path, PathBuf};

use catbell_core::bell::{BellAngles, ChshMode};
use catbell_core::bosonic::{ModeParams, DEFAULT_LEAK_TOL};
use catbell_core::encoding::{EncodingParams, ModeSel};
use catbell_core::gates::{EvRealization, UevCalibration, VeVariant};
use catbell_core::noise::{HeatingParams, RateModel};
use catbell_core::pipeline::{HeatingStage, PipelineConfig};
use catbell_core::tensor::DEFAULT_MAX_DIM;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Environment variable overriding the dense-dimension guard.
pub const MAX_DIM_ENV: &str = "CATBELL_MAX_DIM";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Prepare,
    Rotate,
    SwapReport,
    HeatSweep,
    BellScan,
    FullPipeline,
}

impl Protocol {
    pub const ALL: [Protocol; 6] = [
        Protocol::Prepare,
        Protocol::Rotate,
        Protocol::SwapReport,
        Protocol::HeatSweep,
        Protocol::BellScan,
        Protocol::FullPipeline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Prepare => "prepare",
            Protocol::Rotate => "rotate",
            Protocol::SwapReport => "swap-report",
            Protocol::HeatSweep => "heat-sweep",
            Protocol::BellScan => "bell-scan",
            Protocol::FullPipeline => "full-pipeline",
        }
    }

    pub fn from_name(name: &str) -> Option<Protocol> {
        Protocol::ALL.into_iter().find(|p| p.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EncodingSection {
    pub alpha: f64,
    pub beta: f64,
    /// `None` picks `ceil(α² + 6α + 10)`.
    pub cutoff_a: Option<usize>,
    pub cutoff_b: Option<usize>,
    pub leak_tol: f64,
    pub epsilon: f64,
    /// Dense-dimension guard; the environment variable wins when set.
    pub max_dim: Option<usize>,
}

impl Default for EncodingSection {
    fn default() -> Self {
        EncodingSection {
            alpha: 2.0,
            beta: 2.0,
            cutoff_a: None,
            cutoff_b: None,
            leak_tol: DEFAULT_LEAK_TOL,
            epsilon: 0.0,
            max_dim: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeatingMode {
    SingleJump,
    Trajectories,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateChoice {
    Instantaneous,
    ConstantRate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub duration: f64,
    pub dt: f64,
    pub heating: HeatingMode,
    pub rate: RateChoice,
    /// Ensemble size for trajectory runs.
    pub trajectories: usize,
    /// Output rows of `heat-sweep`.
    pub samples: usize,
}

impl Default for NoiseSection {
    fn default() -> Self {
        NoiseSection {
            gamma_a: 0.0,
            gamma_b: 0.0,
            duration: 1.0,
            dt: 0.01,
            heating: HeatingMode::SingleJump,
            rate: RateChoice::Instantaneous,
            trajectories: 1000,
            samples: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VeChoice {
    Ideal,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvChoice {
    Surrogate,
    QuarterTurn,
    HalfTurn,
    /// Uses `encoding.epsilon`.
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GatesSection {
    pub ve: VeChoice,
    pub ev: EvChoice,
}

impl Default for GatesSection {
    fn default() -> Self {
        GatesSection {
            ve: VeChoice::Ideal,
            ev: EvChoice::Surrogate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RotateSection {
    pub mode: ModeChoice,
    pub thetas: Vec<f64>,
}

impl Default for RotateSection {
    #[allow(clippy::approx_constant)]
    fn default() -> Self {
        RotateSection {
            mode: ModeChoice::A,
            thetas: vec![0.1, 0.2, 0.4, 0.5236, core::f64::consts::FRAC_PI_4],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BellMode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BellSection {
    /// `[θ₁, θ₁′, θ₂, θ₂′]`.
    pub angles: [f64; 4],
    pub mode: BellMode,
    pub shots: u64,
    pub delta_grid: Vec<f64>,
}

impl Default for BellSection {
    fn default() -> Self {
        let a = BellAngles::default();
        BellSection {
            angles: [a.theta1, a.theta1p, a.theta2, a.theta2p],
            mode: BellMode::Exact,
            shots: 10_000,
            delta_grid: vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub format: OutputFormat,
    /// Off by default so repeated runs produce identical files.
    pub record_timing: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
            record_timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    #[serde(default)]
    pub encoding: EncodingSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub gates: GatesSection,
    #[serde(default)]
    pub rotate: RotateSection,
    #[serde(default)]
    pub bell: BellSection,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSection,
}

impl ExperimentConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path.is_empty() || path == "." {
                "<root>".to_string()
            } else {
                path
            };
            CliError::config(field, e.into_inner().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// The parsed configuration as JSON, defaults included.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// Checks every numeric field against the preconditions of the module
    /// that consumes it.
    pub fn validate(&self) -> Result<()> {
        let e = &self.encoding;
        positive("encoding.alpha", e.alpha)?;
        positive("encoding.beta", e.beta)?;
        if let Some(n) = e.cutoff_a {
            at_least("encoding.cutoff_a", n, 2)?;
        }
        if let Some(n) = e.cutoff_b {
            at_least("encoding.cutoff_b", n, 2)?;
        }
        if !(e.leak_tol > 0.0 && e.leak_tol <= 1e-4) {
            return Err(CliError::config(
                "encoding.leak_tol",
                format!("must lie in (0, 1e-4], got {}", e.leak_tol),
            ));
        }
        non_negative("encoding.epsilon", e.epsilon)?;
        if e.epsilon * e.alpha.max(e.beta) > core::f64::consts::PI {
            return Err(CliError::config(
                "encoding.epsilon",
                "epsilon times amplitude must not exceed π",
            ));
        }
        if let Some(m) = e.max_dim {
            at_least("encoding.max_dim", m, 4)?;
        }

        let n = &self.noise;
        non_negative("noise.gamma_a", n.gamma_a)?;
        non_negative("noise.gamma_b", n.gamma_b)?;
        non_negative("noise.duration", n.duration)?;
        positive("noise.dt", n.dt)?;
        if n.heating == HeatingMode::Trajectories {
            at_least("noise.trajectories", n.trajectories, 1)?;
        }
        at_least("noise.samples", n.samples, 1)?;
        if self.protocol == Protocol::FullPipeline && n.heating == HeatingMode::SingleJump {
            let delta = n.gamma_a * e.alpha * e.alpha * n.duration
                + n.gamma_b * e.beta * e.beta * n.duration;
            if delta > 1.0 {
                return Err(CliError::config(
                    "noise.gamma_a",
                    format!("single-jump weight δ = {delta} exceeds 1"),
                ));
            }
        }

        for (k, t) in self.rotate.thetas.iter().enumerate() {
            if !t.is_finite() {
                return Err(CliError::config(
                    format!("rotate.thetas[{k}]"),
                    "must be finite",
                ));
            }
        }
        if self.protocol == Protocol::Rotate && self.rotate.thetas.is_empty() {
            return Err(CliError::config("rotate.thetas", "must not be empty"));
        }

        let b = &self.bell;
        for (k, t) in b.angles.iter().enumerate() {
            if !t.is_finite() {
                return Err(CliError::config(
                    format!("bell.angles[{k}]"),
                    "must be finite",
                ));
            }
        }
        if b.mode == BellMode::Sampled {
            at_least("bell.shots", b.shots as usize, 1)?;
        }
        for (k, d) in b.delta_grid.iter().enumerate() {
            if !(0.0..=1.0).contains(d) {
                return Err(CliError::config(
                    format!("bell.delta_grid[{k}]"),
                    format!("must lie in [0, 1], got {d}"),
                ));
            }
        }
        if self.protocol == Protocol::BellScan && b.delta_grid.is_empty() {
            return Err(CliError::config("bell.delta_grid", "must not be empty"));
        }
        Ok(())
    }

    /// Dense guard: environment override, then config, then the default.
    pub fn max_dim(&self) -> Result<usize> {
        match std::env::var(MAX_DIM_ENV) {
            Ok(v) => v.trim().parse::<usize>().map_err(|_| {
                CliError::config(MAX_DIM_ENV, format!("not an unsigned integer: {v:?}"))
            }),
            Err(_) => Ok(self.encoding.max_dim.unwrap_or(DEFAULT_MAX_DIM)),
        }
    }

    pub fn encoding_params(&self) -> Result<EncodingParams> {
        let e = &self.encoding;
        let mode = |amp: f64, cutoff: Option<usize>| -> Result<ModeParams> {
            let cutoff = cutoff.unwrap_or_else(|| catbell_core::bosonic::default_cutoff(amp));
            Ok(ModeParams::new(cutoff, e.leak_tol)?)
        };
        let base = EncodingParams::new(e.alpha, e.beta)?;
        let params = EncodingParams {
            mode_a: mode(e.alpha, e.cutoff_a)?,
            mode_b: mode(e.beta, e.cutoff_b)?,
            ..base
        }
        .with_epsilon(e.epsilon)?
        .with_max_dim(self.max_dim()?);
        params.validate()?;
        Ok(params)
    }

    pub fn heating_params(&self) -> Result<HeatingParams> {
        let n = &self.noise;
        Ok(HeatingParams::new(n.gamma_a, n.gamma_b, n.duration, n.dt)?)
    }

    pub fn rate_model(&self) -> RateModel {
        match self.noise.rate {
            RateChoice::Instantaneous => RateModel::Instantaneous,
            RateChoice::ConstantRate => RateModel::Constant {
                amplitudes: [self.encoding.alpha, self.encoding.beta],
            },
        }
    }

    pub fn ve(&self) -> VeVariant {
        match self.gates.ve {
            VeChoice::Ideal => VeVariant::Ideal,
            VeChoice::Literal => VeVariant::Literal,
        }
    }

    pub fn ev(&self) -> EvRealization {
        match self.gates.ev {
            EvChoice::Surrogate => EvRealization::Surrogate,
            EvChoice::QuarterTurn => EvRealization::Displacement(UevCalibration::QuarterTurn),
            EvChoice::HalfTurn => EvRealization::Displacement(UevCalibration::HalfTurn),
            EvChoice::Explicit => {
                EvRealization::Displacement(UevCalibration::Explicit(self.encoding.epsilon))
            }
        }
    }

    pub fn rotate_mode(&self) -> ModeSel {
        match self.rotate.mode {
            ModeChoice::A => ModeSel::A,
            ModeChoice::B => ModeSel::B,
        }
    }

    pub fn angles(&self) -> BellAngles {
        let [a, b, c, d] = self.bell.angles;
        BellAngles::new(a, b, c, d)
    }

    /// CHSH mode; sampled runs use `seed` directly.
    pub fn chsh_mode(&self, seed: u64) -> ChshMode {
        match self.bell.mode {
            BellMode::Exact => ChshMode::Exact,
            BellMode::Sampled => ChshMode::Sampled {
                shots: self.bell.shots,
                seed,
            },
        }
    }

    pub fn pipeline_config(&self) -> Result<PipelineConfig> {
        let heating_stage = match self.noise.heating {
            HeatingMode::SingleJump => HeatingStage::SingleJump,
            HeatingMode::Trajectories => HeatingStage::Trajectories {
                count: self.noise.trajectories,
                seed: self.seed,
                model: self.rate_model(),
            },
        };
        Ok(PipelineConfig {
            encoding: self.encoding_params()?,
            heating: self.heating_params()?,
            heating_stage,
            ve: self.ve(),
            ev: self.ev(),
            angles: self.angles(),
            chsh_mode: self.chsh_mode(self.seed),
        })
    }
}

fn positive(field: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(CliError::config(
            field,
            format!("must be positive and finite, got {x}"),
        ));
    }
    Ok(())
}

fn non_negative(field: &str, x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(CliError::config(
            field,
            format!("must be non-negative and finite, got {x}"),
        ));
    }
    Ok(())
}

fn at_least(field: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(CliError::config(
            field,
            format!("must be at least {min}, got {n}"),
        ));
    }
    Ok(())
}
