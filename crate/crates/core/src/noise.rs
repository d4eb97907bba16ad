//! Motional heating.
//!
//! The master equation is the balanced form
//! `dρ/dt = Σ_m γ_m (a ρ a† + a† ρ a − ½{a†a + a a†, ρ})`, with `a a†` taken
//! as the product of truncated matrices so the truncated generator stays
//! trace preserving. Trajectories unravel the same generator.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bosonic::{annihilation, ModeParams, Parity};
use crate::encoding::{bell_target, logical_state, BellKind, EncodingParams, ModeSel};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::tensor::{
    apply, left_multiply, right_multiply, DensityMatrix, OperatorMatrix, SpaceLayout, StateVector,
};
use crate::{Error, Result};

/// Largest trace drift tolerated by [`evolve_lindblad`].
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatingParams {
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub duration: f64,
    pub dt: f64,
}

impl HeatingParams {
    pub fn new(gamma_a: f64, gamma_b: f64, duration: f64, dt: f64) -> Result<Self> {
        let p = HeatingParams {
            gamma_a,
            gamma_b,
            duration,
            dt,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
            ("duration", self.duration),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(
                    name,
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param(
                "dt",
                format!("must be positive, got {}", self.dt),
            ));
        }
        Ok(())
    }

    /// Rate for the `k`-th heated mode (0 is mode `a`, 1 is mode `b`).
    pub fn gamma(&self, k: usize) -> f64 {
        if k == 0 {
            self.gamma_a
        } else {
            self.gamma_b
        }
    }

    /// `true` when `γ T |α|² ≥ 0.5` on either mode, where the single-jump
    /// picture stops being meaningful.
    pub fn beyond_single_jump(&self, alpha: f64, beta: f64) -> bool {
        delta_of(self.gamma_a, alpha, self.duration) >= 0.5
            || delta_of(self.gamma_b, beta, self.duration) >= 0.5
    }
}

/// `γ α² T`.
pub fn delta_of(gamma: f64, alpha: f64, duration: f64) -> f64 {
    gamma * alpha * alpha * duration
}

/// Up and down jumps per heated mode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct JumpCounts {
    pub up: [u64; 2],
    pub down: [u64; 2],
}

impl JumpCounts {
    pub fn total(&self) -> u64 {
        self.up.iter().chain(&self.down).sum()
    }

    pub fn add(&mut self, other: &JumpCounts) {
        for k in 0..2 {
            self.up[k] += other.up[k];
            self.down[k] += other.down[k];
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseResult {
    pub final_state: DensityMatrix,
    /// `γ_a α² T`; the caller supplies `α`.
    pub delta_analytic: f64,
    pub jump_counts: Option<JumpCounts>,
}

/// Truncated `a` placed on subsystem `mode` of `layout`.
fn lowering_on(layout: &SpaceLayout, mode: usize) -> Result<OperatorMatrix> {
    layout.check_targets(&[mode])?;
    let cutoff = layout.dims()[mode];
    let params = ModeParams {
        cutoff,
        leak_tol: crate::bosonic::DEFAULT_LEAK_TOL,
    };
    annihilation(&params)?.on(layout, &[mode])
}

/// Diagonal of the truncated `a†a + a a†`: `2n + 1` except `n` on the top
/// level.
fn anticommutator_diag(cutoff: usize) -> Vec<f64> {
    (0..cutoff)
        .map(|n| {
            let up = if n + 1 < cutoff { n + 1 } else { 0 };
            (n + up) as f64
        })
        .collect()
}

/// One application of the generator for heating of subsystem `mode`.
pub fn lindblad_rhs(rho: &DensityMatrix, mode: usize, gamma: f64) -> Result<DensityMatrix> {
    let layout = rho.layout().clone();
    let a = lowering_on(&layout, mode)?;
    let ad = a.dagger();
    let k_diag: Vec<C64> = anticommutator_diag(layout.dims()[mode])
        .into_iter()
        .map(|v| C64::new(0.5 * v, 0.0))
        .collect();
    let k = OperatorMatrix::new(layout.clone(), [mode], CMatrix::from_diag(&k_diag))?;
    let m = rho.matrix();
    let mut out = right_multiply(&left_multiply(&a, m)?, &ad)?;
    out.add_scaled(&right_multiply(&left_multiply(&ad, m)?, &a)?, ONE);
    out.add_scaled(&left_multiply(&k, m)?, -ONE);
    out.add_scaled(&right_multiply(m, &k)?, -ONE);
    DensityMatrix::from_matrix(layout, out.scale_real(gamma))
}

fn total_rhs(rho: &CMatrix, layout: &SpaceLayout, channels: &[(usize, f64)]) -> Result<CMatrix> {
    let n = layout.total_dim();
    let mut acc = CMatrix::zeros(n, n);
    let dm = DensityMatrix::from_matrix(layout.clone(), rho.clone())?;
    for &(mode, gamma) in channels {
        if gamma != 0.0 {
            acc.add_scaled(lindblad_rhs(&dm, mode, gamma)?.matrix(), ONE);
        }
    }
    Ok(acc)
}

fn channels(params: &HeatingParams, modes: &[usize]) -> Result<Vec<(usize, f64)>> {
    if modes.len() > 2 {
        return Err(Error::param("modes", "at most two heated modes"));
    }
    Ok(modes
        .iter()
        .enumerate()
        .map(|(k, &m)| (m, params.gamma(k)))
        .collect())
}

/// Fixed-step RK4 integration over `params.duration`. `modes[k]` is the
/// subsystem heated at rate `params.gamma(k)`.
pub fn evolve_lindblad(
    rho: &DensityMatrix,
    params: &HeatingParams,
    modes: &[usize],
) -> Result<DensityMatrix> {
    params.validate()?;
    let layout = rho.layout().clone();
    layout.check_targets(modes)?;
    let ch = channels(params, modes)?;
    let steps = (params.duration / params.dt).ceil().max(0.0) as usize;
    if steps == 0 || ch.iter().all(|&(_, g)| g == 0.0) {
        return Ok(rho.clone());
    }
    let h = params.duration / steps as f64;
    let tr0 = rho.trace().re;
    let mut m = rho.matrix().clone();
    for _ in 0..steps {
        let k1 = total_rhs(&m, &layout, &ch)?;
        let mut y = m.clone();
        y.add_scaled(&k1, C64::new(0.5 * h, 0.0));
        let k2 = total_rhs(&y, &layout, &ch)?;
        let mut y = m.clone();
        y.add_scaled(&k2, C64::new(0.5 * h, 0.0));
        let k3 = total_rhs(&y, &layout, &ch)?;
        let mut y = m.clone();
        y.add_scaled(&k3, C64::new(h, 0.0));
        let k4 = total_rhs(&y, &layout, &ch)?;
        m.add_scaled(&k1, C64::new(h / 6.0, 0.0));
        m.add_scaled(&k2, C64::new(h / 3.0, 0.0));
        m.add_scaled(&k3, C64::new(h / 3.0, 0.0));
        m.add_scaled(&k4, C64::new(h / 6.0, 0.0));
        let drift = (m.trace().re - tr0).abs();
        if drift.is_nan() || drift > TRACE_DRIFT_LIMIT {
            return Err(Error::Integrator {
                drift,
                limit: TRACE_DRIFT_LIMIT,
            });
        }
    }
    Ok(DensityMatrix::from_matrix(layout, m)?.symmetrized())
}

/// [`evolve_lindblad`] wrapped with the analytic `δ = γ_a α² T`.
pub fn heat(
    rho: &DensityMatrix,
    params: &HeatingParams,
    modes: &[usize],
    alpha: f64,
) -> Result<NoiseResult> {
    Ok(NoiseResult {
        final_state: evolve_lindblad(rho, params, modes)?,
        delta_analytic: delta_of(params.gamma_a, alpha, params.duration),
        jump_counts: None,
    })
}

/// Jump-rate model for trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateModel {
    /// Rates `γ⟨a†a⟩` (down) and `γ⟨a a†⟩` (up) from the current state, with
    /// the matching no-jump evolution between jumps.
    Instantaneous,
    /// Both rates fixed to `γ|α_k|²` for heated mode `k`, no evolution
    /// between jumps.
    Constant { amplitudes: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpKind {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    pub time: f64,
    /// Index into the heated-mode list.
    pub mode: usize,
    pub kind: JumpKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub state: StateVector,
    pub jumps: Vec<JumpEvent>,
}

impl Trajectory {
    pub fn counts(&self) -> JumpCounts {
        let mut c = JumpCounts::default();
        for j in &self.jumps {
            match j.kind {
                JumpKind::Up => c.up[j.mode] += 1,
                JumpKind::Down => c.down[j.mode] += 1,
            }
        }
        c
    }
}

/// Independent stream for trajectory `index` under `master_seed`.
pub fn trajectory_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

struct ModeInfo {
    subsystem: usize,
    gamma: f64,
    lower: OperatorMatrix,
    raise: OperatorMatrix,
}

fn mode_digits(layout: &SpaceLayout, subsystem: usize) -> Vec<usize> {
    let stride = layout.strides()[subsystem];
    let d = layout.dims()[subsystem];
    (0..layout.total_dim()).map(|i| (i / stride) % d).collect()
}

/// One quantum-jump trajectory over `params.duration`.
pub fn sample_trajectory<R: Rng + ?Sized>(
    state: &StateVector,
    params: &HeatingParams,
    modes: &[usize],
    model: RateModel,
    rng: &mut R,
) -> Result<Trajectory> {
    params.validate()?;
    state.check_normalized()?;
    let layout = state.layout().clone();
    layout.check_targets(modes)?;
    let ch = channels(params, modes)?;
    let info: Vec<ModeInfo> = ch
        .iter()
        .map(|&(m, gamma)| {
            let lower = lowering_on(&layout, m)?;
            let raise = lower.dagger();
            Ok(ModeInfo {
                subsystem: m,
                gamma,
                lower,
                raise,
            })
        })
        .collect::<Result<_>>()?;
    match model {
        RateModel::Instantaneous => mcwf(state, params, &info, &layout, rng),
        RateModel::Constant { amplitudes } => constant_rate(state, params, &info, amplitudes, rng),
    }
}

fn mcwf<R: Rng + ?Sized>(
    state: &StateVector,
    params: &HeatingParams,
    info: &[ModeInfo],
    layout: &SpaceLayout,
    rng: &mut R,
) -> Result<Trajectory> {
    let digits: Vec<Vec<usize>> = info
        .iter()
        .map(|m| mode_digits(layout, m.subsystem))
        .collect();
    let k_diags: Vec<Vec<f64>> = info
        .iter()
        .map(|m| anticommutator_diag(layout.dims()[m.subsystem]))
        .collect();
    // decay rate of |ψ|² for every basis index
    let rates: Vec<f64> = (0..layout.total_dim())
        .map(|i| {
            info.iter()
                .enumerate()
                .map(|(k, m)| m.gamma * k_diags[k][digits[k][i]])
                .sum()
        })
        .collect();
    let norm_after = |psi: &StateVector, t: f64| -> f64 {
        psi.amplitudes()
            .iter()
            .zip(&rates)
            .map(|(a, r)| a.norm_sqr() * (-r * t).exp())
            .sum()
    };
    let decay = |psi: &StateVector, t: f64| -> Result<StateVector> {
        let mut out = psi.clone();
        for (a, r) in out.amplitudes_mut().iter_mut().zip(&rates) {
            *a *= (-0.5 * r * t).exp();
        }
        out.normalized()
    };

    let mut psi = state.clone();
    let mut t = 0.0;
    let mut jumps = Vec::new();
    loop {
        let remaining = params.duration - t;
        let u: f64 = 1.0 - rng.random::<f64>();
        if remaining <= 0.0 || norm_after(&psi, remaining) > u {
            psi = decay(&psi, remaining.max(0.0))?;
            break;
        }
        let (mut lo, mut hi) = (0.0, remaining);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if norm_after(&psi, mid) > u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let wait = 0.5 * (lo + hi);
        psi = decay(&psi, wait)?;
        t += wait;

        let mut weights = Vec::with_capacity(2 * info.len());
        for (k, m) in info.iter().enumerate() {
            let cutoff = layout.dims()[m.subsystem];
            let (mut down, mut up) = (0.0, 0.0);
            for (i, a) in psi.amplitudes().iter().enumerate() {
                let n = digits[k][i];
                let p = a.norm_sqr();
                down += p * n as f64;
                if n + 1 < cutoff {
                    up += p * (n + 1) as f64;
                }
            }
            weights.push((k, JumpKind::Down, m.gamma * down));
            weights.push((k, JumpKind::Up, m.gamma * up));
        }
        let total: f64 = weights.iter().map(|w| w.2).sum();
        let mut pick = rng.random::<f64>() * total;
        let mut chosen = weights[weights.len() - 1];
        for w in &weights {
            if pick < w.2 {
                chosen = *w;
                break;
            }
            pick -= w.2;
        }
        let (k, kind, _) = chosen;
        let op = match kind {
            JumpKind::Down => &info[k].lower,
            JumpKind::Up => &info[k].raise,
        };
        psi = apply(op, &psi)?.normalized()?;
        jumps.push(JumpEvent {
            time: t,
            mode: k,
            kind,
        });
    }
    Ok(Trajectory { state: psi, jumps })
}

fn constant_rate<R: Rng + ?Sized>(
    state: &StateVector,
    params: &HeatingParams,
    info: &[ModeInfo],
    amplitudes: [f64; 2],
    rng: &mut R,
) -> Result<Trajectory> {
    let per_mode: Vec<f64> = info
        .iter()
        .enumerate()
        .map(|(k, m)| m.gamma * amplitudes[k] * amplitudes[k])
        .collect();
    let total: f64 = 2.0 * per_mode.iter().sum::<f64>();
    let mut psi = state.clone();
    let mut jumps = Vec::new();
    if total <= 0.0 {
        return Ok(Trajectory { state: psi, jumps });
    }
    let mut t = 0.0;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        t += -u.ln() / total;
        if t > params.duration {
            break;
        }
        let mut pick = rng.random::<f64>() * 0.5 * total;
        let mut k = per_mode.len() - 1;
        for (j, &r) in per_mode.iter().enumerate() {
            if pick < r {
                k = j;
                break;
            }
            pick -= r;
        }
        let mut kind = if rng.random::<bool>() {
            JumpKind::Up
        } else {
            JumpKind::Down
        };
        let mut next = jump_result(&psi, &info[k], kind)?;
        if next.is_none() {
            // annihilation on the vacuum (or creation at the cutoff) has zero
            // norm: take the other direction instead
            kind = match kind {
                JumpKind::Up => JumpKind::Down,
                JumpKind::Down => JumpKind::Up,
            };
            next = jump_result(&psi, &info[k], kind)?;
        }
        psi = next
            .ok_or_else(|| Error::Degenerate("both jump directions annihilate the state".into()))?;
        jumps.push(JumpEvent {
            time: t,
            mode: k,
            kind,
        });
    }
    Ok(Trajectory { state: psi, jumps })
}

fn jump_result(psi: &StateVector, m: &ModeInfo, kind: JumpKind) -> Result<Option<StateVector>> {
    let op = match kind {
        JumpKind::Down => &m.lower,
        JumpKind::Up => &m.raise,
    };
    let out = apply(op, psi)?;
    if out.norm() < 1e-12 {
        return Ok(None);
    }
    Ok(Some(out.normalized()?))
}

/// Runs `count` trajectories sequentially with streams `0..count`.
pub fn sample_ensemble(
    state: &StateVector,
    params: &HeatingParams,
    modes: &[usize],
    model: RateModel,
    count: usize,
    master_seed: u64,
) -> Result<Vec<Trajectory>> {
    (0..count)
        .map(|i| {
            let mut rng = trajectory_rng(master_seed, i as u64);
            sample_trajectory(state, params, modes, model, &mut rng)
        })
        .collect()
}

fn bell_vector(kind: BellKind) -> Result<StateVector> {
    let h = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let amps = match kind {
        BellKind::PhiPlus => alloc::vec![h, ZERO, ZERO, h],
        BellKind::PsiPlus => alloc::vec![ZERO, h, h, ZERO],
    };
    StateVector::new(SpaceLayout::new([2, 2])?, amps)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::param(
            "delta",
            format!("must lie in [0, 1], got {delta}"),
        ));
    }
    Ok(())
}

/// `(1−δ)|φ⁺⟩⟨φ⁺| + δ|ψ⁺⟩⟨ψ⁺|` on two qubits.
pub fn mixed_bell(delta: f64) -> Result<DensityMatrix> {
    check_delta(delta)?;
    let phi = bell_vector(BellKind::PhiPlus)?;
    let psi = bell_vector(BellKind::PsiPlus)?;
    DensityMatrix::from_mixture(&[(1.0 - delta, &phi), (delta, &psi)])
}

/// [`mixed_bell`] with the logical Bell states of the two modes, on the
/// two-mode layout `[N_a, N_b]`.
pub fn lifted_mixed_bell(delta: f64, params: &EncodingParams) -> Result<DensityMatrix> {
    check_delta(delta)?;
    let phi = bell_target(BellKind::PhiPlus, params)?;
    let psi = bell_target(BellKind::PsiPlus, params)?;
    DensityMatrix::from_mixture(&[(1.0 - delta, &phi), (delta, &psi)])
}

/// Logical amplitudes `⟨x_a y_b|ψ⟩` of a two-mode ket, in `|xy⟩` order.
pub fn code_amplitudes(state: &StateVector, params: &EncodingParams) -> Result<[C64; 4]> {
    let a = [
        logical_state(0, ModeSel::A, params)?,
        logical_state(1, ModeSel::A, params)?,
    ];
    let b = [
        logical_state(0, ModeSel::B, params)?,
        logical_state(1, ModeSel::B, params)?,
    ];
    let (na, nb) = (params.mode_a.cutoff, params.mode_b.cutoff);
    if state.layout().dims() != [na, nb] {
        return Err(Error::layout("expected a two-mode ket on [N_a, N_b]"));
    }
    let psi = state.amplitudes();
    let mut out = [ZERO; 4];
    for x in 0..2 {
        for y in 0..2 {
            let mut acc = ZERO;
            for i in 0..na {
                let ai = a[x].amplitudes()[i].conj();
                if ai == ZERO {
                    continue;
                }
                let row = &psi[i * nb..(i + 1) * nb];
                let inner: C64 = row
                    .iter()
                    .zip(b[y].amplitudes())
                    .map(|(p, q)| q.conj() * p)
                    .sum();
                acc += ai * inner;
            }
            out[2 * x + y] = acc;
        }
    }
    Ok(out)
}

/// Projection of a two-mode ket onto the logical code space: the weight it
/// carries there and the renormalized two-qubit ket (`None` if the weight
/// vanishes).
pub fn project_to_code(
    state: &StateVector,
    params: &EncodingParams,
) -> Result<(f64, Option<StateVector>)> {
    let amps = code_amplitudes(state, params)?;
    let weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if weight < 1e-300 {
        return Ok((weight, None));
    }
    let ket = StateVector::new(SpaceLayout::new([2, 2])?, amps.to_vec())?.normalized()?;
    Ok((weight, Some(ket)))
}

/// Parity of mode `sel` in a two-mode ket, as an expectation value.
pub fn mode_parity(state: &StateVector, subsystem: usize) -> Result<f64> {
    let digits = mode_digits(state.layout(), subsystem);
    Ok(state
        .amplitudes()
        .iter()
        .zip(&digits)
        .map(|(a, &n)| {
            if n % 2 == 0 {
                a.norm_sqr()
            } else {
                -a.norm_sqr()
            }
        })
        .sum())
}

/// The parity class a cat would have after `jumps` parity flips.
pub fn parity_after(initial: Parity, jumps: u64) -> Parity {
    if jumps % 2 == 0 {
        initial
    } else {
        initial.flipped()
    }
}
