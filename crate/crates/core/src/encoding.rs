//! Cat-state logical qubits: `|0_L⟩ = |+⟩`, `|1_L⟩ = |−⟩` on each mode.
//!
//! Mode-level states live on the two-mode layout `[N_a, N_b]`; [`with_ions`]
//! appends the two electronic qubits in their ground state.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use crate::bosonic::{
    apply_cross_kerr, cat, coherent, default_cutoff, displacement, ModeParams, Parity,
};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::tensor::{apply, OperatorMatrix, SpaceLayout, StateVector, DEFAULT_MAX_DIM};
use crate::{Error, Result};

/// Which vibrational mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeSel {
    A,
    B,
}

impl ModeSel {
    /// Subsystem index in the full layout.
    pub fn index(self) -> usize {
        match self {
            ModeSel::A => crate::MODE_A,
            ModeSel::B => crate::MODE_B,
        }
    }

    /// Subsystem index of the ion paired with this mode.
    pub fn ion(self) -> usize {
        match self {
            ModeSel::A => crate::ION_1,
            ModeSel::B => crate::ION_2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodingParams {
    pub alpha: f64,
    pub beta: f64,
    pub mode_a: ModeParams,
    pub mode_b: ModeParams,
    pub epsilon: f64,
    /// Dimension guard applied to every layout built from these parameters.
    pub max_dim: usize,
}

impl EncodingParams {
    /// Default cutoffs, `ε = 0`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = EncodingParams {
            alpha,
            beta,
            mode_a: ModeParams::for_amplitude(alpha),
            mode_b: ModeParams::for_amplitude(beta),
            epsilon: 0.0,
            max_dim: DEFAULT_MAX_DIM,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_cutoffs(alpha: f64, beta: f64, cutoff_a: usize, cutoff_b: usize) -> Result<Self> {
        let p = EncodingParams {
            mode_a: ModeParams::with_cutoff(cutoff_a)?,
            mode_b: ModeParams::with_cutoff(cutoff_b)?,
            ..Self::new(alpha, beta)?
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn with_max_dim(mut self, max_dim: usize) -> Self {
        self.max_dim = max_dim;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(
                    name,
                    format!("must be a positive real amplitude, got {v}"),
                ));
            }
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::param(
                "epsilon",
                format!("must be non-negative, got {}", self.epsilon),
            ));
        }
        if self.epsilon * self.alpha > core::f64::consts::PI {
            return Err(Error::param(
                "epsilon",
                format!("epsilon*alpha = {} exceeds pi", self.epsilon * self.alpha),
            ));
        }
        ModeParams::new(self.mode_a.cutoff, self.mode_a.leak_tol)?;
        ModeParams::new(self.mode_b.cutoff, self.mode_b.leak_tol)?;
        Ok(())
    }

    pub fn amplitude(&self, sel: ModeSel) -> f64 {
        match sel {
            ModeSel::A => self.alpha,
            ModeSel::B => self.beta,
        }
    }

    pub fn mode(&self, sel: ModeSel) -> &ModeParams {
        match sel {
            ModeSel::A => &self.mode_a,
            ModeSel::B => &self.mode_b,
        }
    }

    /// Single-mode layout `[N]` for `sel`.
    pub fn mode_layout(&self, sel: ModeSel) -> Result<SpaceLayout> {
        SpaceLayout::with_limit([self.mode(sel).cutoff], self.max_dim)
    }

    /// `[N_a, N_b]`.
    pub fn two_mode_layout(&self) -> Result<SpaceLayout> {
        SpaceLayout::with_limit([self.mode_a.cutoff, self.mode_b.cutoff], self.max_dim)
    }

    /// `[N_a, N_b, 2, 2]`.
    pub fn full_layout(&self) -> Result<SpaceLayout> {
        SpaceLayout::with_limit([self.mode_a.cutoff, self.mode_b.cutoff, 2, 2], self.max_dim)
    }

    /// `[N, 2]` for one mode and its ion.
    pub fn mode_ion_layout(&self, sel: ModeSel) -> Result<SpaceLayout> {
        SpaceLayout::with_limit([self.mode(sel).cutoff, 2], self.max_dim)
    }
}

fn relimit(state: StateVector, max_dim: usize) -> Result<StateVector> {
    let layout = state.layout().relimit(max_dim)?;
    state.with_layout(layout)
}

/// Cat state for logical `bit` on one mode.
pub fn logical_state(bit: u8, sel: ModeSel, params: &EncodingParams) -> Result<StateVector> {
    let s = cat(
        C64::new(params.amplitude(sel), 0.0),
        Parity::from_bit(bit),
        params.mode(sel),
    )?;
    relimit(s, params.max_dim)
}

/// `(|0_L⟩ ± |1_L⟩)/√2`, sign `+` for bit 0.
pub fn dft_state(bit: u8, sel: ModeSel, params: &EncodingParams) -> Result<StateVector> {
    let sign = if bit == 0 { 1.0 } else { -1.0 };
    logical_state(0, sel, params)?
        .plus(C64::new(sign, 0.0), &logical_state(1, sel, params)?)?
        .normalized()
}

/// `|x⟩_a ⊗ |y⟩_b` in the logical basis, two-mode layout.
pub fn logical_product(x: u8, y: u8, params: &EncodingParams) -> Result<StateVector> {
    logical_state(x, ModeSel::A, params)?.tensor(&logical_state(y, ModeSel::B, params)?)
}

/// Appends both ions in `|0⟩_e`.
pub fn with_ions(modes: &StateVector, params: &EncodingParams) -> Result<StateVector> {
    let ions = StateVector::basis(SpaceLayout::new([2, 2])?, &[0, 0])?;
    relimit(modes.clone(), params.max_dim)?.tensor(&ions)
}

/// Cross-Kerr phase `π` applied to `|α⟩|β⟩`, on the two-mode layout.
pub fn prepare_modes(params: &EncodingParams) -> Result<StateVector> {
    params.validate()?;
    let a = coherent(C64::new(params.alpha, 0.0), &params.mode_a)?;
    let b = coherent(C64::new(params.beta, 0.0), &params.mode_b)?;
    let product = relimit(a, params.max_dim)?.tensor(&b)?;
    apply_cross_kerr(core::f64::consts::PI, &product, 0, 1)
}

/// [`prepare_modes`] with both ions in `|0⟩_e`, on the full layout.
pub fn prepare_entangled(params: &EncodingParams) -> Result<StateVector> {
    with_ions(&prepare_modes(params)?, params)
}

/// Which side of the entangled coherent state carries the cat kets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factorization {
    /// `|α⟩(|β⟩ + |−β⟩) + |−α⟩(|β⟩ − |−β⟩)`
    CatsOnB,
    /// `(|α⟩ + |−α⟩)|β⟩ + (|α⟩ − |−α⟩)|−β⟩`
    CatsOnA,
}

/// The entangled coherent state assembled from coherent kets. The cat kets
/// are left unnormalized so that the expression equals the cross-Kerr output
/// exactly; only the overall state is normalized.
pub fn entangled_analytic(params: &EncodingParams, form: Factorization) -> Result<StateVector> {
    let (a, b) = (params.alpha, params.beta);
    let ca = |x: f64| {
        coherent(C64::new(x, 0.0), &params.mode_a).and_then(|s| relimit(s, params.max_dim))
    };
    let cb = |x: f64| coherent(C64::new(x, 0.0), &params.mode_b);
    let (pa, ma, pb, mb) = (ca(a)?, ca(-a)?, cb(b)?, cb(-b)?);
    let state = match form {
        Factorization::CatsOnB => {
            let even_b = pb.clone().plus(ONE, &mb)?;
            let odd_b = pb.plus(-ONE, &mb)?;
            pa.tensor(&even_b)?.plus(ONE, &ma.tensor(&odd_b)?)?
        }
        Factorization::CatsOnA => {
            let even_a = pa.clone().plus(ONE, &ma)?;
            let odd_a = pa.plus(-ONE, &ma)?;
            even_a.tensor(&pb)?.plus(ONE, &odd_a.tensor(&mb)?)?
        }
    };
    state.normalized()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    /// `(|00⟩ + |11⟩)/√2`
    PhiPlus,
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
}

/// Logical Bell state on the two-mode layout.
pub fn bell_target(kind: BellKind, params: &EncodingParams) -> Result<StateVector> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let (first, second) = match kind {
        BellKind::PhiPlus => ((0, 0), (1, 1)),
        BellKind::PsiPlus => ((0, 1), (1, 0)),
    };
    logical_product(first.0, first.1, params)?
        .scaled(h)
        .plus(h, &logical_product(second.0, second.1, params)?)
}

/// Named 2×2 logical gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogicalRotation {
    Hadamard,
    /// `[[cos θ, i sin θ], [i sin θ, cos θ]]`
    Rx(f64),
}

impl LogicalRotation {
    pub fn matrix(self) -> [[C64; 2]; 2] {
        match self {
            LogicalRotation::Hadamard => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            LogicalRotation::Rx(theta) => {
                let c = C64::new(theta.cos(), 0.0);
                let s = C64::new(0.0, theta.sin());
                [[c, s], [s, c]]
            }
        }
    }
}

/// `Σ u_ij |i_L⟩⟨j_L|` on the code space plus the identity on its
/// complement, for a 2×2 unitary `u`, as an operator on the standalone `[N]`
/// layout of `sel`.
pub fn logical_subspace_unitary(
    u: [[C64; 2]; 2],
    sel: ModeSel,
    params: &EncodingParams,
) -> Result<OperatorMatrix> {
    let basis = [
        logical_state(0, sel, params)?,
        logical_state(1, sel, params)?,
    ];
    let n = params.mode(sel).cutoff;
    let mut m = CMatrix::identity(n);
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let coef = u[i][j] - if i == j { ONE } else { ZERO };
            if coef != ZERO {
                m.add_scaled(&CMatrix::outer(bi.amplitudes(), bj.amplitudes()), coef);
            }
        }
    }
    OperatorMatrix::new(params.mode_layout(sel)?, [0], m)
}

/// Exact logical gate on one mode, identity outside the code space.
pub fn ideal_logical_rotation(
    kind: LogicalRotation,
    sel: ModeSel,
    params: &EncodingParams,
) -> Result<OperatorMatrix> {
    logical_subspace_unitary(kind.matrix(), sel, params)
}

/// Displacement parameter that realizes the logical rotation angle `theta`
/// on a cat of amplitude `amplitude`: `D(iε)` rotates by `2·amplitude·ε`.
pub fn rotation_epsilon(theta: f64, amplitude: f64) -> f64 {
    theta / (2.0 * amplitude)
}

/// `D(iε)` on `sel` with `ε` from [`rotation_epsilon`]; approximates
/// `rx(theta)` on the code space.
pub fn displacement_rotation(
    theta: f64,
    sel: ModeSel,
    params: &EncodingParams,
) -> Result<OperatorMatrix> {
    let eps = rotation_epsilon(theta, params.amplitude(sel));
    displacement(C64::new(0.0, eps), params.mode(sel))?.on(&params.mode_layout(sel)?, &[0])
}

/// Branch fidelities of the displacement rotation against `rx(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationFidelity {
    pub theta: f64,
    pub epsilon: f64,
    /// `|⟨ψ₀(θ)|D(iε)|0_L⟩|²`
    pub branch0: f64,
    /// `|⟨ψ₁(θ)|D(iε)|1_L⟩|²`
    pub branch1: f64,
    /// `exp(−ε²)`
    pub analytic: f64,
}

impl RotationFidelity {
    /// `max(1e−5, 5 e^{−2α²})`.
    pub fn tolerance(amplitude: f64) -> f64 {
        (5.0 * (-2.0 * amplitude * amplitude).exp()).max(1e-5)
    }

    pub fn max_error(&self) -> f64 {
        (self.branch0 - self.analytic)
            .abs()
            .max((self.branch1 - self.analytic).abs())
    }
}

/// Branch fidelities for a given displacement `ε` on mode `sel`.
pub fn rotation_fidelity_for_epsilon(
    epsilon: f64,
    sel: ModeSel,
    params: &EncodingParams,
) -> Result<RotationFidelity> {
    let amp = params.amplitude(sel);
    let theta = 2.0 * amp * epsilon;
    let d = displacement(C64::new(0.0, epsilon), params.mode(sel))?
        .on(&params.mode_layout(sel)?, &[0])?;
    let zero = logical_state(0, sel, params)?;
    let one = logical_state(1, sel, params)?;
    let rx = LogicalRotation::Rx(theta).matrix();
    let mut branches = [0.0; 2];
    for (k, input) in [&zero, &one].into_iter().enumerate() {
        let target = zero.clone().scaled(rx[0][k]).plus(rx[1][k], &one)?;
        branches[k] = target.inner(&apply(&d, input)?)?.norm_sqr();
    }
    Ok(RotationFidelity {
        theta,
        epsilon,
        branch0: branches[0],
        branch1: branches[1],
        analytic: (-epsilon * epsilon).exp(),
    })
}

/// Branch fidelities of [`displacement_rotation`] at angle `theta`.
pub fn rotation_fidelity(
    theta: f64,
    sel: ModeSel,
    params: &EncodingParams,
) -> Result<RotationFidelity> {
    rotation_fidelity_for_epsilon(rotation_epsilon(theta, params.amplitude(sel)), sel, params)
}

/// Amplitudes `⟨b_i|ψ⟩` of a ket in an explicit basis.
pub fn project_onto(basis: &[StateVector], state: &StateVector) -> Result<Vec<C64>> {
    basis.iter().map(|b| b.inner(state)).collect()
}

/// Cutoff large enough for a displaced cat of amplitude `amplitude` moved by
/// up to `shift`.
pub fn cutoff_with_headroom(amplitude: f64, shift: f64) -> usize {
    default_cutoff(amplitude + shift.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bosonic::{number_op, parity_op};
    use crate::tensor::{expectation, partial_trace_pure, state_fidelity};
    use core::f64::consts::PI;

    fn p(a: f64, b: f64) -> EncodingParams {
        EncodingParams::new(a, b).unwrap()
    }

    #[test]
    fn validation() {
        assert!(EncodingParams::new(0.0, 0.0).is_err());
        assert!(EncodingParams::new(2.0, -1.0).is_err());
        assert!(p(2.0, 2.0).with_epsilon(2.0).is_err());
        assert!(p(2.0, 2.0).with_epsilon(0.5).is_ok());
    }

    #[test]
    fn logical_states_are_graded_and_orthogonal() {
        let params = p(2.0, 2.0);
        let z = logical_state(0, ModeSel::A, &params).unwrap();
        let o = logical_state(1, ModeSel::A, &params).unwrap();
        assert!(z.inner(&o).unwrap().norm() < 1e-12);
        let par = parity_op(&params.mode_a).unwrap();
        assert!((expectation(&par, &z).unwrap().re - 1.0).abs() < 1e-10);
        assert!((expectation(&par, &o).unwrap().re + 1.0).abs() < 1e-10);
    }

    #[test]
    fn dft_states() {
        let params = p(3.0, 3.0);
        let d0 = dft_state(0, ModeSel::A, &params).unwrap();
        let d1 = dft_state(1, ModeSel::A, &params).unwrap();
        let coh = coherent(C64::new(3.0, 0.0), &params.mode_a).unwrap();
        assert!(state_fidelity(&d0, &coh).unwrap() >= 1.0 - 1e-7);
        assert!(d0.inner(&d1).unwrap().norm() < 1e-10);
        let z = logical_state(0, ModeSel::A, &params).unwrap();
        assert!((d0.inner(&z).unwrap().norm_sqr() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn preparation_matches_both_factorizations() {
        let params = EncodingParams::with_cutoffs(2.0, 2.0, 30, 30).unwrap();
        let prepared = prepare_modes(&params).unwrap();
        let on_b = entangled_analytic(&params, Factorization::CatsOnB).unwrap();
        let on_a = entangled_analytic(&params, Factorization::CatsOnA).unwrap();
        assert!(state_fidelity(&prepared, &on_b).unwrap() >= 1.0 - 1e-8);
        assert!((state_fidelity(&on_a, &on_b).unwrap() - 1.0).abs() < 1e-10);
        let full = prepare_entangled(&params).unwrap();
        assert_eq!(full.layout().dims(), &[30, 30, 2, 2]);
    }

    #[test]
    fn prepared_state_in_mixed_basis() {
        let params = p(3.0, 3.0);
        let psi = prepare_modes(&params).unwrap();
        for x in 0..2u8 {
            for y in 0..2u8 {
                let basis = dft_state(x, ModeSel::A, &params)
                    .unwrap()
                    .tensor(&logical_state(y, ModeSel::B, &params).unwrap())
                    .unwrap();
                let amp = basis.inner(&psi).unwrap().norm();
                let expect = if x == y { FRAC_1_SQRT_2 } else { 0.0 };
                assert!((amp - expect).abs() < 1e-6, "{x}{y}: {amp}");
            }
        }
        let rho_a = partial_trace_pure(&psi, &[0]).unwrap();
        let mut ev = rho_a.eigenvalues();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((ev[0] - 0.5).abs() < 1e-6 && (ev[1] - 0.5).abs() < 1e-6);
        assert!(ev[2].abs() < 1e-10);
    }

    #[test]
    fn hadamard_turns_preparation_into_bell_target() {
        let params = p(3.0, 3.0);
        let psi = prepare_modes(&params).unwrap();
        let h = ideal_logical_rotation(LogicalRotation::Hadamard, ModeSel::A, &params)
            .unwrap()
            .on(&params.two_mode_layout().unwrap(), &[0])
            .unwrap();
        let out = apply(&h, &psi).unwrap();
        let phi = bell_target(BellKind::PhiPlus, &params).unwrap();
        assert!((state_fidelity(&phi, &out).unwrap() - 1.0).abs() < 1e-8);
        let psi_p = bell_target(BellKind::PsiPlus, &params).unwrap();
        assert!(phi.inner(&psi_p).unwrap().norm() < 1e-12);
    }

    #[test]
    fn bell_parity_correlations_and_entropy() {
        let params = p(2.0, 2.0);
        let layout = params.two_mode_layout().unwrap();
        let pa = parity_op(&params.mode_a)
            .unwrap()
            .on(&layout, &[0])
            .unwrap();
        let pb = parity_op(&params.mode_b)
            .unwrap()
            .on(&layout, &[1])
            .unwrap();
        for (kind, sign) in [(BellKind::PhiPlus, 1.0), (BellKind::PsiPlus, -1.0)] {
            let s = bell_target(kind, &params).unwrap();
            let v = s
                .inner(&apply(&pa, &apply(&pb, &s).unwrap()).unwrap())
                .unwrap();
            assert!((v.re - sign).abs() < 1e-10);
        }
        let phi = bell_target(BellKind::PhiPlus, &params).unwrap();
        let ent = partial_trace_pure(&phi, &[0]).unwrap().entropy_bits();
        assert!((ent - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ideal_rotations() {
        let params = p(2.0, 2.0);
        let n = params.mode_a.cutoff;
        let r0 = ideal_logical_rotation(LogicalRotation::Rx(0.0), ModeSel::A, &params).unwrap();
        assert!(r0.matrix().max_abs_diff(&CMatrix::identity(n)) < 1e-12);
        let h = ideal_logical_rotation(LogicalRotation::Hadamard, ModeSel::A, &params).unwrap();
        let hh = h.matrix() * h.matrix();
        assert!(hh.max_abs_diff(&CMatrix::identity(n)) < 1e-12);
        let rx =
            ideal_logical_rotation(LogicalRotation::Rx(PI / 2.0), ModeSel::A, &params).unwrap();
        let z = logical_state(0, ModeSel::A, &params).unwrap();
        let o = logical_state(1, ModeSel::A, &params).unwrap();
        let out = apply(&rx, &z).unwrap();
        let diff = out.plus(C64::new(0.0, -1.0), &o).unwrap().norm();
        assert!(diff < 1e-12);
        assert!(rx.unitarity_residual() < 1e-10);
    }

    #[test]
    fn displacement_rotation_fidelity_law() {
        let params = p(3.0, 3.0);
        let mut params = params;
        params.mode_a = ModeParams::with_cutoff(cutoff_with_headroom(3.0, 1.0)).unwrap();
        for &(eps, expect) in &[(0.2, 0.960789), (0.1, 0.990050)] {
            let f = rotation_fidelity_for_epsilon(eps, ModeSel::A, &params).unwrap();
            assert!((f.branch0 - expect).abs() < 1e-5, "{f:?}");
            assert!((f.branch1 - expect).abs() < 1e-5, "{f:?}");
        }
        let f0 = rotation_fidelity(0.0, ModeSel::A, &params).unwrap();
        assert!((f0.branch0 - 1.0).abs() < 1e-12);
        let via_theta = rotation_fidelity(1.2, ModeSel::A, &params).unwrap();
        assert!((via_theta.epsilon - 0.2).abs() < 1e-15);
    }

    #[test]
    fn logical_product_mean_number() {
        let params = p(2.0, 2.0);
        let s = logical_state(0, ModeSel::B, &params).unwrap();
        let n = expectation(&number_op(&params.mode_b).unwrap(), &s)
            .unwrap()
            .re;
        let e = (-8.0f64).exp();
        assert!((n - 4.0 * (1.0 - e) / (1.0 + e)).abs() < 1e-8);
    }
}
