//! Single bosonic modes in a truncated Fock basis.
//!
//! Coherent amplitudes come from the recurrence `c_n = c_{n-1} α / √n`, which
//! stays finite where `αⁿ/√(n!)` would overflow. The truncated tail mass is
//! summed by running the same recurrence past the cutoff.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::tensor::{matrix_exp, OperatorMatrix, SpaceLayout, StateVector};
use crate::{Error, Result};

/// Default bound on the probability mass discarded by truncation.
pub const DEFAULT_LEAK_TOL: f64 = 1e-10;

/// Truncation of one mode: Fock states `|0⟩ … |cutoff−1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub cutoff: usize,
    pub leak_tol: f64,
}

impl ModeParams {
    pub fn new(cutoff: usize, leak_tol: f64) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::param(
                "cutoff",
                format!("must be at least 2, got {cutoff}"),
            ));
        }
        if !(leak_tol > 0.0 && leak_tol <= 1e-4) {
            return Err(Error::param(
                "leak_tol",
                format!("must lie in (0, 1e-4], got {leak_tol}"),
            ));
        }
        Ok(ModeParams { cutoff, leak_tol })
    }

    pub fn with_cutoff(cutoff: usize) -> Result<Self> {
        Self::new(cutoff, DEFAULT_LEAK_TOL)
    }

    /// Cutoff from [`default_cutoff`] and the default leak tolerance.
    pub fn for_amplitude(alpha: f64) -> Self {
        ModeParams {
            cutoff: default_cutoff(alpha),
            leak_tol: DEFAULT_LEAK_TOL,
        }
    }

    pub fn layout(&self) -> Result<SpaceLayout> {
        SpaceLayout::new([self.cutoff])
    }
}

/// `ceil(|α|² + 6|α| + 10)`.
pub fn default_cutoff(alpha: f64) -> usize {
    let a = alpha.abs();
    (a * a + 6.0 * a + 10.0).ceil() as usize
}

/// Probability mass of `|α⟩` on Fock levels `≥ cutoff`.
pub fn coherent_tail(alpha: f64, cutoff: usize) -> f64 {
    let a2 = alpha * alpha;
    let mut p = (-a2).exp();
    let mut tail = 0.0;
    let mut n = 0usize;
    loop {
        if n >= cutoff {
            tail += p;
            // past the Poisson peak the terms only shrink
            if n as f64 > a2 && p < 1e-300_f64.max(tail * 1e-18) {
                break;
            }
        }
        n += 1;
        p *= a2 / n as f64;
        if n > cutoff + 10_000 {
            break;
        }
    }
    tail
}

/// Smallest cutoff whose truncated coherent mass is below `leak_tol`.
pub fn required_cutoff(alpha: f64, leak_tol: f64) -> usize {
    let mut n = 2;
    while coherent_tail(alpha, n) >= leak_tol {
        n += 1;
    }
    n
}

fn check_capacity(alpha: f64, mode: &ModeParams) -> Result<()> {
    let tail = coherent_tail(alpha, mode.cutoff);
    if tail >= mode.leak_tol {
        return Err(Error::Capacity {
            cutoff: mode.cutoff,
            amplitude: alpha,
            tail,
            leak_tol: mode.leak_tol,
            required: required_cutoff(alpha, mode.leak_tol),
        });
    }
    Ok(())
}

/// Exact (untruncated, unrenormalized) coherent amplitudes below the cutoff.
fn coherent_amplitudes(alpha: C64, cutoff: usize) -> Vec<C64> {
    let mut amps = Vec::with_capacity(cutoff);
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..cutoff {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        amps.push(c);
    }
    amps
}

/// `|α⟩` truncated to the cutoff and renormalized.
pub fn coherent(alpha: C64, mode: &ModeParams) -> Result<StateVector> {
    check_capacity(alpha.norm(), mode)?;
    StateVector::new(mode.layout()?, coherent_amplitudes(alpha, mode.cutoff))?.normalized()
}

/// Photon-number parity of a cat state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// `+1` or `−1`.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// `N±(ξ) = 1/√(2 ± 2e^{−2|ξ|²})`.
pub fn cat_normalization(xi: f64, parity: Parity) -> f64 {
    1.0 / (2.0 + 2.0 * parity.sign() * (-2.0 * xi * xi).exp()).sqrt()
}

/// Normalized `|α⟩ ± |−α⟩`, built by keeping only the Fock levels of the
/// requested parity.
pub fn cat(alpha: C64, parity: Parity, mode: &ModeParams) -> Result<StateVector> {
    if parity == Parity::Odd && alpha.norm() == 0.0 {
        return Err(Error::Degenerate(
            "odd cat state with zero amplitude".into(),
        ));
    }
    check_capacity(alpha.norm(), mode)?;
    let mut amps = coherent_amplitudes(alpha, mode.cutoff);
    let keep = parity.bit() as usize;
    for (n, a) in amps.iter_mut().enumerate() {
        if n % 2 != keep {
            *a = ZERO;
        }
    }
    StateVector::new(mode.layout()?, amps)?.normalized()
}

fn mode_op(mode: &ModeParams, m: CMatrix) -> Result<OperatorMatrix> {
    OperatorMatrix::standalone(&[mode.cutoff], m)
}

fn diag_op(mode: &ModeParams, f: impl Fn(usize) -> C64) -> Result<OperatorMatrix> {
    let d: Vec<C64> = (0..mode.cutoff).map(f).collect();
    mode_op(mode, CMatrix::from_diag(&d))
}

/// Truncated `a`.
pub fn annihilation(mode: &ModeParams) -> Result<OperatorMatrix> {
    let n = mode.cutoff;
    let m = CMatrix::from_fn(n, n, |r, c| {
        if c == r + 1 {
            C64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    mode_op(mode, m)
}

/// Truncated `a†`.
pub fn creation(mode: &ModeParams) -> Result<OperatorMatrix> {
    Ok(annihilation(mode)?.dagger())
}

pub fn number_op(mode: &ModeParams) -> Result<OperatorMatrix> {
    diag_op(mode, |n| C64::new(n as f64, 0.0))
}

/// `(−1)^n̂`.
pub fn parity_op(mode: &ModeParams) -> Result<OperatorMatrix> {
    diag_op(mode, |n| if n % 2 == 0 { ONE } else { -ONE })
}

/// `(Π_even, Π_odd)`.
pub fn parity_projectors(mode: &ModeParams) -> Result<(OperatorMatrix, OperatorMatrix)> {
    Ok((
        diag_op(mode, |n| if n % 2 == 0 { ONE } else { ZERO })?,
        diag_op(mode, |n| if n % 2 == 1 { ONE } else { ZERO })?,
    ))
}

/// `D(β) = exp(βa† − β*a)` from the truncated generator. The displaced vacuum
/// must fit the cutoff.
pub fn displacement(beta: C64, mode: &ModeParams) -> Result<OperatorMatrix> {
    check_capacity(beta.norm(), mode)?;
    let a = annihilation(mode)?;
    let gen = a.dagger().scale(beta).matrix() - &a.matrix().scale(beta.conj());
    matrix_exp(&mode_op(mode, gen)?, ONE)
}

/// Diagonal phases `exp(−i χt n_a n_b)` in `[n_a, n_b]` row-major order.
pub fn cross_kerr_phases(chi_t: f64, cutoff_a: usize, cutoff_b: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(cutoff_a * cutoff_b);
    for na in 0..cutoff_a {
        for nb in 0..cutoff_b {
            // reduce the integer product first so large phases stay accurate
            let phase = if chi_t == core::f64::consts::PI {
                if (na * nb) % 2 == 0 {
                    0.0
                } else {
                    core::f64::consts::PI
                }
            } else {
                chi_t * (na * nb) as f64
            };
            out.push(C64::new(0.0, -phase).exp());
        }
    }
    out
}

/// `exp(−i χt a†a b†b)` on a standalone `[N_a, N_b]` layout.
pub fn cross_kerr(chi_t: f64, mode_a: &ModeParams, mode_b: &ModeParams) -> Result<OperatorMatrix> {
    let d = cross_kerr_phases(chi_t, mode_a.cutoff, mode_b.cutoff);
    OperatorMatrix::standalone(&[mode_a.cutoff, mode_b.cutoff], CMatrix::from_diag(&d))
}

/// Applies the cross-Kerr phases to subsystems `a` and `b` of `state` without
/// building the (diagonal) operator matrix.
pub fn apply_cross_kerr(
    chi_t: f64,
    state: &StateVector,
    a: usize,
    b: usize,
) -> Result<StateVector> {
    let layout = state.layout().clone();
    layout.check_targets(&[a, b])?;
    let (na, nb) = (layout.dims()[a], layout.dims()[b]);
    let phases = cross_kerr_phases(chi_t, na, nb);
    let strides = layout.strides();
    let dims = layout.dims();
    let mut out = state.clone();
    for (idx, amp) in out.amplitudes_mut().iter_mut().enumerate() {
        let da = (idx / strides[a]) % dims[a];
        let db = (idx / strides[b]) % dims[b];
        *amp *= phases[da * nb + db];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{apply, expectation, state_fidelity};
    use core::f64::consts::PI;

    fn m(n: usize) -> ModeParams {
        ModeParams::with_cutoff(n).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ModeParams::new(1, 1e-10).is_err());
        assert!(ModeParams::new(10, 0.0).is_err());
        assert!(ModeParams::new(10, 1e-3).is_err());
        assert_eq!(default_cutoff(2.0), 26);
        assert_eq!(default_cutoff(8.0), 122);
    }

    #[test]
    fn coherent_zero_is_vacuum() {
        let s = coherent(ZERO, &m(8)).unwrap();
        assert_eq!(s.amplitudes()[0], ONE);
        assert!(s.amplitudes()[1..].iter().all(|a| *a == ZERO));
    }

    #[test]
    fn coherent_mean_number() {
        let s = coherent(C64::new(2.0, 0.0), &m(30)).unwrap();
        let n = expectation(&number_op(&m(30)).unwrap(), &s).unwrap();
        assert!((n.re - 4.0).abs() < 1e-9);
    }

    #[test]
    fn coherent_overlap_with_mirror() {
        let p = coherent(C64::new(2.0, 0.0), &m(30)).unwrap();
        let q = coherent(C64::new(-2.0, 0.0), &m(30)).unwrap();
        let ov = p.inner(&q).unwrap();
        assert!((ov.re - (-8.0f64).exp()).abs() < 1e-10);
        assert!((state_fidelity(&p, &q).unwrap() - (-16.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn capacity_error_names_required_cutoff() {
        match coherent(C64::new(4.0, 0.0), &m(10)) {
            Err(Error::Capacity { required, .. }) => assert!(required > 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cat_normalization_and_support() {
        let n = cat_normalization(3.0, Parity::Even);
        assert!((n - 1.0 / (2.0 + 2.0 * (-18.0f64).exp()).sqrt()).abs() < 1e-12);
        let mode = m(30);
        let even = cat(C64::new(2.0, 0.0), Parity::Even, &mode).unwrap();
        let p = expectation(&parity_op(&mode).unwrap(), &even).unwrap();
        assert!((p.re - 1.0).abs() < 1e-10);
        let (_, odd_proj) = parity_projectors(&mode).unwrap();
        assert!(apply(&odd_proj, &even).unwrap().norm() < 1e-12);
        assert!(cat(ZERO, Parity::Odd, &mode).is_err());
        let vac = cat(ZERO, Parity::Even, &mode).unwrap();
        assert_eq!(vac.amplitudes()[0], ONE);
    }

    #[test]
    fn odd_cat_mean_number() {
        let mode = m(30);
        let s = cat(C64::new(2.0, 0.0), Parity::Odd, &mode).unwrap();
        let n = expectation(&number_op(&mode).unwrap(), &s).unwrap().re;
        let e = (-8.0f64).exp();
        assert!((n - 4.0 * (1.0 + e) / (1.0 - e)).abs() < 1e-8);
    }

    #[test]
    fn displacement_properties() {
        let mode = m(40);
        let d0 = displacement(ZERO, &mode).unwrap();
        assert!(d0.matrix().max_abs_diff(&CMatrix::identity(40)) < 1e-14);

        let b = C64::new(0.7, 0.3);
        let prod =
            displacement(b, &mode).unwrap().matrix() * displacement(-b, &mode).unwrap().matrix();
        // the truncated generator makes the top corner inexact
        let mut worst = 0.0f64;
        for r in 0..30 {
            for c in 0..30 {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((prod[(r, c)] - C64::new(target, 0.0)).norm());
            }
        }
        assert!(worst < 1e-10, "{worst}");
        assert!(displacement(b, &mode).unwrap().unitarity_residual() < 1e-10);
    }

    #[test]
    fn displaced_coherent_state_picks_up_phase() {
        let mode = m(default_cutoff(3.2));
        let (alpha, eps) = (3.0, 0.1);
        let d = displacement(C64::new(0.0, eps), &mode).unwrap();
        let s = apply(&d, &coherent(C64::new(alpha, 0.0), &mode).unwrap()).unwrap();
        let target = coherent(C64::new(alpha, eps), &mode).unwrap();
        let ov = target.inner(&s).unwrap();
        assert!((ov.norm() - 1.0).abs() < 1e-8);
        assert!((ov.arg() - alpha * eps).abs() < 1e-8);
    }

    #[test]
    fn cross_kerr_periodicity_and_identity() {
        let mode = m(16);
        let k0 = cross_kerr(0.0, &mode, &mode).unwrap();
        assert!(k0.matrix().max_abs_diff(&CMatrix::identity(256)) < 1e-15);
        let psi = coherent(C64::new(1.0, 0.0), &mode)
            .unwrap()
            .tensor(&coherent(C64::new(1.2, 0.0), &mode).unwrap())
            .unwrap();
        let out = apply_cross_kerr(2.0 * PI, &psi, 0, 1).unwrap();
        assert!((state_fidelity(&psi, &out).unwrap() - 1.0).abs() < 1e-10);
        let via_op = apply(&cross_kerr(0.3, &mode, &mode).unwrap(), &psi).unwrap();
        let direct = apply_cross_kerr(0.3, &psi, 0, 1).unwrap();
        let diff = via_op.plus(-ONE, &direct).unwrap().norm();
        assert!(diff < 1e-13);
    }
}
