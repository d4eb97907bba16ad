//! CHSH correlations on the two electronic qubits.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use rand::Rng;

use crate::gates::cz_rotation;
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::noise::{mixed_bell, trajectory_rng};
use crate::tensor::{conjugate, DensityMatrix, OperatorMatrix, SpaceLayout};
use crate::{Error, Result};

/// Measurement angles `(θ₁, θ₁′, θ₂, θ₂′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellAngles {
    pub theta1: f64,
    pub theta1p: f64,
    pub theta2: f64,
    pub theta2p: f64,
}

impl Default for BellAngles {
    /// `(0, π/2, −π/4, π/4)`, optimal for `E = cos(θ₁ + θ₂)`.
    fn default() -> Self {
        BellAngles {
            theta1: 0.0,
            theta1p: FRAC_PI_2,
            theta2: -FRAC_PI_4,
            theta2p: FRAC_PI_4,
        }
    }
}

impl BellAngles {
    pub fn new(theta1: f64, theta1p: f64, theta2: f64, theta2p: f64) -> Self {
        BellAngles {
            theta1,
            theta1p,
            theta2,
            theta2p,
        }
    }

    /// Angle pairs in CHSH order: `(θ₁,θ₂), (θ₁,θ₂′), (θ₁′,θ₂), (θ₁′,θ₂′)`.
    pub fn pairs(&self) -> [(f64, f64); 4] {
        [
            (self.theta1, self.theta2),
            (self.theta1, self.theta2p),
            (self.theta1p, self.theta2),
            (self.theta1p, self.theta2p),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.theta1, self.theta1p, self.theta2, self.theta2p];
        if all.iter().any(|t| !t.is_finite()) {
            return Err(Error::param("angles", "Bell angles must be finite"));
        }
        Ok(())
    }
}

/// `|E₁ + E₂ + E₃ − E₄|` for correlations in [`BellAngles::pairs`] order.
pub fn chsh_combination(e: &[f64; 4]) -> f64 {
    (e[0] + e[1] + e[2] - e[3]).abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellOutcome {
    pub e: [f64; 4],
    pub b: f64,
    pub shots: Option<u64>,
    pub standard_errors: Option<[f64; 4]>,
}

impl BellOutcome {
    /// Standard error of `B` from the four independent correlation estimates.
    pub fn b_standard_error(&self) -> Option<f64> {
        self.standard_errors
            .map(|se| se.iter().map(|s| s * s).sum::<f64>().sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChshMode {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

fn sigma_theta_matrix(theta: f64) -> CMatrix {
    let e = C64::new(0.0, theta).exp();
    CMatrix::from_rows([[ZERO, e.conj()], [e, ZERO]])
}

/// `cos θ σ_x + sin θ σ_y` on a standalone qubit.
pub fn sigma_theta(theta: f64) -> Result<OperatorMatrix> {
    OperatorMatrix::standalone(&[2], sigma_theta_matrix(theta))
}

/// [`sigma_theta`] on subsystem `ion` of `layout`.
pub fn sigma_theta_on(layout: &SpaceLayout, ion: usize, theta: f64) -> Result<OperatorMatrix> {
    sigma_theta(theta)?.on(layout, &[ion])
}

fn check_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.layout().dims() != [2, 2] {
        return Err(Error::layout("expected a two-qubit density matrix"));
    }
    Ok(())
}

fn expect_product(rho: &DensityMatrix, a: &CMatrix, b: &CMatrix) -> f64 {
    rho.matrix().matmul(&a.kron(b)).trace().re
}

/// `⟨σ_{θ₁} ⊗ σ_{θ₂}⟩`.
pub fn correlation_exact(rho: &DensityMatrix, theta1: f64, theta2: f64) -> Result<f64> {
    check_two_qubits(rho)?;
    Ok(expect_product(
        rho,
        &sigma_theta_matrix(theta1),
        &sigma_theta_matrix(theta2),
    ))
}

/// `(1−δ) cos(θ₁+θ₂) + δ cos(θ₁−θ₂)`.
pub fn correlation_analytic(delta: f64, theta1: f64, theta2: f64) -> f64 {
    (1.0 - delta) * (theta1 + theta2).cos() + delta * (theta1 - theta2).cos()
}

/// Pulse phase that makes `V^{1/2} σ_z V^{1/2}†` equal `σ_θ`.
pub fn pulse_phase(theta: f64) -> f64 {
    -theta - FRAC_PI_2
}

/// The half-turn Cirac–Zoller pulse used to read out `σ_θ`.
pub fn readout_pulse(theta: f64) -> Result<OperatorMatrix> {
    cz_rotation(0.5, pulse_phase(theta))
}

/// `E` from `V^{1/2} σ_z V^{1/2}†` on each ion.
pub fn correlation_rotated(rho: &DensityMatrix, theta1: f64, theta2: f64) -> Result<f64> {
    check_two_qubits(rho)?;
    let sz = CMatrix::from_diag(&[ONE, -ONE]);
    let rotated = |theta: f64| -> Result<CMatrix> {
        let v = readout_pulse(theta)?;
        Ok(v.matrix().matmul(&sz).matmul(&v.matrix().dagger()))
    };
    Ok(expect_product(rho, &rotated(theta1)?, &rotated(theta2)?))
}

/// Joint `σ_z ⊗ σ_z` outcome probabilities after the readout pulses, in
/// `|00⟩, |01⟩, |10⟩, |11⟩` order.
pub fn outcome_distribution(rho: &DensityMatrix, theta1: f64, theta2: f64) -> Result<[f64; 4]> {
    check_two_qubits(rho)?;
    let u = readout_pulse(theta1)?
        .matrix()
        .kron(readout_pulse(theta2)?.matrix());
    let undo = OperatorMatrix::standalone(&[2, 2], u.dagger())?;
    let rotated = conjugate(
        &undo,
        &DensityMatrix::from_matrix(undo.layout().clone(), rho.matrix().clone())?,
    )?;
    let mut p = [0.0; 4];
    for (k, pk) in p.iter_mut().enumerate() {
        *pk = rotated.matrix()[(k, k)].re.max(0.0);
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    Ok(p)
}

/// Shot-sampled correlation and its standard error.
pub fn correlation_sampled<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    theta1: f64,
    theta2: f64,
    shots: u64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if shots == 0 {
        return Err(Error::param("shots", "must be at least 1"));
    }
    let p = outcome_distribution(rho, theta1, theta2)?;
    let mut sum = 0i64;
    for _ in 0..shots {
        let u: f64 = rng.random();
        let mut k = 3;
        let mut acc = 0.0;
        for (j, pj) in p.iter().enumerate() {
            acc += pj;
            if u < acc {
                k = j;
                break;
            }
        }
        sum += if k == 0 || k == 3 { 1 } else { -1 };
    }
    let n = shots as f64;
    let e = sum as f64 / n;
    let se = ((1.0 - e * e).max(0.0) / n).sqrt();
    Ok((e, se))
}

/// CHSH value of a two-qubit state. Sampled mode uses stream `k` of `seed`
/// for angle pair `k`.
pub fn chsh(rho: &DensityMatrix, angles: &BellAngles, mode: ChshMode) -> Result<BellOutcome> {
    angles.validate()?;
    let pairs = angles.pairs();
    match mode {
        ChshMode::Exact => {
            let mut e = [0.0; 4];
            for (k, &(t1, t2)) in pairs.iter().enumerate() {
                e[k] = correlation_exact(rho, t1, t2)?;
            }
            Ok(BellOutcome {
                e,
                b: chsh_combination(&e),
                shots: None,
                standard_errors: None,
            })
        }
        ChshMode::Sampled { shots, seed } => {
            let mut e = [0.0; 4];
            let mut se = [0.0; 4];
            for (k, &(t1, t2)) in pairs.iter().enumerate() {
                let mut rng = trajectory_rng(seed, k as u64);
                let (ek, sk) = correlation_sampled(rho, t1, t2, shots, &mut rng)?;
                e[k] = ek;
                se[k] = sk;
            }
            Ok(BellOutcome {
                e,
                b: chsh_combination(&e),
                shots: Some(shots),
                standard_errors: Some(se),
            })
        }
    }
}

/// `2√2 (1 − δ)`.
pub fn chsh_analytic(delta: f64) -> f64 {
    2.0 * SQRT_2 * (1.0 - delta)
}

/// `1 − 1/√2`, the δ at which `B` drops to 2.
pub fn violation_threshold() -> f64 {
    1.0 - 1.0 / SQRT_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolationScan {
    /// `(δ, B)` in grid order.
    pub rows: Vec<(f64, f64)>,
    /// Adjacent grid points with `B > 2` then `B ≤ 2`.
    pub bracket: Option<(f64, f64)>,
    /// Linear interpolation of the `B = 2` crossing inside the bracket.
    pub crossing: Option<f64>,
}

/// Exact `B` on `mixed_bell(δ)` for each grid point.
pub fn violation_scan(delta_grid: &[f64], angles: &BellAngles) -> Result<ViolationScan> {
    let mut rows = Vec::with_capacity(delta_grid.len());
    for &d in delta_grid {
        let rho = mixed_bell(d)?;
        rows.push((d, chsh(&rho, angles, ChshMode::Exact)?.b));
    }
    let mut bracket = None;
    let mut crossing = None;
    for w in rows.windows(2) {
        let ((d0, b0), (d1, b1)) = (w[0], w[1]);
        if b0 > 2.0 && b1 <= 2.0 {
            bracket = Some((d0, d1));
            crossing = Some(d0 + (b0 - 2.0) * (d1 - d0) / (b0 - b1));
            break;
        }
    }
    Ok(ViolationScan {
        rows,
        bracket,
        crossing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::StateVector;
    use core::f64::consts::PI;

    #[test]
    fn sigma_theta_special_angles() {
        let x = sigma_theta(0.0).unwrap();
        assert!(
            x.matrix()
                .max_abs_diff(&CMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]]))
                < 1e-15
        );
        let y = sigma_theta(PI / 2.0).unwrap();
        let i = C64::new(0.0, 1.0);
        assert!(
            y.matrix()
                .max_abs_diff(&CMatrix::from_rows([[ZERO, -i], [i, ZERO]]))
                < 1e-15
        );
        let s = sigma_theta(0.37).unwrap();
        assert!((s.matrix() * s.matrix()).max_abs_diff(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn correlation_formula() {
        let rho = mixed_bell(0.0).unwrap();
        assert!((correlation_exact(&rho, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
        let rho = mixed_bell(0.1).unwrap();
        let e = correlation_exact(&rho, PI / 6.0, PI / 12.0).unwrap();
        assert!((e - 0.732989).abs() < 1e-6, "{e}");
        let swapped = correlation_exact(&rho, PI / 12.0, PI / 6.0).unwrap();
        assert!((e - swapped).abs() < 1e-10);
        assert!((e - correlation_rotated(&rho, PI / 6.0, PI / 12.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_no_transverse_correlation() {
        let l = SpaceLayout::new([2, 2]).unwrap();
        let rho = DensityMatrix::from_pure(&StateVector::basis(l, &[0, 0]).unwrap());
        for t in [0.0, 0.4, 1.3, -2.0] {
            assert!(correlation_rotated(&rho, t, 0.5 * t).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn chsh_values() {
        let angles = BellAngles::default();
        for (d, b) in [
            (0.0, 2.828427),
            (violation_threshold(), 2.0),
            (0.5, 1.414214),
        ] {
            let out = chsh(&mixed_bell(d).unwrap(), &angles, ChshMode::Exact).unwrap();
            assert!((out.b - b).abs() < 1e-6, "{d}: {}", out.b);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let rho = mixed_bell(0.0).unwrap();
        let mode = ChshMode::Sampled {
            shots: 2000,
            seed: 3,
        };
        let a = chsh(&rho, &BellAngles::default(), mode).unwrap();
        let b = chsh(&rho, &BellAngles::default(), mode).unwrap();
        assert_eq!(a, b);
        let one = chsh(
            &rho,
            &BellAngles::default(),
            ChshMode::Sampled { shots: 1, seed: 9 },
        )
        .unwrap();
        assert!(one.e.iter().all(|e| e.abs() == 1.0));
    }

    #[test]
    fn scan_brackets_threshold() {
        let grid: Vec<f64> = (0..6).map(|k| k as f64 * 0.1).collect();
        let scan = violation_scan(&grid, &BellAngles::default()).unwrap();
        assert_eq!(scan.bracket, Some((0.2, 0.30000000000000004)));
        for (d, b) in &scan.rows {
            assert!((b - chsh_analytic(*d)).abs() < 1e-8);
        }
        let single = violation_scan(&[0.0], &BellAngles::default()).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert!(single.crossing.is_none());
    }
}
