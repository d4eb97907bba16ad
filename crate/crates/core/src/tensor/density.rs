use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{LocalIndexer, SpaceLayout, StateVector, NORMALIZATION_TOL};
use crate::linalg::{eigh, hermitian_sqrt, CMatrix, C64, ZERO};
use crate::{Error, Result};

/// Tolerances a density matrix must meet to count as physical.
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

/// Density operator over a composite layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: SpaceLayout,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn from_matrix(layout: SpaceLayout, matrix: CMatrix) -> Result<Self> {
        let n = layout.total_dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.rows(),
            });
        }
        Ok(DensityMatrix { layout, matrix })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        DensityMatrix {
            layout: state.layout().clone(),
            matrix: CMatrix::outer(state.amplitudes(), state.amplitudes()),
        }
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|`.
    pub fn from_mixture(components: &[(f64, &StateVector)]) -> Result<Self> {
        let (_, first) = components
            .first()
            .ok_or_else(|| Error::param("components", "empty mixture"))?;
        let layout = first.layout().clone();
        let n = layout.total_dim();
        let mut matrix = CMatrix::zeros(n, n);
        for &(w, psi) in components {
            if psi.layout() != &layout {
                return Err(Error::layout("mixture components have different layouts"));
            }
            matrix.add_scaled(
                &CMatrix::outer(psi.amplitudes(), psi.amplitudes()),
                C64::new(w, 0.0),
            );
        }
        Ok(DensityMatrix { layout, matrix })
    }

    /// Maximally mixed state.
    pub fn maximally_mixed(layout: SpaceLayout) -> Self {
        let n = layout.total_dim();
        DensityMatrix {
            layout,
            matrix: CMatrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    #[inline]
    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.matrix.hermiticity_error()
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.hermitian_part()).values
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > 1e-15)
            .map(|l| -l * l.log2())
            .sum()
    }

    /// Checks hermiticity, unit trace and positivity against the module
    /// tolerances.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::Contract {
                what: "density matrix is not Hermitian".into(),
                residual: herm,
            });
        }
        let tr = self.trace();
        let drift = (tr - C64::new(1.0, 0.0)).norm();
        if drift > TRACE_TOL {
            return Err(Error::Contract {
                what: "density matrix trace differs from one".into(),
                residual: drift,
            });
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::Contract {
                what: "density matrix has a negative eigenvalue".into(),
                residual: -min,
            });
        }
        Ok(())
    }

    /// Averages the matrix with its adjoint, removing rounding asymmetry.
    pub fn symmetrized(mut self) -> Self {
        self.matrix = self.hermitian_part();
        self
    }

    fn hermitian_part(&self) -> CMatrix {
        (&self.matrix + &self.matrix.dagger()).scale_real(0.5)
    }
}

/// Reduced state on `keep`, with the factors ordered as listed.
pub fn partial_trace(dm: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let layout = dm.layout();
    let reduced_layout = layout.subset(keep)?;
    let ix = LocalIndexer::new(layout, keep)?;
    let k = ix.offsets.len();
    let m = dm.matrix();
    let mut out = CMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let mut acc = ZERO;
            for &base in &ix.bases {
                acc += m[(base + ix.offsets[i], base + ix.offsets[j])];
            }
            out[(i, j)] = acc;
        }
    }
    DensityMatrix::from_matrix(reduced_layout, out)
}

/// Reduced state on `keep` of the pure state `|ψ⟩⟨ψ|`.
pub fn partial_trace_pure(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let layout = state.layout();
    let reduced_layout = layout.subset(keep)?;
    let ix = LocalIndexer::new(layout, keep)?;
    let k = ix.offsets.len();
    let psi = state.amplitudes();
    let mut out = CMatrix::zeros(k, k);
    for &base in &ix.bases {
        for i in 0..k {
            let a = psi[base + ix.offsets[i]];
            if a == ZERO {
                continue;
            }
            for j in 0..k {
                out[(i, j)] += a * psi[base + ix.offsets[j]].conj();
            }
        }
    }
    DensityMatrix::from_matrix(reduced_layout, out)
}

/// `⟨ψ|ρ|ψ⟩` for a normalized ket.
pub fn dm_fidelity(dm: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    if dm.layout() != psi.layout() {
        return Err(Error::layout("density matrix and state layouts differ"));
    }
    psi.check_normalized()?;
    let tr = dm.trace().re;
    if (tr - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Unnormalized { norm: tr });
    }
    let rho_psi = dm.matrix().mul_vec(psi.amplitudes());
    Ok(psi
        .amplitudes()
        .iter()
        .zip(&rho_psi)
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .re)
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` between two density matrices.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.layout() != sigma.layout() {
        return Err(Error::layout("density matrix layouts differ"));
    }
    let root = hermitian_sqrt(&rho.hermitian_part());
    let inner = root.matmul(&sigma.hermitian_part()).matmul(&root);
    let inner = (&inner + &inner.dagger()).scale_real(0.5);
    let s: f64 = eigh(&inner).values.iter().map(|&l| l.max(0.0).sqrt()).sum();
    Ok(s * s)
}
