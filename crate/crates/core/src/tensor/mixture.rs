use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{apply, partial_trace_pure, DensityMatrix, OperatorMatrix, SpaceLayout, StateVector};
use crate::linalg::{CMatrix, C64};
use crate::{Error, Result};

/// Mixed state kept as a weighted ensemble of normalized kets. This is how
/// the full protocol carries mixedness without a full-space density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    components: Vec<(f64, StateVector)>,
}

impl Mixture {
    pub fn pure(state: StateVector) -> Self {
        Mixture {
            components: alloc::vec![(1.0, state)],
        }
    }

    pub fn new(components: Vec<(f64, StateVector)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::param("components", "empty mixture"))?;
        let layout = first.1.layout().clone();
        let mut total = 0.0;
        for (w, psi) in &components {
            if w.is_nan() || *w < 0.0 {
                return Err(Error::param(
                    "weight",
                    "mixture weights must be non-negative",
                ));
            }
            if psi.layout() != &layout {
                return Err(Error::layout("mixture components have different layouts"));
            }
            psi.check_normalized()?;
            total += w;
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::param("weight", "mixture weights must sum to one"));
        }
        Ok(Mixture { components })
    }

    pub fn layout(&self) -> &SpaceLayout {
        self.components[0].1.layout()
    }

    pub fn components(&self) -> &[(f64, StateVector)] {
        &self.components
    }

    /// Applies the same unitary to every component.
    pub fn apply(&self, op: &OperatorMatrix) -> Result<Mixture> {
        let components = self
            .components
            .iter()
            .map(|(w, psi)| Ok((*w, apply(op, psi)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mixture { components })
    }

    /// Maps each component through `f`.
    pub fn map(&self, mut f: impl FnMut(&StateVector) -> Result<StateVector>) -> Result<Mixture> {
        let components = self
            .components
            .iter()
            .map(|(w, psi)| Ok((*w, f(psi)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mixture { components })
    }

    /// Reduced density matrix on `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = self.layout().subset(keep)?;
        let n = layout.total_dim();
        let mut acc = CMatrix::zeros(n, n);
        for (w, psi) in &self.components {
            let r = partial_trace_pure(psi, keep)?;
            acc.add_scaled(r.matrix(), C64::new(*w, 0.0));
        }
        DensityMatrix::from_matrix(layout, acc)
    }

    /// Full density matrix; subject to the layout's dimension guard.
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        let all: Vec<usize> = (0..self.layout().len()).collect();
        self.reduced(&all)
    }
}
