use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{SpaceLayout, NORMALIZATION_TOL};
use crate::linalg::{C64, ONE, ZERO};
use crate::{Error, Result};

/// Ket over a composite layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: SpaceLayout,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(layout: SpaceLayout, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::param("amplitudes", "non-finite amplitude"));
        }
        Ok(StateVector { layout, amps })
    }

    pub fn zero(layout: SpaceLayout) -> Self {
        let n = layout.total_dim();
        StateVector {
            layout,
            amps: vec![ZERO; n],
        }
    }

    /// Computational basis ket `|d_0 d_1 …⟩`.
    pub fn basis(layout: SpaceLayout, digits: &[usize]) -> Result<Self> {
        let idx = layout.flat_index(digits)?;
        let mut s = Self::zero(layout);
        s.amps[idx] = ONE;
        Ok(s)
    }

    #[inline]
    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n.is_nan() || n <= 1e-300 {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        let inv = 1.0 / n;
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(self)
    }

    pub fn scaled(mut self, c: C64) -> Self {
        self.amps.iter_mut().for_each(|a| *a *= c);
        self
    }

    /// `self + c * other`.
    pub fn plus(mut self, c: C64, other: &StateVector) -> Result<Self> {
        self.check_layout(other)?;
        for (a, &b) in self.amps.iter_mut().zip(&other.amps) {
            *a += c * b;
        }
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_layout(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Kronecker product with `self` as the slower factor.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let layout = self.layout.concat(&other.layout)?;
        let mut amps = Vec::with_capacity(layout.total_dim());
        for &a in &self.amps {
            amps.extend(other.amps.iter().map(|&b| a * b));
        }
        Ok(StateVector { layout, amps })
    }

    /// Re-tags the ket with a layout of identical dimensions (for example to
    /// change the dimension guard).
    pub fn with_layout(mut self, layout: SpaceLayout) -> Result<Self> {
        if layout != self.layout {
            return Err(Error::layout("relabelling requires identical dimensions"));
        }
        self.layout = layout;
        Ok(self)
    }

    pub(crate) fn check_layout(&self, other: &StateVector) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::layout("state layouts differ"));
        }
        Ok(())
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Unnormalized { norm: n });
        }
        Ok(())
    }
}

/// Kronecker product of several kets, first argument slowest.
pub fn tensor_states(states: &[&StateVector]) -> Result<StateVector> {
    let (first, rest) = states
        .split_first()
        .ok_or_else(|| Error::param("states", "empty tensor product"))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, s| acc.tensor(s))
}

/// `|⟨a|b⟩|²` for normalized kets.
pub fn state_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    a.check_normalized()?;
    b.check_normalized()?;
    Ok(a.inner(b)?.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(d: &[usize]) -> SpaceLayout {
        SpaceLayout::new(d.to_vec()).unwrap()
    }

    #[test]
    fn basis_tensor_basis() {
        let z = StateVector::basis(layout(&[2]), &[0]).unwrap();
        let zz = tensor_states(&[&z, &z]).unwrap();
        assert_eq!(zz.amplitudes(), &[ONE, ZERO, ZERO, ZERO]);
        assert_eq!(zz.layout().dims(), &[2, 2]);
    }

    #[test]
    fn fidelity_requires_normalized_inputs() {
        let a = StateVector::basis(layout(&[3]), &[1]).unwrap();
        let b = a.clone().scaled(C64::new(2.0, 0.0));
        assert!(matches!(
            state_fidelity(&a, &b),
            Err(Error::Unnormalized { .. })
        ));
        assert_eq!(state_fidelity(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn mismatched_layouts_are_rejected() {
        let a = StateVector::basis(layout(&[2, 2]), &[0, 0]).unwrap();
        let b = StateVector::basis(layout(&[4]), &[0]).unwrap();
        assert!(matches!(a.inner(&b), Err(Error::LayoutMismatch(_))));
    }

    #[test]
    fn zero_vector_cannot_be_normalized() {
        assert!(StateVector::zero(layout(&[2])).normalized().is_err());
    }
}
