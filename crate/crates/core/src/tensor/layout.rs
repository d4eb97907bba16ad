use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Default guard on the total dimension of a dense layout.
pub const DEFAULT_MAX_DIM: usize = 16_384;

/// Ordered tensor-product structure. Equality compares dimensions only; the
/// dimension guard travels along as configuration.
#[derive(Debug, Clone)]
pub struct SpaceLayout {
    dims: Vec<usize>,
    max_dim: usize,
}

impl PartialEq for SpaceLayout {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
    }
}

impl Eq for SpaceLayout {}

impl SpaceLayout {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        Self::with_limit(dims, DEFAULT_MAX_DIM)
    }

    pub fn with_limit(dims: impl Into<Vec<usize>>, max_dim: usize) -> Result<Self> {
        let dims = dims.into();
        if let Some(&bad) = dims.iter().find(|&&d| d == 0) {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: bad,
            });
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX);
        if total > max_dim {
            return Err(Error::DimensionLimit {
                requested: total,
                limit: max_dim,
            });
        }
        Ok(SpaceLayout { dims, max_dim })
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of tensor factors.
    #[inline]
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Flattened-index stride of each factor.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Flattened index of a multi-index.
    pub fn flat_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                found: digits.len(),
            });
        }
        let mut idx = 0;
        for (&d, &dim) in digits.iter().zip(&self.dims) {
            if d >= dim {
                return Err(Error::IndexOutOfRange {
                    index: d,
                    count: dim,
                });
            }
            idx = idx * dim + d;
        }
        Ok(idx)
    }

    /// Tensor product of two layouts; the looser dimension guard wins.
    pub fn concat(&self, other: &SpaceLayout) -> Result<SpaceLayout> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        SpaceLayout::with_limit(dims, self.max_dim.max(other.max_dim))
    }

    /// Layout of the listed factors, in the listed order.
    pub fn subset(&self, indices: &[usize]) -> Result<SpaceLayout> {
        self.check_targets(indices)?;
        let dims: Vec<usize> = indices.iter().map(|&i| self.dims[i]).collect();
        SpaceLayout::with_limit(dims, self.max_dim)
    }

    /// Same dimensions, different guard.
    pub fn relimit(&self, max_dim: usize) -> Result<SpaceLayout> {
        SpaceLayout::with_limit(self.dims.clone(), max_dim)
    }

    pub(crate) fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for (k, &t) in targets.iter().enumerate() {
            if t >= self.dims.len() {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    count: self.dims.len(),
                });
            }
            if targets[..k].contains(&t) {
                return Err(Error::layout("subsystem listed twice"));
            }
        }
        Ok(())
    }
}

/// Maps a local multi-index over `targets` (in target order) onto flattened
/// offsets, and enumerates the flattened bases of the untouched factors.
pub(crate) struct LocalIndexer {
    /// Full-space offset of each local basis index.
    pub offsets: Vec<usize>,
    /// Full-space index of every configuration of the other factors with the
    /// target digits set to zero.
    pub bases: Vec<usize>,
}

impl LocalIndexer {
    pub fn new(layout: &SpaceLayout, targets: &[usize]) -> Result<Self> {
        layout.check_targets(targets)?;
        let strides = layout.strides();
        let dims = layout.dims();

        let local_dim: usize = targets.iter().map(|&t| dims[t]).product();
        let mut offsets = Vec::with_capacity(local_dim);
        let mut digits = vec![0usize; targets.len()];
        for _ in 0..local_dim {
            offsets.push(
                digits
                    .iter()
                    .zip(targets)
                    .map(|(&d, &t)| d * strides[t])
                    .sum(),
            );
            for k in (0..targets.len()).rev() {
                digits[k] += 1;
                if digits[k] < dims[targets[k]] {
                    break;
                }
                digits[k] = 0;
            }
        }

        let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
        let rest_dim: usize = rest.iter().map(|&r| dims[r]).product();
        let mut bases = Vec::with_capacity(rest_dim);
        let mut digits = vec![0usize; rest.len()];
        for _ in 0..rest_dim {
            bases.push(
                digits
                    .iter()
                    .zip(&rest)
                    .map(|(&d, &r)| d * strides[r])
                    .sum(),
            );
            for k in (0..rest.len()).rev() {
                digits[k] += 1;
                if digits[k] < dims[rest[k]] {
                    break;
                }
                digits[k] = 0;
            }
        }
        Ok(LocalIndexer { offsets, bases })
    }
}
