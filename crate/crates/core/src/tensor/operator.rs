use alloc::vec::Vec;

use super::{DensityMatrix, LocalIndexer, SpaceLayout, StateVector};
use crate::linalg::{expm, CMatrix, C64, ZERO};
use crate::{Error, Result};

/// Dense operator on a list of subsystems of a layout. The local matrix is
/// indexed with the first listed subsystem slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    layout: SpaceLayout,
    acts_on: Vec<usize>,
    matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn new(
        layout: SpaceLayout,
        acts_on: impl Into<Vec<usize>>,
        matrix: CMatrix,
    ) -> Result<Self> {
        let acts_on = acts_on.into();
        layout.check_targets(&acts_on)?;
        let local: usize = acts_on.iter().map(|&i| layout.dims()[i]).product();
        if !matrix.is_square() || matrix.rows() != local {
            return Err(Error::DimensionMismatch {
                expected: local,
                found: matrix.rows(),
            });
        }
        Ok(OperatorMatrix {
            layout,
            acts_on,
            matrix,
        })
    }

    /// Operator acting on every factor of a fresh layout with `dims`.
    pub fn standalone(dims: &[usize], matrix: CMatrix) -> Result<Self> {
        let layout = SpaceLayout::new(dims.to_vec())?;
        let all: Vec<usize> = (0..dims.len()).collect();
        Self::new(layout, all, matrix)
    }

    pub fn identity(layout: SpaceLayout) -> Self {
        let all: Vec<usize> = (0..layout.len()).collect();
        let n = layout.total_dim();
        OperatorMatrix {
            layout,
            acts_on: all,
            matrix: CMatrix::identity(n),
        }
    }

    #[inline]
    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    #[inline]
    pub fn acts_on(&self) -> &[usize] {
        &self.acts_on
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Places this operator into `full`: factor `j` of the current layout is
    /// mapped onto factor `targets[j]`.
    pub fn on(&self, full: &SpaceLayout, targets: &[usize]) -> Result<OperatorMatrix> {
        if targets.len() != self.layout.len() {
            return Err(Error::DimensionMismatch {
                expected: self.layout.len(),
                found: targets.len(),
            });
        }
        full.check_targets(targets)?;
        for (j, &t) in targets.iter().enumerate() {
            if full.dims()[t] != self.layout.dims()[j] {
                return Err(Error::DimensionMismatch {
                    expected: self.layout.dims()[j],
                    found: full.dims()[t],
                });
            }
        }
        let acts_on: Vec<usize> = self.acts_on.iter().map(|&j| targets[j]).collect();
        OperatorMatrix::new(full.clone(), acts_on, self.matrix.clone())
    }

    pub fn dagger(&self) -> OperatorMatrix {
        OperatorMatrix {
            layout: self.layout.clone(),
            acts_on: self.acts_on.clone(),
            matrix: self.matrix.dagger(),
        }
    }

    pub fn scale(&self, s: C64) -> OperatorMatrix {
        OperatorMatrix {
            layout: self.layout.clone(),
            acts_on: self.acts_on.clone(),
            matrix: self.matrix.scale(s),
        }
    }

    /// Local matrix re-expressed over `targets`, a superset of `acts_on`,
    /// padding with identities.
    pub fn expand_to(&self, targets: &[usize]) -> Result<CMatrix> {
        for a in &self.acts_on {
            if !targets.contains(a) {
                return Err(Error::layout("expansion targets must contain acts_on"));
            }
        }
        let sub = self.layout.subset(targets)?;
        let positions: Vec<usize> = self
            .acts_on
            .iter()
            .map(|a| targets.iter().position(|t| t == a).unwrap())
            .collect();
        let ix = LocalIndexer::new(&sub, &positions)?;
        let n = sub.total_dim();
        let mut out = CMatrix::zeros(n, n);
        let k = ix.offsets.len();
        for &base in &ix.bases {
            for i in 0..k {
                for j in 0..k {
                    let v = self.matrix[(i, j)];
                    if v != ZERO {
                        out[(base + ix.offsets[i], base + ix.offsets[j])] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Operator product `self · other` over the union of their subsystems.
    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.layout != other.layout {
            return Err(Error::layout("operator layouts differ"));
        }
        if self.acts_on == other.acts_on {
            return OperatorMatrix::new(
                self.layout.clone(),
                self.acts_on.clone(),
                self.matrix.matmul(&other.matrix),
            );
        }
        let mut union = self.acts_on.clone();
        union.extend(other.acts_on.iter().filter(|a| !self.acts_on.contains(a)));
        union.sort_unstable();
        let a = self.expand_to(&union)?;
        let b = other.expand_to(&union)?;
        OperatorMatrix::new(self.layout.clone(), union, a.matmul(&b))
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.matrix.unitarity_residual()
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.matrix.hermiticity_error()
    }

    /// Row-wise non-zero entries; dense rows are kept as they are.
    fn sparse_rows(&self) -> Vec<Vec<(usize, C64)>> {
        let n = self.matrix.rows();
        (0..n)
            .map(|r| {
                self.matrix
                    .row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != ZERO)
                    .map(|(c, &v)| (c, v))
                    .collect()
            })
            .collect()
    }
}

/// Lifts an operator to the full space of `full_layout`, padding with
/// identities on untouched factors.
pub fn embed(op: &OperatorMatrix, full_layout: &SpaceLayout) -> Result<OperatorMatrix> {
    if op.layout() != full_layout {
        return Err(Error::layout("operator is not declared on this layout"));
    }
    let all: Vec<usize> = (0..full_layout.len()).collect();
    let m = op.expand_to(&all)?;
    OperatorMatrix::new(full_layout.clone(), all, m)
}

/// Kronecker product of operators; layouts are concatenated in order.
pub fn tensor_ops(ops: &[&OperatorMatrix]) -> Result<OperatorMatrix> {
    let (first, rest) = ops
        .split_first()
        .ok_or_else(|| Error::param("ops", "empty tensor product"))?;
    let mut acc = (*first).clone();
    for op in rest {
        let shift = acc.layout.len();
        let layout = acc.layout.concat(&op.layout)?;
        let mut acts_on = acc.acts_on.clone();
        acts_on.extend(op.acts_on.iter().map(|a| a + shift));
        acc = OperatorMatrix::new(layout, acts_on, acc.matrix.kron(&op.matrix))?;
    }
    Ok(acc)
}

/// `op |ψ⟩` without forming the full-space matrix.
pub fn apply(op: &OperatorMatrix, state: &StateVector) -> Result<StateVector> {
    if op.layout() != state.layout() {
        return Err(Error::layout("operator and state layouts differ"));
    }
    let ix = LocalIndexer::new(op.layout(), op.acts_on())?;
    let rows = op.sparse_rows();
    let input = state.amplitudes();
    let mut out = StateVector::zero(state.layout().clone());
    let amps = out.amplitudes_mut();
    for &base in &ix.bases {
        for (i, row) in rows.iter().enumerate() {
            let mut acc = ZERO;
            for &(j, v) in row {
                acc += v * input[base + ix.offsets[j]];
            }
            amps[base + ix.offsets[i]] = acc;
        }
    }
    Ok(out)
}

/// `op · m` for a full-space square matrix `m`.
pub(crate) fn left_multiply(op: &OperatorMatrix, m: &CMatrix) -> Result<CMatrix> {
    let n = op.layout().total_dim();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    let ix = LocalIndexer::new(op.layout(), op.acts_on())?;
    let rows = op.sparse_rows();
    let src = m.as_slice();
    let mut out = CMatrix::zeros(n, n);
    let dst = out.as_mut_slice();
    for &base in &ix.bases {
        for (i, row) in rows.iter().enumerate() {
            let r_out = base + ix.offsets[i];
            for &(j, v) in row {
                let r_in = base + ix.offsets[j];
                let (from, to) = (&src[r_in * n..(r_in + 1) * n], r_out * n);
                for (d, &s) in dst[to..to + n].iter_mut().zip(from) {
                    *d += v * s;
                }
            }
        }
    }
    Ok(out)
}

/// `m · op` for a full-space square matrix `m`.
pub(crate) fn right_multiply(m: &CMatrix, op: &OperatorMatrix) -> Result<CMatrix> {
    let n = op.layout().total_dim();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    let ix = LocalIndexer::new(op.layout(), op.acts_on())?;
    let rows = op.sparse_rows();
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        let src = m.row(r);
        let dst = &mut out.as_mut_slice()[r * n..(r + 1) * n];
        for &base in &ix.bases {
            for (i, row) in rows.iter().enumerate() {
                let s = src[base + ix.offsets[i]];
                if s == ZERO {
                    continue;
                }
                for &(j, v) in row {
                    dst[base + ix.offsets[j]] += s * v;
                }
            }
        }
    }
    Ok(out)
}

/// `U ρ U†`.
pub fn conjugate(op: &OperatorMatrix, dm: &DensityMatrix) -> Result<DensityMatrix> {
    if op.layout() != dm.layout() {
        return Err(Error::layout("operator and density matrix layouts differ"));
    }
    let left = left_multiply(op, dm.matrix())?;
    let both = right_multiply(&left, &op.dagger())?;
    DensityMatrix::from_matrix(dm.layout().clone(), both)
}

/// `⟨ψ|op|ψ⟩`.
pub fn expectation(op: &OperatorMatrix, state: &StateVector) -> Result<C64> {
    state.inner(&apply(op, state)?)
}

/// `Tr(op ρ)`, evaluated on the reduced state of the operator's subsystems.
pub fn expectation_dm(op: &OperatorMatrix, dm: &DensityMatrix) -> Result<C64> {
    if op.layout() != dm.layout() {
        return Err(Error::layout("operator and density matrix layouts differ"));
    }
    let reduced = super::partial_trace(dm, op.acts_on())?;
    Ok(op.matrix().matmul(reduced.matrix()).trace())
}

/// `exp(scale · op)` on the operator's own subsystems.
pub fn matrix_exp(op: &OperatorMatrix, scale: C64) -> Result<OperatorMatrix> {
    let m = expm(&op.matrix().scale(scale))?;
    OperatorMatrix::new(op.layout().clone(), op.acts_on().to_vec(), m)
}
