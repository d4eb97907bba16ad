#![allow(dead_code)]

use catbell_core::{CMatrix, SpaceLayout, StateVector, C64};
use proptest::prelude::*;

/// `n` complex numbers with parts in `[-1, 1]`.
pub fn complex_vec(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

/// Random square matrix of side `n`.
pub fn complex_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    complex_vec(n * n).prop_map(move |v| CMatrix::from_vec(n, n, v).unwrap())
}

/// `(M + M†)/2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    let mut h = m.clone();
    h.add_scaled(&m.dagger(), C64::new(1.0, 0.0));
    h.scale_real(0.5)
}

/// Normalized ket on `layout` built from `amps`, or `None` if `amps` is
/// numerically zero.
pub fn ket(layout: &SpaceLayout, amps: Vec<C64>) -> Option<StateVector> {
    let s = StateVector::new(layout.clone(), amps).ok()?;
    if s.norm() < 1e-3 {
        return None;
    }
    s.normalized().ok()
}
