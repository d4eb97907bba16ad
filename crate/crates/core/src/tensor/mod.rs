//! Composite Hilbert spaces.
//!
//! A [`SpaceLayout`] is an ordered list of factor dimensions. Flattened
//! indices put the first factor slowest, so `[2, 2]` enumerates
//! `|00⟩, |01⟩, |10⟩, |11⟩`. Operators carry the subsystems they act on and a
//! local matrix; they are applied without ever materialising the full-space
//! matrix unless [`embed`] is asked for it explicitly.

mod density;
mod layout;
mod mixture;
mod operator;
mod state;

pub use density::{
    dm_fidelity, partial_trace, partial_trace_pure, uhlmann_fidelity, DensityMatrix,
};
pub use layout::{SpaceLayout, DEFAULT_MAX_DIM};
pub use mixture::Mixture;
pub use operator::{
    apply, conjugate, embed, expectation, expectation_dm, matrix_exp, tensor_ops, OperatorMatrix,
};
pub use state::{state_fidelity, tensor_states, StateVector};

pub(crate) use layout::LocalIndexer;
pub(crate) use operator::{left_multiply, right_multiply};

/// Norm tolerance used by fidelity contracts.
pub const NORMALIZATION_TOL: f64 = 1e-8;
