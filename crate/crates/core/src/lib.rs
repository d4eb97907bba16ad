//! Numerical core for simulating entangled cat-state qubits in a two-ion trap.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`linalg`] dense complex matrices, Padé matrix exponential, Hermitian
//!   eigensolver.
//! * [`tensor`] composite Hilbert spaces: layouts, kets, density matrices,
//!   operators on subsystems, partial traces and fidelities.
//! * [`bosonic`] truncated Fock-space modes: coherent and cat states,
//!   displacement, parity, cross-Kerr.
//! * [`encoding`] cat-parity logical qubits, DFT states, entangled coherent
//!   state preparation, Bell targets and logical rotations.
//! * [`gates`] vibrational/electronic CNOT gates, the three-gate swap and
//!   carrier-pulse rotations.
//! * [`noise`] balanced heating master equation, quantum-jump trajectories
//!   and the bit-flip Bell mixture.
//! * [`bell`] CHSH correlations (exact, rotated-measurement, shot-sampled).
//! * [`pipeline`] the end-to-end protocol stages.
//! * [`oracles`] independent brute-force references used for validation.
//!
//! Subsystems follow one global order, `[mode_a, mode_b, ion_1, ion_2]`, and
//! the first listed factor varies slowest in flattened indices.

#![no_std]

// Float math comes from `num_traits::Float` (libm). When std is linked into the
// final binary the inherent f64 methods win, so those imports carry
// `allow(unused_imports)`.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bell;
pub mod bosonic;
pub mod encoding;
mod error;
pub mod gates;
pub mod linalg;
pub mod noise;
pub mod oracles;
pub mod pipeline;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use tensor::{DensityMatrix, Mixture, OperatorMatrix, SpaceLayout, StateVector};

/// Subsystem index of vibrational mode `a` in the full protocol layout.
pub const MODE_A: usize = 0;
/// Subsystem index of vibrational mode `b` in the full protocol layout.
pub const MODE_B: usize = 1;
/// Subsystem index of the first ion's electronic qubit.
pub const ION_1: usize = 2;
/// Subsystem index of the second ion's electronic qubit.
pub const ION_2: usize = 3;
