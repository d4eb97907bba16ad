//! Dense complex linear algebra.
//!
//! Everything here is plain row-major storage; sizes in this crate stay in
//! the low hundreds for operators, so no blocking or BLAS is involved.

mod eigh;
mod expm;
mod matrix;

pub use eigh::{eigh, hermitian_sqrt, EigenDecomposition};
pub use expm::expm;
pub use matrix::CMatrix;

pub type C64 = num_complex::Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);
