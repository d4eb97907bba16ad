//! Independent reference computations.
//!
//! Nothing in here calls the [`crate::tensor`] matrix exponential or the
//! [`crate::bosonic`] constructors: the references are built from direct
//! series sums, closed-form coherent-state algebra, their own dense helpers
//! and plain enumeration, so they can check the main code paths.

mod chsh;
mod coherent;
mod expansion;
mod liouvillian;
mod poisson;

use alloc::string::String;

pub use chsh::{chsh_grid_search, GridSearchResult};
pub use coherent::{
    coherent_overlap, coherent_series, pauli_rotation, series_overlap, CoherentMoments,
};
pub use expansion::{double_swap_bell_fidelity, swap_transfer_fidelity, CoherentExpansion, Term};
pub use liouvillian::{liouvillian_expm, LIOUVILLIAN_MAX_CUTOFF};
pub use poisson::{poisson_exactly_one, poisson_odd_probability, poisson_pmf};

/// One oracle-versus-main-path comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub quantity: String,
    pub oracle_value: f64,
    pub main_value: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    /// Pass means `|main - oracle| <= tolerance`.
    pub fn compare(
        quantity: impl Into<String>,
        oracle_value: f64,
        main_value: f64,
        tolerance: f64,
    ) -> Self {
        let abs_error = (main_value - oracle_value).abs();
        let rel_error = if oracle_value != 0.0 {
            abs_error / oracle_value.abs()
        } else {
            abs_error
        };
        OracleReport {
            quantity: quantity.into(),
            oracle_value,
            main_value,
            abs_error,
            rel_error,
            tolerance,
            pass: abs_error <= tolerance,
        }
    }
}
