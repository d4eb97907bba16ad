use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes shared by every module of the core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("subsystem index {index} out of range for a layout with {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("total dimension {requested} exceeds the dense-dimension limit {limit}")]
    DimensionLimit { requested: usize, limit: usize },

    #[error(
        "cutoff {cutoff} too small for amplitude {amplitude}: truncated mass {tail:e} \
         is not below {leak_tol:e}; required cutoff {required}"
    )]
    Capacity {
        cutoff: usize,
        amplitude: f64,
        tail: f64,
        leak_tol: f64,
        required: usize,
    },

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("state is not normalized (norm {norm})")]
    Unnormalized { norm: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("numerical contract violated: {what} (residual {residual:e})")]
    Contract { what: String, residual: f64 },

    #[error("integrator failure: trace drift {drift:e} exceeds {limit:e}")]
    Integrator { drift: f64, limit: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn layout(msg: impl Into<String>) -> Self {
        Error::LayoutMismatch(msg.into())
    }
}
