use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The operation is undefined for this input (e.g. a constant function).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation's precondition regime does not cover this input.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// A configured budget (enumeration leaves, input size) was exceeded.
    /// Carries the probability mass accounted for before giving up.
    #[error("resource limit exceeded: {reason} (partial mass {partial_mass})")]
    Resource { reason: String, partial_mass: f64 },

    /// Numerical failure inside a solver, with diagnostics.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A caller-supplied table or config was incomplete or inconsistent.
    #[error("specification error: {0}")]
    Specification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
