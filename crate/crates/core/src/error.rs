use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The support cubic has fewer than three real roots.
    #[error("support cubic has fewer than three real roots (discriminant {discriminant:e})")]
    NoRealSupport { discriminant: f64 },

    #[error("no cube-root branch gives a real value at x = {x}; candidates {candidates:?}")]
    BranchFailure { x: f64, candidates: Vec<Complex64> },

    #[error("quadrature did not converge: estimate {estimate}, error {error:e}")]
    QuadratureFailure { estimate: f64, error: f64 },

    #[error("continuation failed at z = {z}: last iterate {last}")]
    ContinuationFailure { z: Complex64, last: Complex64 },

    #[error("more than one resolvent root is admissible at z = {z}: {roots:?}")]
    BranchAmbiguity { z: Complex64, roots: Vec<Complex64> },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("fit '{name}' rejected: r^2 = {r_squared}")]
    FitRejected { name: String, r_squared: f64 },

    #[error("eigensolver failed on sample {sample}: {reason}")]
    EigensolverFailure { sample: usize, reason: String },
}
