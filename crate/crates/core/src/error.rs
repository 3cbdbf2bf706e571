use thiserror::Error;

/// Errors raised by rule construction, evaluation and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CubError {
    /// A parameter is outside its admissible range (α ≤ −1, m too small, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Inputs that are individually valid but do not fit together, e.g. a
    /// sample vector whose length differs from the node count.
    #[error("input mismatch: {0}")]
    InputMismatch(String),

    /// An iterative numerical kernel failed (eigensolver, root bracketing).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A rule could not be built with the required certificate.
    #[error("construction failed: {0}")]
    Construction(String),

    /// The integrand produced a non-finite value.
    #[error("evaluation failed: {0}")]
    Evaluation(String),
}

impl CubError {
    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            CubError::InvalidParameter(_) | CubError::InputMismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, CubError>;
