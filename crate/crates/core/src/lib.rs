//! Minimal and near-minimal cubature rules of degree `4m+1` on the square
//! `[-1,1]²` for the weights
//!
//! ```text
//! W_{α,β,σ}(x,y) = |x-y|^{2α+1} |x+y|^{2β+1} ((1-x²)(1-y²))^σ,   σ = ±1/2,
//! ```
//!
//! together with the Lagrange interpolation operator on the near-minimal nodes
//! and a brute-force integration oracle used to verify every construction.

pub mod cubature;
pub mod error;
pub mod geometry;
pub mod interpolation;
pub mod jacobi;
pub mod oracle;

pub use error::{CubError, Result};
pub use jacobi::{JacobiParams, QuadratureRule1D, RuleKind1D};
pub use oracle::{Sigma, WeightSpec};
