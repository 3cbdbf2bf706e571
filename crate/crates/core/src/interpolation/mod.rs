//! Orthonormal bases on the square, reproducing kernels and the Lagrange
//! interpolation operator on the near-minimal nodes.

pub mod basis;
mod kernel;
mod operator;

pub use basis::{a_constant, basis_p, basis_q, BasisLabel, Family, PBasis, SquareBasis};
pub use kernel::{kernel_k, p_kernel};
pub use operator::{Interpolant, InterpolationOperator, LEBESGUE_MIN_GRID};

use crate::error::{CubError, Result};
use crate::jacobi::{gauss_radau_rule, JacobiParams, OrthonormalJacobi};

fn check_index(l: usize, m: usize) -> Result<()> {
    if l > m {
        return Err(CubError::InvalidParameter(format!(
            "need 0 ≤ ℓ ≤ m (got ℓ = {l}, m = {m})"
        )));
    }
    Ok(())
}

/// `ĥ_ℓ = Σ_k μ_k (1 + x_k) [p_ℓ^{(α,β+1)}(x_k)]²` over the Gauss-Radau rule with
/// `m` interior nodes, in closed form:
/// `2(β+1)/(α+β+2)` for `ℓ < m` and
/// `2(β+1)(2m+α+β+2) / ((α+β+2)(m+β+1))` for `ℓ = m`.
pub fn hat_h(l: usize, m: usize, p: JacobiParams) -> Result<f64> {
    check_index(l, m)?;
    let (a, b) = (p.alpha, p.beta);
    let base = 2.0 * (b + 1.0) / (a + b + 2.0);
    if l < m {
        return Ok(base);
    }
    let mf = m as f64;
    Ok(base * (2.0 * mf + a + b + 2.0) / (mf + b + 1.0))
}

/// The same quantity computed directly as a sum over the Gauss-Radau nodes.
pub fn hat_h_radau_sum(l: usize, m: usize, p: JacobiParams) -> Result<f64> {
    check_index(l, m)?;
    let rule = gauss_radau_rule(m, p)?;
    let on = OrthonormalJacobi::new(p.shifted(0.0, 1.0), m);
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| {
            let v = on.eval(l, x);
            w * (1.0 + x) * v * v
        })
        .sum())
}

/// `h_m^{(α,β)} / h_m^{(α,β+1)}`, an expression sometimes quoted for `ĥ_m`. It
/// differs from the Radau sum by the factor `2(2m+α+β+1)/(m+α+β+1)`.
pub fn hat_h_printed(m: usize, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let mf = m as f64;
    (b + 1.0) * (a + b + mf + 1.0) * (a + b + 2.0 * mf + 2.0)
        / ((a + b + 2.0) * (b + mf + 1.0) * (a + b + 2.0 * mf + 1.0))
}
