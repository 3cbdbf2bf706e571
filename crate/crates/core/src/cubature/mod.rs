//! Near-minimal and minimal cubature rules of degree `4m+1` for `𝒲_{α,β,±1/2}`.

mod minimal;
mod near_minimal;
mod verify;

pub use minimal::{diagonal_zeros, minimal_rule};
pub use near_minimal::near_minimal_rule;
pub use verify::{
    verify_rule, verify_rule_on, verify_rule_with_moments, MonomialResidual, VerificationReport,
    EXACTNESS_TOLERANCE,
};

use crate::error::{CubError, Result};
use crate::jacobi::{gauss_radau_rule, gauss_rule, JacobiParams};
use crate::oracle::WeightSpec;

/// Lower bound on the node count of a degree-`n` rule for a centrally
/// symmetric weight, `n(n+1)/2 + ⌊n/2⌋`.
pub fn n_min(n: usize) -> usize {
    n * (n + 1) / 2 + n / 2
}

/// `θ_0 = 0` followed by the angles of the zeros of `P_m^{(α+1,β)}`, ascending,
/// with the Gauss-Radau weights `μ` aligned to them (`μ_0` belongs to the fixed
/// node `cos θ_0 = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGrid {
    pub m: usize,
    /// The `(α, β)` of the weight; the zeros are those of `P_m^{(α+1,β)}`.
    pub params: JacobiParams,
    pub thetas: Vec<f64>,
    pub mu: Vec<f64>,
}

impl ThetaGrid {
    pub fn cos(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.thetas[k].cos()
        }
    }
}

pub fn theta_grid(m: usize, p: JacobiParams) -> Result<ThetaGrid> {
    let radau = gauss_radau_rule(m, p)?;
    // nodes ascend in t, so angles ascend in reverse
    let mut thetas = vec![0.0];
    let mut mu = vec![radau.weights[m]];
    for k in (0..m).rev() {
        thetas.push(radau.nodes[k].acos());
        mu.push(radau.weights[k]);
    }
    Ok(ThetaGrid {
        m,
        params: p,
        thetas,
        mu,
    })
}

/// `0` followed by the angles of the zeros of `P_m^{p}`, ascending.
pub fn zero_angles(m: usize, p: JacobiParams) -> Result<Vec<f64>> {
    let mut out = vec![0.0];
    if m > 0 {
        let g = gauss_rule(m, p)?;
        out.extend(g.nodes.iter().rev().map(|x| x.acos()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind2D {
    NearMinimal,
    Minimal,
}

impl RuleKind2D {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleKind2D::NearMinimal => "near-minimal",
            RuleKind2D::Minimal => "minimal",
        }
    }
}

/// Where a node comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    /// Orbit point `i` of `(s_{j,k}, t_{j,k})`: 1 → `(s,t)`, 2 → `(t,s)`,
    /// 3 → `(-s,-t)`, 4 → `(-t,-s)`.
    Orbit { j: usize, k: usize, i: u8 },
    /// `(ξ, ξ)` for the `index`-th diagonal zero (ascending) of a minimal rule.
    Diagonal { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubatureNode {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
    pub label: NodeLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubatureRule2D {
    pub spec: WeightSpec,
    pub m: usize,
    pub kind: RuleKind2D,
    pub nodes: Vec<CubatureNode>,
    /// Claimed polynomial degree of exactness.
    pub degree: usize,
    /// Max residual of the moment solve, for rules whose weights are solved for.
    pub solve_residual: Option<f64>,
}

impl CubatureRule2D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(n.x, n.y)).sum()
    }

    /// Short identifier such as `near-minimal(α=0.5,β=-0.5,σ=-0.5,m=3)`.
    pub fn id(&self) -> String {
        format!(
            "{}(α={},β={},σ={},m={})",
            self.kind.as_str(),
            self.spec.alpha,
            self.spec.beta,
            self.spec.sigma.value(),
            self.m
        )
    }

    /// Image under `(x, y) → (x, -y)`, which maps `𝒲_{α,β,σ}` onto `𝒲_{β,α,σ}`:
    /// the result is a rule of the same degree for the swapped exponents, with
    /// its diagonal nodes on `x = -y`.
    pub fn reflected(&self) -> CubatureRule2D {
        let spec = WeightSpec {
            alpha: self.spec.beta,
            beta: self.spec.alpha,
            sigma: self.spec.sigma,
        };
        CubatureRule2D {
            spec,
            nodes: self
                .nodes
                .iter()
                .map(|n| CubatureNode { y: -n.y, ..*n })
                .collect(),
            ..self.clone()
        }
    }
}

pub(crate) fn require_m(m: usize, min: usize, what: &str) -> Result<()> {
    if m < min {
        return Err(CubError::InvalidParameter(format!(
            "{what} needs m ≥ {min} (got {m})"
        )));
    }
    Ok(())
}
