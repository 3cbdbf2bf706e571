use super::{require_m, theta_grid, CubatureNode, CubatureRule2D, NodeLabel, RuleKind2D};
use crate::error::Result;
use crate::oracle::{Sigma, WeightSpec};

/// Orbit points of `(s_{j,k}, t_{j,k})` with
/// `s = cos((θ_j-θ_k)/2)`, `t = cos((θ_j+θ_k)/2)`, coincident points merged.
/// Each entry is `(x, y, multiplicity, i)`.
pub(super) fn orbit_points(thetas: &[f64], j: usize, k: usize) -> Vec<(f64, f64, f64, u8)> {
    let (tj, tk) = (thetas[j], thetas[k]);
    if j == 0 {
        // s = t: orbits 1/2 and 3/4 coincide
        let c = (0.5 * tk).cos();
        return vec![(c, c, 2.0, 1), (-c, -c, 2.0, 3)];
    }
    let (s, t) = if j == k {
        (1.0, tk.cos())
    } else {
        ((0.5 * (tj - tk)).cos(), (0.5 * (tj + tk)).cos())
    };
    vec![
        (s, t, 1.0, 1),
        (t, s, 1.0, 2),
        (-s, -t, 1.0, 3),
        (-t, -s, 1.0, 4),
    ]
}

/// The near-minimal rule of degree `4m+1`.
///
/// For `σ = -1/2` there are `2(m+1)²` nodes, one more than the lower bound
/// [`n_min`](super::n_min)`(2m+1)`; each orbit point of `(j, k)` carries
/// `μ_j μ_k / 2`, halved again when `j = k`.
///
/// For `σ = +1/2` the orbit weights become `μ_j μ_k (cos θ_j - cos θ_k)² / 2`,
/// so `j = k` drops out; the remaining `2m²` nodes are renormalized to total
/// mass one and the rule is exact to degree `4m-3`. This case needs `m ≥ 1`.
pub fn near_minimal_rule(spec: WeightSpec, m: usize) -> Result<CubatureRule2D> {
    let spec = WeightSpec::new(spec.alpha, spec.beta, spec.sigma)?;
    if spec.sigma == Sigma::PlusHalf {
        require_m(m, 1, "the σ = +1/2 near-minimal rule")?;
    }
    let grid = theta_grid(m, spec.params())?;
    let mut nodes = Vec::with_capacity(2 * (m + 1) * (m + 1));
    for k in 0..=m {
        for j in 0..=k {
            let base = 0.5 * grid.mu[j] * grid.mu[k];
            let w = match spec.sigma {
                Sigma::MinusHalf => {
                    if j == k {
                        0.5 * base
                    } else {
                        base
                    }
                }
                Sigma::PlusHalf => {
                    if j == k {
                        continue;
                    }
                    let d = grid.cos(j) - grid.cos(k);
                    base * d * d
                }
            };
            for (x, y, mult, i) in orbit_points(&grid.thetas, j, k) {
                nodes.push(CubatureNode {
                    x,
                    y,
                    weight: w * mult,
                    label: NodeLabel::Orbit { j, k, i },
                });
            }
        }
    }
    let degree = match spec.sigma {
        Sigma::MinusHalf => 4 * m + 1,
        Sigma::PlusHalf => {
            let total: f64 = nodes.iter().map(|n| n.weight).sum();
            nodes.iter_mut().for_each(|n| n.weight /= total);
            4 * m - 3
        }
    };
    Ok(CubatureRule2D {
        spec,
        m,
        kind: RuleKind2D::NearMinimal,
        nodes,
        degree,
        solve_residual: None,
    })
}
