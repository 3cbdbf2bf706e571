//! The region that contains the off-diagonal cubature nodes.
//!
//! For angles `0 < θ_1 < … < θ_m < π` the curves
//!
//! ```text
//! S1± = ±(cos θ, cos(θ - θ_1)),  θ_1 ≤ θ ≤ π
//! S2± = ±(cos θ, cos(θ - θ_m)),  0 ≤ θ ≤ θ_m
//! ```
//!
//! cut four lens-shaped holes around the diagonals out of the square. With
//! `x = cos a`, `y = cos b` (`a, b ∈ [0, π]`) a point lies in the allowed region
//! iff `|a - b| ≥ θ_1` and `a + b ≤ θ_m` or `a + b ≥ 2π - θ_m`; membership is
//! tested in these angle coordinates rather than against the sampled curves.

use std::f64::consts::PI;

use crate::cubature::{zero_angles, CubatureRule2D};
use crate::error::{CubError, Result};
use crate::jacobi::JacobiParams;

const ANGLE_TOLERANCE: f64 = 1e-12;
const DIAGONAL_TOLERANCE: f64 = 1e-12;

/// Which family of angles defines the curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionCase {
    /// Zeros of `P_m^{(α+1,β)}`: the near-minimal rules of degree `4m+1`.
    NearMinimal,
    /// Zeros of `P_m^{(α,β)}`: the minimal rules of degree `4m`.
    EvenDegreeMinimal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionCurves {
    pub m: usize,
    pub params: JacobiParams,
    pub case: RegionCase,
    pub theta_1: f64,
    pub theta_m: f64,
    pub s1_plus: Vec<(f64, f64)>,
    pub s1_minus: Vec<(f64, f64)>,
    pub s2_plus: Vec<(f64, f64)>,
    pub s2_minus: Vec<(f64, f64)>,
}

impl RegionCurves {
    /// Whether `(x, y)` lies in the closed allowed region.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let a = x.clamp(-1.0, 1.0).acos();
        let b = y.clamp(-1.0, 1.0).acos();
        let gap = (a - b).abs() >= self.theta_1 - ANGLE_TOLERANCE;
        let sum = a + b;
        let corner = sum <= self.theta_m + ANGLE_TOLERANCE
            || sum >= 2.0 * PI - self.theta_m - ANGLE_TOLERANCE;
        gap && corner
    }
}

/// Samples the four curves at `samples` equally spaced parameter values each,
/// endpoints included.
pub fn region_curves(
    m: usize,
    p: JacobiParams,
    samples: usize,
    case: RegionCase,
) -> Result<RegionCurves> {
    if m < 1 {
        return Err(CubError::InvalidParameter(format!(
            "region curves need m ≥ 1 (got {m})"
        )));
    }
    if samples < 2 {
        return Err(CubError::InvalidParameter(format!(
            "need at least 2 samples per curve (got {samples})"
        )));
    }
    let p = JacobiParams::new(p.alpha, p.beta)?;
    let zeros_of = match case {
        RegionCase::NearMinimal => p.shifted(1.0, 0.0),
        RegionCase::EvenDegreeMinimal => p,
    };
    let thetas = zero_angles(m, zeros_of)?;
    let (t1, tm) = (thetas[1], thetas[m]);
    let sample = |lo: f64, hi: f64, shift: f64| -> Vec<(f64, f64)> {
        (0..samples)
            .map(|i| {
                let th = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
                (th.cos(), (th - shift).cos())
            })
            .collect()
    };
    let neg = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| (-x, -y)).collect::<Vec<_>>();
    let s1_plus = sample(t1, PI, t1);
    let s2_plus = sample(0.0, tm, tm);
    Ok(RegionCurves {
        m,
        params: p,
        case,
        theta_1: t1,
        theta_m: tm,
        s1_minus: neg(&s1_plus),
        s2_minus: neg(&s2_plus),
        s1_plus,
        s2_plus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeRegionStatus {
    Inside,
    Outside,
    /// On the diagonal `x = y`, which the containment statement exempts.
    DiagonalExempt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeRegionReport {
    /// `true` iff no node is [`NodeRegionStatus::Outside`].
    pub all_inside: bool,
    /// One entry per node of the rule, in node order.
    pub status: Vec<NodeRegionStatus>,
}

/// Checks every off-diagonal node of `rule` against the region of `curves`.
pub fn check_node_region(rule: &CubatureRule2D, curves: &RegionCurves) -> Result<NodeRegionReport> {
    let p = rule.spec.params();
    if rule.m != curves.m || p != curves.params {
        return Err(CubError::InputMismatch(format!(
            "rule (α={}, β={}, m={}) does not match curves (α={}, β={}, m={})",
            p.alpha, p.beta, rule.m, curves.params.alpha, curves.params.beta, curves.m
        )));
    }
    let status: Vec<NodeRegionStatus> = rule
        .nodes
        .iter()
        .map(|n| {
            if (n.x - n.y).abs() <= DIAGONAL_TOLERANCE {
                NodeRegionStatus::DiagonalExempt
            } else if curves.contains(n.x, n.y) {
                NodeRegionStatus::Inside
            } else {
                NodeRegionStatus::Outside
            }
        })
        .collect();
    Ok(NodeRegionReport {
        all_inside: status.iter().all(|s| *s != NodeRegionStatus::Outside),
        status,
    })
}
