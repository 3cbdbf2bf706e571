use nalgebra::{DMatrix, DVector};

use super::near_minimal::orbit_points;
use super::{require_m, theta_grid, CubatureNode, CubatureRule2D, NodeLabel, RuleKind2D};
use crate::error::{CubError, Result};
use crate::interpolation::basis::{jacobi_coordinates, PBasis};
use crate::jacobi::{gauss_rule, jacobi_eval, JacobiParams};
use crate::oracle::{Sigma, WeightSpec};

const SOLVE_TOLERANCE: f64 = 1e-9;

/// `q(t) = P_m^{(α,β+1)}(1) P_m^{(α+1,β)}(t) + P_m^{(α,β+1)}(t) P_m^{(α+1,β)}(1)`.
fn q_poly(m: usize, p: JacobiParams, t: f64) -> f64 {
    let pa = p.shifted(0.0, 1.0);
    let pb = p.shifted(1.0, 0.0);
    jacobi_eval(m, pa, 1.0) * jacobi_eval(m, pb, t)
        + jacobi_eval(m, pa, t) * jacobi_eval(m, pb, 1.0)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The `2m+1` zeros, ascending, of `x · q(2x² - 1)`: the points `(ξ, ξ)` where
/// the diagonal meets the common zero set used by the minimal rule.
///
/// The `m` zeros of `q` in `(-1, 1)` are separated by the zeros of
/// `P_{m-1}^{(α+1,β+1)}`, which gives one bracket per zero.
pub fn diagonal_zeros(m: usize, p: JacobiParams) -> Result<Vec<f64>> {
    require_m(m, 1, "diagonal_zeros")?;
    let p = JacobiParams::new(p.alpha, p.beta)?;
    let mut brackets = vec![-1.0];
    if m >= 2 {
        brackets.extend(gauss_rule(m - 1, p.shifted(1.0, 1.0))?.nodes);
    }
    brackets.push(1.0);
    let mut ts = Vec::with_capacity(m);
    for w in brackets.windows(2) {
        let t = bisect(|t| q_poly(m, p, t), w[0], w[1]).ok_or_else(|| {
            CubError::Numerical(format!(
                "no sign change of the diagonal polynomial on [{}, {}] (m = {m}, α = {}, β = {})",
                w[0], w[1], p.alpha, p.beta
            ))
        })?;
        if t <= -1.0 || t >= 1.0 {
            return Err(CubError::Numerical(format!(
                "diagonal zero at the boundary t = {t} (m = {m})"
            )));
        }
        ts.push(t);
    }
    let mut xi: Vec<f64> = ts.iter().map(|t| (0.5 * (1.0 + t)).sqrt()).collect();
    xi.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = xi.iter().rev().map(|x| -x).collect();
    out.push(0.0);
    out.extend(xi);
    if out.windows(2).any(|w| w[1] - w[0] < 1e-12) {
        return Err(CubError::Numerical(format!(
            "diagonal zeros are not simple (m = {m})"
        )));
    }
    Ok(out)
}

/// The minimal rule of degree `4m+1` with `2(m+1)² - 1` nodes, `σ = -1/2` only.
///
/// Nodes are the orbits of `(s_{j,k}, t_{j,k})` for `1 ≤ j ≤ k ≤ m` together
/// with the diagonal zeros. One weight per symmetry orbit is found by least
/// squares on the moment equations of the invariant part of the orthonormal
/// basis, `P_{k,n}(2xy, x²+y²-1)` for `n ≤ 2m`, whose exact moments are
/// `δ_{(k,n),(0,0)}`. Construction fails if the system is rank deficient or the
/// residual exceeds `1e-9`.
pub fn minimal_rule(spec: WeightSpec, m: usize) -> Result<CubatureRule2D> {
    let spec = WeightSpec::new(spec.alpha, spec.beta, spec.sigma)?;
    if spec.sigma != Sigma::MinusHalf {
        return Err(CubError::InvalidParameter(
            "the minimal rule is only available for σ = -1/2".into(),
        ));
    }
    require_m(m, 1, "the minimal rule")?;
    let p = spec.params();
    let grid = theta_grid(m, p)?;

    // orbits: (label, points)
    let mut orbits: Vec<Vec<(f64, f64, NodeLabel)>> = Vec::new();
    for k in 1..=m {
        for j in 1..=k {
            orbits.push(
                orbit_points(&grid.thetas, j, k)
                    .into_iter()
                    .map(|(x, y, _, i)| (x, y, NodeLabel::Orbit { j, k, i }))
                    .collect(),
            );
        }
    }
    let diag = diagonal_zeros(m, p)?;
    let mid = m;
    orbits.push(vec![(0.0, 0.0, NodeLabel::Diagonal { index: mid })]);
    for q in 1..=m {
        let (lo, hi) = (mid - q, mid + q);
        orbits.push(vec![
            (diag[hi], diag[hi], NodeLabel::Diagonal { index: hi }),
            (diag[lo], diag[lo], NodeLabel::Diagonal { index: lo }),
        ]);
    }

    let basis = PBasis::new(p, Sigma::MinusHalf, 2 * m);
    let nrows = basis.len();
    let ncols = orbits.len();
    let mut a = DMatrix::<f64>::zeros(nrows, ncols);
    let mut vals = vec![0.0; nrows];
    for (c, orbit) in orbits.iter().enumerate() {
        for &(x, y, _) in orbit {
            let (bx, by) = jacobi_coordinates(x, y);
            basis.eval_xy_into(bx, by, &mut vals);
            for r in 0..nrows {
                a[(r, c)] += vals[r];
            }
        }
    }
    let mut rhs = DVector::<f64>::zeros(nrows);
    rhs[0] = 1.0;

    let scales: Vec<f64> = (0..ncols).map(|c| a.column(c).norm()).collect();
    let mut scaled = a.clone();
    for (c, s) in scales.iter().enumerate() {
        scaled.column_mut(c).unscale_mut(*s);
    }
    let sv = scaled.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if smin.is_nan() || smin <= 1e-12 * smax {
        return Err(CubError::Construction(format!(
            "moment system is rank deficient: {nrows}×{ncols}, σ_min/σ_max = {:.3e} (m = {m})",
            smin / smax
        )));
    }
    let qr = scaled.qr();
    let z = qr
        .r()
        .solve_upper_triangular(&(qr.q().transpose() * &rhs))
        .ok_or_else(|| CubError::Numerical("least-squares solve failed".into()))?;
    let weights: Vec<f64> = z.iter().zip(&scales).map(|(z, s)| z / s).collect();
    let resid = &a * DVector::from_column_slice(&weights) - &rhs;
    let residual = resid.amax();
    if residual.is_nan() || residual > SOLVE_TOLERANCE {
        return Err(CubError::Construction(format!(
            "moment residual {residual:.3e} exceeds {SOLVE_TOLERANCE:e} (m = {m}, σ_min/σ_max = {:.3e})",
            smin / smax
        )));
    }

    let nodes = orbits
        .iter()
        .zip(&weights)
        .flat_map(|(orbit, &w)| {
            orbit.iter().map(move |&(x, y, label)| CubatureNode {
                x,
                y,
                weight: w,
                label,
            })
        })
        .collect();
    Ok(CubatureRule2D {
        spec,
        m,
        kind: RuleKind2D::Minimal,
        nodes,
        degree: 4 * m + 1,
        solve_residual: Some(residual),
    })
}
