use super::basis::{jacobi_coordinates, PBasis, SquareBasis};
use crate::jacobi::JacobiParams;
use crate::oracle::{Sigma, WeightSpec};

/// Reproducing kernel of `Π²_n` for `𝒲_{α,β,σ}`, by direct summation over the
/// orthonormal basis.
pub fn kernel_k(spec: &WeightSpec, n: usize, x: (f64, f64), y: (f64, f64)) -> f64 {
    let basis = SquareBasis::new(*spec, n);
    let bx = basis.eval(x.0, x.1);
    let by = basis.eval(y.0, y.1);
    bx.iter().zip(&by).map(|(a, b)| a * b).sum()
}

/// `Σ_{j ≤ n} Σ_k P_{k,j}(x) P_{k,j}(y)`: the reproducing kernel of the
/// polynomials of degree `≤ n` in `(2xy, x²+y²-1)` for `σ = -1/2`.
pub fn p_kernel(p: JacobiParams, n: usize, x: (f64, f64), y: (f64, f64)) -> f64 {
    let basis = PBasis::new(p, Sigma::MinusHalf, n);
    let mut vx = vec![0.0; basis.len()];
    let mut vy = vec![0.0; basis.len()];
    let (ax, ay) = jacobi_coordinates(x.0, x.1);
    let (bx, by) = jacobi_coordinates(y.0, y.1);
    basis.eval_xy_into(ax, ay, &mut vx);
    basis.eval_xy_into(bx, by, &mut vy);
    vx.iter().zip(&vy).map(|(a, b)| a * b).sum()
}
