use nalgebra::DMatrix;

use super::basis::{a_constant, jacobi_coordinates, PBasis, SquareBasis};
use super::kernel::p_kernel;
use super::{hat_h, kernel_k};
use crate::cubature::{near_minimal_rule, CubatureRule2D};
use crate::error::{CubError, Result};
use crate::oracle::{pairwise_sum, Sigma, WeightSpec};

/// Smallest grid accepted by [`InterpolationOperator::lebesgue_constant`].
pub const LEBESGUE_MIN_GRID: usize = 64;

/// Lagrange interpolation on the `2(m+1)²` near-minimal nodes of `𝒲_{α,β,-1/2}`.
///
/// The interpolation space is `Π²_{2m} ⊕ span{₁Q_{k,2m+1} : 0 ≤ k ≤ m}` and the
/// fundamental polynomial of node `i` is `λ_i K*(·, x_i)`, with
///
/// ```text
/// K*(x, y) = K_{2m}(x, y) + Σ_{k=0}^{m} b_k ₁Q_{k,2m+1}(x) ₁Q_{k,2m+1}(y),
/// b_k = 1 / ([a^{(0,1)}]² ĥ_k ĥ_m).
/// ```
///
/// Everything is evaluated through the feature map
/// `φ(x) = (Q(x) for Q in the basis of Π²_{2m}, √b_k ₁Q_{k,2m+1}(x))`, so that
/// `K*(x, y) = φ(x)·φ(y)`.
#[derive(Debug, Clone)]
pub struct InterpolationOperator {
    spec: WeightSpec,
    m: usize,
    rule: CubatureRule2D,
    hat_h: Vec<f64>,
    b: Vec<f64>,
    a01: f64,
    basis: SquareBasis,
    q1: PBasis,
    /// Row `i` is `λ_i φ(x_i)`.
    node_features: DMatrix<f64>,
}

impl InterpolationOperator {
    pub fn new(spec: WeightSpec, m: usize) -> Result<Self> {
        if spec.sigma != Sigma::MinusHalf {
            return Err(CubError::InvalidParameter(
                "interpolation is only available for σ = -1/2".into(),
            ));
        }
        let rule = near_minimal_rule(spec, m)?;
        let p = spec.params();
        let hat_h = (0..=m)
            .map(|l| hat_h(l, m, p))
            .collect::<Result<Vec<_>>>()?;
        let a01 = a_constant(&spec, 0, 1);
        let b: Vec<f64> = hat_h
            .iter()
            .map(|h| 1.0 / (a01 * a01 * h * hat_h[m]))
            .collect();
        let mut op = Self {
            spec,
            m,
            basis: SquareBasis::new(spec, 2 * m),
            q1: PBasis::new(p.shifted(0.0, 1.0), Sigma::MinusHalf, m),
            rule,
            hat_h,
            b,
            a01,
            node_features: DMatrix::zeros(0, 0),
        };
        let n = op.rule.len();
        let d = op.feature_len();
        let mut feats = DMatrix::zeros(n, d);
        let mut buf = vec![0.0; d];
        for (i, node) in op.rule.nodes.iter().enumerate() {
            op.features_into(node.x, node.y, &mut buf);
            for (c, v) in buf.iter().enumerate() {
                feats[(i, c)] = node.weight * v;
            }
        }
        op.node_features = feats;
        Ok(op)
    }

    pub fn spec(&self) -> WeightSpec {
        self.spec
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The near-minimal rule whose nodes are interpolated.
    pub fn rule(&self) -> &CubatureRule2D {
        &self.rule
    }

    pub fn hat_h(&self) -> &[f64] {
        &self.hat_h
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a01(&self) -> f64 {
        self.a01
    }

    /// Number of nodes, equal to the dimension of the interpolation space.
    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    /// Length of the feature vector, `dim Π²_{2m} + m + 1`.
    pub fn feature_len(&self) -> usize {
        self.basis.len() + self.m + 1
    }

    /// `₁Q_{k,2m+1}(x, y)` for `k = 0..=m`.
    pub fn q1_into(&self, x: f64, y: f64, out: &mut [f64]) {
        let m = self.m;
        let mut v = vec![0.0; self.q1.len()];
        let (bx, by) = jacobi_coordinates(x, y);
        self.q1.eval_xy_into(bx, by, &mut v);
        let f = self.a01 * (x + y);
        for k in 0..=m {
            out[k] = f * v[PBasis::index(k, m)];
        }
    }

    /// The feature vector `φ(x, y)`.
    pub fn features_into(&self, x: f64, y: f64, out: &mut [f64]) {
        let nb = self.basis.len();
        self.basis.eval_into(x, y, &mut out[..nb]);
        self.q1_into(x, y, &mut out[nb..]);
        for (v, b) in out[nb..].iter_mut().zip(&self.b) {
            *v *= b.sqrt();
        }
    }

    /// `K*(x, y)` by summation over the basis.
    pub fn kernel_k_star(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        let d = self.feature_len();
        let mut fx = vec![0.0; d];
        let mut fy = vec![0.0; d];
        self.features_into(x.0, x.1, &mut fx);
        self.features_into(y.0, y.1, &mut fy);
        fx.iter().zip(&fy).map(|(a, b)| a * b).sum()
    }

    /// `K*(x, y)` in split form,
    /// `K_{2m} + (x₁+x₂)(y₁+y₂)/(ĥ ĥ_m) [K'_m - K'_{m-1} + (ĥ/ĥ_m - 1) P'_{m,m}(x) P'_{m,m}(y)]`
    /// with `ĥ = ĥ_0` the common value below `m` and primes for the kernels and
    /// basis of the parameters `(α, β+1)`.
    pub fn kernel_k_star_split(&self, x: (f64, f64), y: (f64, f64)) -> f64 {
        let m = self.m;
        let p1 = self.spec.params().shifted(0.0, 1.0);
        let hm = self.hat_h[m];
        let hc = 2.0 * (self.spec.beta + 1.0) / (self.spec.alpha + self.spec.beta + 2.0);
        let diff = p_kernel(p1, m, x, y)
            - if m == 0 {
                0.0
            } else {
                p_kernel(p1, m - 1, x, y)
            };
        let pmm = |pt: (f64, f64)| {
            let (bx, by) = jacobi_coordinates(pt.0, pt.1);
            let mut v = vec![0.0; self.q1.len()];
            self.q1.eval_xy_into(bx, by, &mut v);
            v[PBasis::index(m, m)]
        };
        let correction = (hc / hm - 1.0) * pmm(x) * pmm(y);
        kernel_k(&self.spec, 2 * m, x, y)
            + (x.0 + x.1) * (y.0 + y.1) / (hc * hm) * (diff + correction)
    }

    /// `ℓ_i(x, y)` for every node `i`.
    pub fn fundamental_into(&self, x: f64, y: f64, out: &mut [f64]) {
        let mut f = vec![0.0; self.feature_len()];
        self.features_into(x, y, &mut f);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self
                .node_features
                .row(i)
                .iter()
                .zip(&f)
                .map(|(a, b)| a * b)
                .sum();
        }
    }

    fn check_samples(&self, samples: &[f64]) -> Result<()> {
        if samples.len() != self.len() {
            return Err(CubError::InputMismatch(format!(
                "expected {} samples (one per node), got {}",
                self.len(),
                samples.len()
            )));
        }
        Ok(())
    }

    /// `ℒf(x, y) = Σ_i f(x_i) ℓ_i(x, y)`.
    pub fn lagrange_interpolate(&self, samples: &[f64], x: f64, y: f64) -> Result<f64> {
        self.check_samples(samples)?;
        let mut l = vec![0.0; self.len()];
        self.fundamental_into(x, y, &mut l);
        Ok(l.iter().zip(samples).map(|(a, b)| a * b).sum())
    }

    /// Precomputes `ℒf` for repeated evaluation.
    pub fn interpolant(&self, samples: &[f64]) -> Result<Interpolant<'_>> {
        self.check_samples(samples)?;
        let s = nalgebra::DVector::from_column_slice(samples);
        let coeffs = self.node_features.tr_mul(&s);
        Ok(Interpolant {
            op: self,
            coeffs: coeffs.iter().copied().collect(),
        })
    }

    /// `∫ ℒf 𝒲*`, which equals the near-minimal cubature sum `Σ_i λ_i f(x_i)`
    /// because `ℒf` has degree `2m+1 ≤ 4m+1` and interpolates `f` at the nodes.
    pub fn integrate_via_interpolation(&self, samples: &[f64]) -> Result<f64> {
        self.check_samples(samples)?;
        Ok(self
            .rule
            .nodes
            .iter()
            .zip(samples)
            .map(|(n, s)| n.weight * s)
            .sum())
    }

    /// Samples `f` at the nodes, in node order.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.rule.nodes.iter().map(|n| f(n.x, n.y)).collect()
    }

    /// Lower bound for the Lebesgue constant `max Σ_i |ℓ_i|` over a `g × g`
    /// tensor grid of Chebyshev-Lobatto points.
    ///
    /// The Lebesgue function is invariant under `(x,y) → (y,x)` and
    /// `(x,y) → (-x,-y)`, so only grid points with `i ≤ j` and `i + j ≤ g - 1`
    /// are visited.
    pub fn lebesgue_constant(&self, g: usize) -> Result<f64> {
        if g < LEBESGUE_MIN_GRID {
            return Err(CubError::InvalidParameter(format!(
                "Lebesgue grid must be at least {LEBESGUE_MIN_GRID} (got {g})"
            )));
        }
        let pts = chebyshev_lobatto(g);
        let mut visit = Vec::new();
        for i in 0..g {
            for j in i..g {
                if i + j < g {
                    visit.push((pts[i], pts[j]));
                }
            }
        }
        let d = self.feature_len();
        let mut best: f64 = 0.0;
        const BATCH: usize = 256;
        let mut buf = vec![0.0; d];
        for chunk in visit.chunks(BATCH) {
            let mut f = DMatrix::<f64>::zeros(d, chunk.len());
            for (c, &(x, y)) in chunk.iter().enumerate() {
                self.features_into(x, y, &mut buf);
                f.column_mut(c).copy_from_slice(&buf);
            }
            let l = &self.node_features * f;
            for c in 0..chunk.len() {
                let terms: Vec<f64> = l.column(c).iter().map(|v| v.abs()).collect();
                best = best.max(pairwise_sum(&terms));
            }
        }
        Ok(best)
    }
}

/// `cos(π i / (g-1))` for `i = 0..g`, mirrored so that the grid is exactly
/// symmetric under negation.
fn chebyshev_lobatto(g: usize) -> Vec<f64> {
    let mut pts = vec![0.0; g];
    for i in 0..g.div_ceil(2) {
        let v = (std::f64::consts::PI * i as f64 / (g - 1) as f64).cos();
        pts[i] = v;
        pts[g - 1 - i] = -v;
    }
    if g % 2 == 1 {
        pts[g / 2] = 0.0;
    }
    pts
}

/// `ℒf` with its expansion coefficients in the feature basis.
#[derive(Debug, Clone)]
pub struct Interpolant<'a> {
    op: &'a InterpolationOperator,
    coeffs: Vec<f64>,
}

impl Interpolant<'_> {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut f = vec![0.0; self.coeffs.len()];
        self.op.features_into(x, y, &mut f);
        f.iter().zip(&self.coeffs).map(|(a, b)| a * b).sum()
    }
}
