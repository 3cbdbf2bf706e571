//! One-dimensional Jacobi polynomial machinery.
//!
//! Classical polynomials `P_n^{(α,β)}` are normalized by `P_n(1) = binom(n+α, n)`.
//! Everything measured against a weight uses the *normalized* Jacobi weight
//! `w*(t) = c (1-t)^α (1+t)^β` with `∫ w* = 1`, so `h_0 = 1`, `p_0 = 1` and
//! quadrature weights sum to one.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{CubError, Result};

/// Exponents of the Jacobi weight `(1-t)^α (1+t)^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(CubError::InvalidParameter(format!(
                "Jacobi exponents must satisfy α, β > -1 (got α = {alpha}, β = {beta})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// `(α + da, β + db)`; shifting up keeps the parameters valid.
    pub fn shifted(self, da: f64, db: f64) -> Self {
        Self {
            alpha: self.alpha + da,
            beta: self.beta + db,
        }
    }

    /// Coefficients of the classical recurrence
    /// `P_{n+1} = (A t + B) P_n - C P_{n-1}`.
    fn classical_coeffs(self, n: usize) -> (f64, f64, f64) {
        let (a, b) = (self.alpha, self.beta);
        if n == 0 {
            return (0.5 * (a + b + 2.0), 0.5 * (a - b), 0.0);
        }
        let n = n as f64;
        let s = 2.0 * n + a + b;
        let denom = 2.0 * (n + 1.0) * (n + a + b + 1.0) * s;
        let big_a = (s + 1.0) * (s + 2.0) * s / denom;
        let big_b = (s + 1.0) * (a * a - b * b) / denom;
        let big_c = 2.0 * (n + a) * (n + b) * (s + 2.0) / denom;
        (big_a, big_b, big_c)
    }

    /// Diagonal entry `a_n` of the monic recurrence / Jacobi matrix.
    fn monic_diag(self, n: usize) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        if n == 0 {
            return (b - a) / (a + b + 2.0);
        }
        let s = 2.0 * n as f64 + a + b;
        (b * b - a * a) / (s * (s + 2.0))
    }

    /// Off-diagonal squared entry `b_n` (n ≥ 1) of the monic recurrence.
    fn monic_offdiag_sq(self, n: usize) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        debug_assert!(n >= 1);
        if n == 1 {
            // the general formula is 0/0 when α + β = -1
            return 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b));
        }
        let nf = n as f64;
        let s = 2.0 * nf + a + b;
        4.0 * nf * (nf + a) * (nf + b) * (nf + a + b) / (s * s * (s + 1.0) * (s - 1.0))
    }
}

/// Classical `P_n^{(α,β)}(t)` by upward recurrence.
pub fn jacobi_eval(n: usize, p: JacobiParams, t: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let (a, b, c) = p.classical_coeffs(k);
        let next = (a * t + b) * cur - c * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Classical values `P_0(t), ..., P_nmax(t)`.
pub fn jacobi_eval_upto(nmax: usize, p: JacobiParams, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    let mut prev = 0.0;
    for k in 0..nmax {
        let (a, b, c) = p.classical_coeffs(k);
        let cur = out[k];
        out.push((a * t + b) * cur - c * prev);
        prev = cur;
    }
    out
}

/// Derivative of the classical polynomial,
/// `d/dt P_n^{(α,β)} = (n+α+β+1)/2 · P_{n-1}^{(α+1,β+1)}`.
pub fn jacobi_derivative(n: usize, p: JacobiParams, t: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + p.alpha + p.beta + 1.0) * jacobi_eval(n - 1, p.shifted(1.0, 1.0), t)
}

/// `h_n = ∫ [P_n^{(α,β)}]² w*_{α,β}` under the normalized weight.
pub fn jacobi_norm_h(n: usize, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if n == 0 {
        return 1.0;
    }
    let mut h = (a + 1.0) * (b + 1.0) / (a + b + 3.0);
    for k in 2..=n {
        let k = k as f64;
        h *= (k + a) * (k + b) * (2.0 * k + a + b - 1.0)
            / ((2.0 * k + a + b + 1.0) * (k + a + b) * k);
    }
    h
}

/// `binom(n + x, n)` for real `x`, as a product.
pub fn binom_shifted(n: usize, x: f64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * (x + k as f64) / k as f64)
}

/// Rising factorial `(x)_n`.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

/// Moments `E[t^d]`, `d = 0..=dmax`, of the normalized Jacobi weight.
///
/// Uses the Pearson equation `((1-t²) w)' = ((β-α) - (α+β+2) t) w`, which gives
/// `(α+β+2+d) M_{d+1} = (β-α) M_d + d M_{d-1}` without any quadrature.
pub fn jacobi_moments(p: JacobiParams, dmax: usize) -> Vec<f64> {
    let (a, b) = (p.alpha, p.beta);
    let mut m = Vec::with_capacity(dmax + 1);
    m.push(1.0);
    if dmax == 0 {
        return m;
    }
    m.push((b - a) / (a + b + 2.0));
    for d in 1..dmax {
        let df = d as f64;
        let next = ((b - a) * m[d] + df * m[d - 1]) / (a + b + 2.0 + df);
        m.push(next);
    }
    m
}

/// Orthonormal Jacobi polynomials `p_n = P_n / sqrt(h_n)` up to a fixed degree,
/// evaluated through the monic three-term recurrence.
#[derive(Debug, Clone)]
pub struct OrthonormalJacobi {
    params: JacobiParams,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl OrthonormalJacobi {
    pub fn new(params: JacobiParams, nmax: usize) -> Self {
        let diag = (0..=nmax).map(|n| params.monic_diag(n)).collect();
        // offdiag[n] = sqrt(b_n), offdiag[0] unused
        let offdiag = (0..=nmax + 1)
            .map(|n| {
                if n == 0 {
                    0.0
                } else {
                    params.monic_offdiag_sq(n).sqrt()
                }
            })
            .collect();
        Self {
            params,
            diag,
            offdiag,
        }
    }

    pub fn params(&self) -> JacobiParams {
        self.params
    }

    pub fn max_degree(&self) -> usize {
        self.diag.len() - 1
    }

    /// Writes `p_0(t), ..., p_{out.len()-1}(t)`.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        assert!(out.len() <= self.diag.len() + 1, "degree exceeds table");
        out[0] = 1.0;
        if out.len() == 1 {
            return;
        }
        out[1] = (t - self.diag[0]) / self.offdiag[1];
        for n in 1..out.len() - 1 {
            out[n + 1] =
                ((t - self.diag[n]) * out[n] - self.offdiag[n] * out[n - 1]) / self.offdiag[n + 1];
        }
    }

    pub fn eval(&self, n: usize, t: f64) -> f64 {
        let mut buf = vec![0.0; n + 1];
        self.eval_into(t, &mut buf);
        buf[n]
    }

    /// Divided differences `p_n[x, y] = (p_n(x) - p_n(y)) / (x - y)`, valid also
    /// in the confluent limit `x = y` where they become derivatives.
    /// `values_y` must hold `p_0(y), ..., p_{out.len()-1}(y)`.
    pub fn divided_difference_into(&self, x: f64, values_y: &[f64], out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        assert!(values_y.len() >= out.len());
        out[0] = 0.0;
        if out.len() == 1 {
            return;
        }
        out[1] = 1.0 / self.offdiag[1];
        for n in 1..out.len() - 1 {
            out[n + 1] = (values_y[n] + (x - self.diag[n]) * out[n] - self.offdiag[n] * out[n - 1])
                / self.offdiag[n + 1];
        }
    }
}

/// Kind of a one-dimensional rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind1D {
    Gauss,
    /// Gauss-Radau with the fixed node at `t = +1`.
    GaussRadauAtPlusOne,
}

/// A one-dimensional rule for the normalized Jacobi weight.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule1D {
    /// Strictly increasing nodes in [-1, 1].
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
    pub kind: RuleKind1D,
}

impl QuadratureRule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss-Jacobi rule with `n` nodes (the zeros of `P_n^{(α,β)}`), exact to degree `2n-1`.
///
/// Golub-Welsch eigen-decomposition of the Jacobi matrix, followed by Newton
/// polishing of the nodes on the classical polynomial; weights are the
/// Christoffel numbers `1 / Σ_{j<n} p_j(x_k)²` at the polished nodes.
pub fn gauss_rule(n: usize, p: JacobiParams) -> Result<QuadratureRule1D> {
    if n == 0 {
        return Err(CubError::InvalidParameter(
            "a Gauss rule needs at least one node".into(),
        ));
    }
    let p = JacobiParams::new(p.alpha, p.beta)?;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jm[(i, i)] = p.monic_diag(i);
        if i + 1 < n {
            let off = p.monic_offdiag_sq(i + 1).sqrt();
            jm[(i, i + 1)] = off;
            jm[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::try_new(jm, f64::EPSILON, 10_000).ok_or_else(|| {
        CubError::Numerical(format!(
            "tridiagonal eigensolver did not converge (n = {n}, α = {}, β = {})",
            p.alpha, p.beta
        ))
    })?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let value = jacobi_eval(n, p, *x);
            let slope = jacobi_derivative(n, p, *x);
            if slope == 0.0 || !slope.is_finite() {
                break;
            }
            let step = value / slope;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1e-3) {
                break;
            }
        }
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) || nodes.iter().any(|x| !x.is_finite()) {
        return Err(CubError::Numerical(format!(
            "Gauss nodes collapsed during refinement (n = {n})"
        )));
    }

    let basis = OrthonormalJacobi::new(p, n);
    let mut buf = vec![0.0; n];
    let weights = nodes
        .iter()
        .map(|&x| {
            basis.eval_into(x, &mut buf);
            1.0 / buf.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();

    Ok(QuadratureRule1D {
        nodes,
        weights,
        exactness_degree: 2 * n - 1,
        kind: RuleKind1D::Gauss,
    })
}

/// Gauss-Radau rule with `n` interior nodes and the fixed node `+1`, exact to degree `2n`.
///
/// Interior nodes are the zeros of `P_n^{(α+1,β)}` with weights
/// `μ_k = 2(α+1)/(α+β+2) · λ_k^{(α+1,β)} / (1 - x_k)`; the endpoint weight is
/// `μ_0 = 1 - Σ μ_k` (exactness on constants).
pub fn gauss_radau_rule(n: usize, p: JacobiParams) -> Result<QuadratureRule1D> {
    let p = JacobiParams::new(p.alpha, p.beta)?;
    if n == 0 {
        return Ok(QuadratureRule1D {
            nodes: vec![1.0],
            weights: vec![1.0],
            exactness_degree: 0,
            kind: RuleKind1D::GaussRadauAtPlusOne,
        });
    }
    let inner = gauss_rule(n, p.shifted(1.0, 0.0))?;
    let ratio = 2.0 * (p.alpha + 1.0) / (p.alpha + p.beta + 2.0);
    let mut nodes = inner.nodes;
    let mut weights: Vec<f64> = nodes
        .iter()
        .zip(&inner.weights)
        .map(|(&x, &l)| ratio * l / (1.0 - x))
        .collect();
    nodes.push(1.0);
    weights.push(radau_endpoint_weight(n, p));
    Ok(QuadratureRule1D {
        nodes,
        weights,
        exactness_degree: 2 * n,
        kind: RuleKind1D::GaussRadauAtPlusOne,
    })
}

/// Closed form of the Radau endpoint weight,
/// `μ_0 = (β+1)_n / (binom(n+α+1, n) (α+β+2)_n)`.
pub fn radau_endpoint_weight(n: usize, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    (1..=n)
        .map(|k| {
            let k = k as f64;
            (b + k) * k / ((a + 1.0 + k) * (a + b + 1.0 + k))
        })
        .product()
}
