//! Brute-force integration against the normalized weights `𝒲*_{α,β,σ}`.
//!
//! Used as ground truth for every exactness and orthogonality check, so it
//! shares no code with the constructions it verifies: it carries its own
//! Gauss-Legendre rule and never touches the Jacobi module.
//!
//! With `x = cos θ`, `y = cos φ` the square becomes `[0,π]²`, the factors
//! `((1-x²)(1-y²))^{±1/2}` become smooth, and
//!
//! ```text
//! |x - y| = 2 |sin((θ+φ)/2) sin((θ-φ)/2)|,   |x + y| = 2 |cos((θ+φ)/2) cos((θ-φ)/2)|.
//! ```
//!
//! The remaining non-smoothness lives on the diagonals `θ = φ` and `θ + φ = π`,
//! so the angle square is cut into the four triangles they bound. Each triangle
//! is collapsed onto the unit square with a Duffy map anchored at the centre
//! `(π/2, π/2)` and integrated with a tensor Gauss-Legendre rule. For integer
//! `2α+1` and `2β+1` the integrand is analytic on every panel and convergence is
//! spectral; for other exponents it is algebraic in the order.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{CubError, Result};
use crate::jacobi::JacobiParams;

/// The exponent `σ` of `((1-x²)(1-y²))^σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sigma {
    MinusHalf,
    PlusHalf,
}

impl Sigma {
    pub fn value(self) -> f64 {
        match self {
            Sigma::MinusHalf => -0.5,
            Sigma::PlusHalf => 0.5,
        }
    }

    pub fn from_value(v: f64) -> Result<Self> {
        if v == -0.5 {
            Ok(Sigma::MinusHalf)
        } else if v == 0.5 {
            Ok(Sigma::PlusHalf)
        } else {
            Err(CubError::InvalidParameter(format!(
                "σ must be -0.5 or 0.5 (got {v})"
            )))
        }
    }
}

/// Selects the weight `𝒲_{α,β,σ}(x,y) = |x-y|^{2α+1}|x+y|^{2β+1}((1-x²)(1-y²))^σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: Sigma,
}

impl WeightSpec {
    pub fn new(alpha: f64, beta: f64, sigma: Sigma) -> Result<Self> {
        JacobiParams::new(alpha, beta)?;
        Ok(Self { alpha, beta, sigma })
    }

    pub fn params(&self) -> JacobiParams {
        JacobiParams {
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    /// Unnormalized weight value at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let base =
            (x - y).abs().powf(2.0 * self.alpha + 1.0) * (x + y).abs().powf(2.0 * self.beta + 1.0);
        let s = ((1.0 - x * x) * (1.0 - y * y)).max(0.0);
        base * s.powf(self.sigma.value())
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Pairwise (cascade) summation; deterministic for a given input order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Tensor quadrature points of the oracle for one weight and order, with
/// weights already normalized to sum to one.
#[derive(Debug, Clone)]
pub struct OracleGrid {
    spec: WeightSpec,
    order: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
    ws: Vec<f64>,
}

impl OracleGrid {
    pub fn new(spec: WeightSpec, order: usize) -> Result<Self> {
        if order < 16 {
            return Err(CubError::InvalidParameter(format!(
                "oracle order must be at least 16 (got {order})"
            )));
        }
        WeightSpec::new(spec.alpha, spec.beta, spec.sigma)?;
        let (g, gw) = gauss_legendre(order);
        let u: Vec<f64> = g.iter().map(|t| 0.5 * (t + 1.0)).collect();
        let uw: Vec<f64> = gw.iter().map(|w| 0.5 * w).collect();
        let corners = [(0.0, 0.0), (PI, 0.0), (PI, PI), (0.0, PI)];
        let c = (FRAC_PI_2, FRAC_PI_2);
        let (ea, eb) = (2.0 * spec.alpha + 1.0, 2.0 * spec.beta + 1.0);
        let es = 2.0 * spec.sigma.value() + 1.0;

        let npts = 4 * order * order;
        let (mut xs, mut ys, mut ws) = (
            Vec::with_capacity(npts),
            Vec::with_capacity(npts),
            Vec::with_capacity(npts),
        );
        for t in 0..4 {
            let p1 = corners[t];
            let p2 = corners[(t + 1) % 4];
            let d1 = (p1.0 - c.0, p1.1 - c.1);
            let d2 = (p2.0 - p1.0, p2.1 - p1.1);
            let det = (d1.0 * d2.1 - d1.1 * d2.0).abs();
            for (&ui, &uwi) in u.iter().zip(&uw) {
                for (&vj, &vwj) in u.iter().zip(&uw) {
                    let th = c.0 + ui * (d1.0 + vj * d2.0);
                    let ph = c.1 + ui * (d1.1 + vj * d2.1);
                    let (hs, hd) = (0.5 * (th + ph), 0.5 * (th - ph));
                    let w_minus = (2.0 * hs.sin() * hd.sin()).abs().powf(ea);
                    let w_plus = (2.0 * hs.cos() * hd.cos()).abs().powf(eb);
                    let w_sin = (th.sin() * ph.sin()).abs().powf(es);
                    xs.push(th.cos());
                    ys.push(ph.cos());
                    ws.push(uwi * vwj * ui * det * w_minus * w_plus * w_sin);
                }
            }
        }
        let total = row_pairwise(&ws, order);
        if !(total.is_finite() && total > 0.0) {
            return Err(CubError::Numerical(format!(
                "oracle normalization is not positive and finite ({total})"
            )));
        }
        ws.iter_mut().for_each(|w| *w /= total);
        Ok(Self {
            spec,
            order,
            xs,
            ys,
            ws,
        })
    }

    pub fn spec(&self) -> WeightSpec {
        self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.ws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ws.is_empty()
    }

    /// Points and normalized weights, `(x, y, w)`.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.xs
            .iter()
            .zip(&self.ys)
            .zip(&self.ws)
            .map(|((&x, &y), &w)| (x, y, w))
    }

    /// `∫∫ f 𝒲*`.
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.ws.len());
        for (x, y, w) in self.points() {
            let v = f(x, y);
            if !v.is_finite() {
                return Err(non_finite(x, y, v));
            }
            terms.push(w * v);
        }
        Ok(row_pairwise(&terms, self.order))
    }

    /// Integrates `nf` functions at once; `f(x, y, out)` fills `out[..nf]`.
    pub fn integrate_many<F: FnMut(f64, f64, &mut [f64])>(
        &self,
        nf: usize,
        mut f: F,
    ) -> Result<Vec<f64>> {
        let nrows = self.ws.len() / self.order;
        let mut rows = vec![0.0; nf * nrows];
        let mut buf = vec![0.0; nf];
        let mut acc = vec![0.0; nf];
        for r in 0..nrows {
            acc.iter_mut().for_each(|a| *a = 0.0);
            for i in r * self.order..(r + 1) * self.order {
                let (x, y, w) = (self.xs[i], self.ys[i], self.ws[i]);
                f(x, y, &mut buf);
                for (a, &v) in acc.iter_mut().zip(&buf) {
                    *a += w * v;
                }
            }
            for (q, &a) in acc.iter().enumerate() {
                rows[q * nrows + r] = a;
            }
        }
        let out: Vec<f64> = (0..nf)
            .map(|q| pairwise_sum(&rows[q * nrows..(q + 1) * nrows]))
            .collect();
        if let Some(v) = out.iter().find(|v| !v.is_finite()) {
            return Err(CubError::Evaluation(format!(
                "integrand produced a non-finite value (integral {v})"
            )));
        }
        Ok(out)
    }
}

fn non_finite(x: f64, y: f64, v: f64) -> CubError {
    CubError::Evaluation(format!("integrand is {v} at ({x}, {y})"))
}

/// Sums each row of `order` terms sequentially, then the row sums pairwise.
fn row_pairwise(terms: &[f64], order: usize) -> f64 {
    let rows: Vec<f64> = terms.chunks(order).map(|r| r.iter().sum()).collect();
    pairwise_sum(&rows)
}

/// `∫∫ f 𝒲*_{spec} dx dy` with a tensor rule of `order` points per direction on
/// each of the four panels.
pub fn integrate_cw<F: Fn(f64, f64) -> f64>(spec: WeightSpec, f: F, order: usize) -> Result<f64> {
    OracleGrid::new(spec, order)?.integrate(f)
}

/// `∫_Ω f(u, v) W_{α,β,σ}(u, v) du dv` for the normalized weight on the
/// parabolic domain, pulled back through `(u, v) = (2xy, x² + y² - 1)`.
pub fn integrate_w_parabolic<F: Fn(f64, f64) -> f64>(
    spec: WeightSpec,
    f: F,
    order: usize,
) -> Result<f64> {
    integrate_cw(spec, |x, y| f(2.0 * x * y, x * x + y * y - 1.0), order)
}

/// Normalized moments `∫∫ x^a y^b 𝒲*` for `a + b ≤ max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub spec: WeightSpec,
    pub max_degree: usize,
    values: Vec<f64>,
}

impl MomentTable {
    fn index(a: usize, b: usize) -> usize {
        let d = a + b;
        d * (d + 1) / 2 + b
    }

    /// Moment of `x^a y^b`; `None` beyond the table's degree.
    pub fn get(&self, a: usize, b: usize) -> Option<f64> {
        (a + b <= self.max_degree).then(|| self.values[Self::index(a, b)])
    }

    /// All `(a, b, moment)` in order of increasing total degree.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.max_degree)
            .flat_map(|d| (0..=d).map(move |b| (d - b, b)))
            .map(|(a, b)| (a, b, self.values[Self::index(a, b)]))
    }
}

pub fn moment_table(spec: WeightSpec, max_degree: usize, order: usize) -> Result<MomentTable> {
    moment_table_on(&OracleGrid::new(spec, order)?, max_degree)
}

/// Moment table from an already built grid.
pub fn moment_table_on(grid: &OracleGrid, max_degree: usize) -> Result<MomentTable> {
    let d = max_degree;
    let nf = (d + 1) * (d + 2) / 2;
    let mut px = vec![0.0; d + 1];
    let mut py = vec![0.0; d + 1];
    let values = grid.integrate_many(nf, |x, y, out| {
        px[0] = 1.0;
        py[0] = 1.0;
        for k in 1..=d {
            px[k] = px[k - 1] * x;
            py[k] = py[k - 1] * y;
        }
        for deg in 0..=d {
            for b in 0..=deg {
                out[MomentTable::index(deg - b, b)] = px[deg - b] * py[b];
            }
        }
    })?;
    Ok(MomentTable {
        spec: grid.spec(),
        max_degree,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: f64, b: f64, s: Sigma) -> WeightSpec {
        WeightSpec::new(a, b, s).unwrap()
    }

    #[test]
    fn legendre_rule_is_exact() {
        let (x, w) = gauss_legendre(7);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // ∫ t^12 = 2/13
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((v - 2.0 / 13.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn rejects_low_order_and_bad_sigma() {
        let s = spec(0.0, 0.0, Sigma::MinusHalf);
        assert!(OracleGrid::new(s, 8).is_err());
        assert!(Sigma::from_value(0.25).is_err());
        assert!(WeightSpec::new(-1.0, 0.0, Sigma::PlusHalf).is_err());
    }

    #[test]
    fn constant_and_odd_functions() {
        for s in [Sigma::MinusHalf, Sigma::PlusHalf] {
            let sp = spec(0.5, -0.5, s);
            assert!((integrate_cw(sp, |_, _| 1.0, 32).unwrap() - 1.0).abs() < 1e-14);
            assert!(integrate_cw(sp, |x, _| x, 32).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn product_chebyshev_moments() {
        let t = moment_table(spec(-0.5, -0.5, Sigma::MinusHalf), 4, 64).unwrap();
        assert!((t.get(2, 0).unwrap() - 0.5).abs() < 1e-13);
        assert!((t.get(2, 2).unwrap() - 0.25).abs() < 1e-13);
        assert!((t.get(4, 0).unwrap() - 0.375).abs() < 1e-13);
        assert!(t.get(5, 0).is_none());
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let sp = spec(0.0, 0.0, Sigma::MinusHalf);
        let r = integrate_cw(sp, |x, _| if x > 0.5 { f64::NAN } else { 1.0 }, 16);
        assert!(matches!(r, Err(CubError::Evaluation(_))));
    }

    #[test]
    fn parabolic_pullback_of_constant() {
        let sp = spec(1.5, 0.0, Sigma::PlusHalf);
        let v = integrate_w_parabolic(sp, |_, _| 1.0, 24).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }
}
