//! Orthonormal polynomial bases for `𝒲_{α,β,±1/2}` on the square.
//!
//! With `x = cos θ`, `y = cos φ` put `X = cos(θ-φ)` and `Y = cos(θ+φ)`. Then
//! `2xy = X + Y`, `x² + y² - 1 = XY`, `(x+y)² = (1+X)(1+Y)` and
//! `(x-y)² = (1-X)(1-Y)`, so every polynomial in `(2xy, x²+y²-1)` is a
//! symmetric polynomial in `(X, Y)`, and integration against `𝒲*_{α,β,-1/2}`
//! becomes integration against the product Jacobi measure `w*(X) w*(Y)`
//! (with an extra `(X-Y)²` for `σ = +1/2`).
//!
//! Families, for the block of degree `d`:
//!
//! ```text
//! d = 2n:    ₁Q_{k,2n}   = P^{α,β}_{k,n},                      0 ≤ k ≤ n
//!            ₂Q_{k,2n}   = a^{(1,1)} (x²-y²) P^{α+1,β+1}_{k,n-1},  0 ≤ k ≤ n-1
//! d = 2n+1:  ₁Q_{k,2n+1} = a^{(0,1)} (x+y) P^{α,β+1}_{k,n},       0 ≤ k ≤ n
//!            ₂Q_{k,2n+1} = a^{(1,0)} (x-y) P^{α+1,β}_{k,n},       0 ≤ k ≤ n
//! ```

use crate::jacobi::{jacobi_moments, JacobiParams, OrthonormalJacobi};
use crate::oracle::{Sigma, WeightSpec};

/// `(X, Y) = (cos(θ-φ), cos(θ+φ))` for `x = cos θ`, `y = cos φ`.
pub fn jacobi_coordinates(x: f64, y: f64) -> (f64, f64) {
    let sx = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let sy = ((1.0 - y) * (1.0 + y)).max(0.0).sqrt();
    let xy = x * y;
    let ss = sx * sy;
    ((xy + ss).clamp(-1.0, 1.0), (xy - ss).clamp(-1.0, 1.0))
}

#[inline]
fn tri(k: usize, n: usize) -> usize {
    n * (n + 1) / 2 + k
}

/// Orthonormal basis `P^{α,β,σ}_{k,n}`, `0 ≤ k ≤ n ≤ nmax`, of polynomials in
/// `(u, v) = (2xy, x²+y²-1)`, evaluated through `(X, Y)`.
#[derive(Debug, Clone)]
pub struct PBasis {
    params: JacobiParams,
    sigma: Sigma,
    nmax: usize,
    jac: OrthonormalJacobi,
    scale: f64,
}

impl PBasis {
    pub fn new(params: JacobiParams, sigma: Sigma, nmax: usize) -> Self {
        let jac = OrthonormalJacobi::new(params, nmax + 1);
        let scale = match sigma {
            Sigma::MinusHalf => std::f64::consts::FRAC_1_SQRT_2,
            Sigma::PlusHalf => {
                let m = jacobi_moments(params, 2);
                (m[2] - m[1] * m[1]).sqrt()
            }
        };
        Self {
            params,
            sigma,
            nmax,
            jac,
            scale,
        }
    }

    pub fn params(&self) -> JacobiParams {
        self.params
    }

    pub fn max_n(&self) -> usize {
        self.nmax
    }

    /// Number of functions, `(nmax+1)(nmax+2)/2`.
    pub fn len(&self) -> usize {
        tri(0, self.nmax + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of `P_{k,n}` in the output of [`PBasis::eval_xy_into`].
    pub fn index(k: usize, n: usize) -> usize {
        tri(k, n)
    }

    /// All `P_{k,n}` at Jacobi coordinates `(X, Y)`.
    pub fn eval_xy_into(&self, big_x: f64, big_y: f64, out: &mut [f64]) {
        let n1 = self.nmax + 2;
        let mut px = vec![0.0; n1];
        let mut py = vec![0.0; n1];
        self.jac.eval_into(big_x, &mut px);
        self.jac.eval_into(big_y, &mut py);
        match self.sigma {
            Sigma::MinusHalf => {
                let s = self.scale;
                for n in 0..=self.nmax {
                    for k in 0..n {
                        out[tri(k, n)] = s * (px[n] * py[k] + px[k] * py[n]);
                    }
                    out[tri(n, n)] = px[n] * py[n];
                }
            }
            Sigma::PlusHalf => {
                // p_j[X,Y] as divided differences, finite in the confluent limit
                let mut dd = vec![0.0; n1];
                self.jac.divided_difference_into(big_x, &py, &mut dd);
                let s = self.scale;
                for n in 0..=self.nmax {
                    for k in 0..=n {
                        out[tri(k, n)] = s * (px[k] * dd[n + 1] - px[n + 1] * dd[k]);
                    }
                }
            }
        }
    }

    pub fn eval(&self, k: usize, n: usize, x: f64, y: f64) -> f64 {
        let mut out = vec![0.0; self.len()];
        let (bx, by) = jacobi_coordinates(x, y);
        self.eval_xy_into(bx, by, &mut out);
        out[tri(k, n)]
    }
}

/// The two families of the square basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `₁Q`: even in `x - y` (built from `P^{α,β}` and `(x+y) P^{α,β+1}`).
    First,
    /// `₂Q`: carries the factor `x - y`.
    Second,
}

/// Identifies one element `_{family}Q_{k,degree}` of the square basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub family: Family,
    pub k: usize,
    pub degree: usize,
}

impl BasisLabel {
    /// Whether the index is in range for this family and degree parity.
    pub fn is_valid(&self) -> bool {
        let n = self.degree / 2;
        match (self.family, self.degree % 2) {
            (Family::Second, 0) => n >= 1 && self.k < n,
            _ => self.k <= n,
        }
    }
}

/// Normalizing constant `a^{(i,j)}` of the shifted families, `(i, j)` one of
/// `(0,1)`, `(1,0)`, `(1,1)`.
pub fn a_constant(spec: &WeightSpec, i: u8, j: u8) -> f64 {
    let (a, b) = (spec.alpha, spec.beta);
    match spec.sigma {
        Sigma::MinusHalf => match (i, j) {
            (0, 1) => (a + b + 2.0) / (2.0 * (b + 1.0)),
            (1, 0) => (a + b + 2.0) / (2.0 * (a + 1.0)),
            (1, 1) => (a + b + 2.0) * (a + b + 3.0) / (4.0 * (a + 1.0) * (b + 1.0)),
            _ => panic!("a_constant: unsupported shift ({i}, {j})"),
        },
        Sigma::PlusHalf => {
            // 1 / sqrt(E[(X-Y)² g(X) g(Y)] / E[(X-Y)²]) under w*(X) w*(Y)
            let m = jacobi_moments(spec.params(), 4);
            let g: [f64; 5] = match (i, j) {
                (0, 1) => [1.0, 1.0, 0.0, 0.0, 0.0],
                (1, 0) => [1.0, -1.0, 0.0, 0.0, 0.0],
                (1, 1) => [1.0, 0.0, -1.0, 0.0, 0.0],
                _ => panic!("a_constant: unsupported shift ({i}, {j})"),
            };
            let e = |shift: usize| -> f64 { (0..3).map(|q| g[q] * m[q + shift]).sum() };
            let (e0, e1, e2) = (e(0), e(1), e(2));
            let var = m[2] - m[1] * m[1];
            ((e2 * e0 - e1 * e1) / var).sqrt().recip()
        }
    }
}

/// The full orthonormal basis of polynomials of degree `≤ max_degree` on the
/// square for `𝒲_{α,β,σ}`, ordered by degree, then family (`₁Q` first), then `k`.
#[derive(Debug, Clone)]
pub struct SquareBasis {
    spec: WeightSpec,
    max_degree: usize,
    p00: PBasis,
    p01: PBasis,
    p10: PBasis,
    p11: Option<PBasis>,
    a01: f64,
    a10: f64,
    a11: f64,
    labels: Vec<BasisLabel>,
}

impl SquareBasis {
    pub fn new(spec: WeightSpec, max_degree: usize) -> Self {
        let p = spec.params();
        let s = spec.sigma;
        let nmax = max_degree / 2;
        let odd_n = max_degree.saturating_sub(1) / 2;
        let labels = (0..=max_degree)
            .flat_map(|d| {
                let n = d / 2;
                let (c1, c2) = if d % 2 == 0 {
                    (n + 1, n)
                } else {
                    (n + 1, n + 1)
                };
                (0..c1)
                    .map(move |k| BasisLabel {
                        family: Family::First,
                        k,
                        degree: d,
                    })
                    .chain((0..c2).map(move |k| BasisLabel {
                        family: Family::Second,
                        k,
                        degree: d,
                    }))
            })
            .collect();
        Self {
            spec,
            max_degree,
            p00: PBasis::new(p, s, nmax),
            p01: PBasis::new(p.shifted(0.0, 1.0), s, odd_n),
            p10: PBasis::new(p.shifted(1.0, 0.0), s, odd_n),
            p11: (nmax >= 1).then(|| PBasis::new(p.shifted(1.0, 1.0), s, nmax - 1)),
            a01: a_constant(&spec, 0, 1),
            a10: a_constant(&spec, 1, 0),
            a11: a_constant(&spec, 1, 1),
            labels,
        }
    }

    pub fn spec(&self) -> WeightSpec {
        self.spec
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `dim Π²_N = (N+1)(N+2)/2`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// Position of a label in the output of [`SquareBasis::eval_into`].
    pub fn index_of(&self, label: BasisLabel) -> Option<usize> {
        if !label.is_valid() || label.degree > self.max_degree {
            return None;
        }
        let d = label.degree;
        let n = d / 2;
        let offset = d * (d + 1) / 2;
        let first = n + 1;
        Some(match label.family {
            Family::First => offset + label.k,
            Family::Second => offset + first + label.k,
        })
    }

    pub fn constants(&self) -> (f64, f64, f64) {
        (self.a01, self.a10, self.a11)
    }

    /// Every basis function at `(x, y)`; `out.len()` must equal [`SquareBasis::len`].
    pub fn eval_into(&self, x: f64, y: f64, out: &mut [f64]) {
        assert_eq!(out.len(), self.len(), "output buffer has the wrong length");
        let (bx, by) = jacobi_coordinates(x, y);
        let mut v00 = vec![0.0; self.p00.len()];
        let mut v01 = vec![0.0; self.p01.len()];
        let mut v10 = vec![0.0; self.p10.len()];
        self.p00.eval_xy_into(bx, by, &mut v00);
        if self.max_degree >= 1 {
            self.p01.eval_xy_into(bx, by, &mut v01);
            self.p10.eval_xy_into(bx, by, &mut v10);
        }
        let mut v11 = Vec::new();
        if let Some(p11) = &self.p11 {
            v11.resize(p11.len(), 0.0);
            p11.eval_xy_into(bx, by, &mut v11);
        }
        let f01 = self.a01 * (x + y);
        let f10 = self.a10 * (x - y);
        let f11 = self.a11 * (x - y) * (x + y);
        let mut i = 0;
        for d in 0..=self.max_degree {
            let n = d / 2;
            if d % 2 == 0 {
                for k in 0..=n {
                    out[i] = v00[tri(k, n)];
                    i += 1;
                }
                for k in 0..n {
                    out[i] = f11 * v11[tri(k, n - 1)];
                    i += 1;
                }
            } else {
                for k in 0..=n {
                    out[i] = f01 * v01[tri(k, n)];
                    i += 1;
                }
                for k in 0..=n {
                    out[i] = f10 * v10[tri(k, n)];
                    i += 1;
                }
            }
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.eval_into(x, y, &mut out);
        out
    }
}

/// `P^{α,β,σ}_{k,n}(2xy, x²+y²-1)`, a single value. Builds the evaluator on
/// each call; use [`PBasis`] for repeated evaluation.
pub fn basis_p(spec: &WeightSpec, k: usize, n: usize, x: f64, y: f64) -> f64 {
    assert!(k <= n, "basis_p: need k ≤ n (got k = {k}, n = {n})");
    PBasis::new(spec.params(), spec.sigma, n).eval(k, n, x, y)
}

/// `_{family}Q_{k,degree}(x, y)`, a single value, or `None` for an index
/// outside the family's range.
pub fn basis_q(spec: &WeightSpec, label: BasisLabel, x: f64, y: f64) -> Option<f64> {
    let b = SquareBasis::new(*spec, label.degree);
    let i = b.index_of(label)?;
    Some(b.eval(x, y)[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: f64, b: f64, s: Sigma) -> WeightSpec {
        WeightSpec::new(a, b, s).unwrap()
    }

    #[test]
    fn jacobi_coordinates_identities() {
        for &(x, y) in &[(0.3, -0.7), (-0.95, 0.2), (1.0, 0.5), (0.0, 0.0)] {
            let (bx, by) = jacobi_coordinates(x, y);
            assert!((bx + by - 2.0 * x * y).abs() < 1e-15);
            assert!((bx * by - (x * x + y * y - 1.0)).abs() < 1e-15);
            assert!(bx >= by);
        }
    }

    #[test]
    fn dimension_and_labels() {
        let b = SquareBasis::new(spec(0.0, 0.5, Sigma::MinusHalf), 7);
        assert_eq!(b.len(), 36);
        for (i, l) in b.labels().iter().enumerate() {
            assert!(l.is_valid());
            assert_eq!(b.index_of(*l), Some(i));
        }
        let bad = BasisLabel {
            family: Family::Second,
            k: 2,
            degree: 4,
        };
        assert!(!bad.is_valid());
        assert_eq!(b.index_of(bad), None);
    }

    #[test]
    fn chebyshev_constant_a01_is_one() {
        let s = spec(-0.5, -0.5, Sigma::MinusHalf);
        assert!((a_constant(&s, 0, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn first_family_odd_vanishes_on_antidiagonal() {
        let s = spec(0.5, 1.5, Sigma::MinusHalf);
        for d in [1usize, 3, 5] {
            for k in 0..=d / 2 {
                let l = BasisLabel {
                    family: Family::First,
                    k,
                    degree: d,
                };
                for &x in &[-0.8, 0.1, 0.6] {
                    assert!(basis_q(&s, l, x, -x).unwrap().abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn plus_half_is_finite_on_diagonal_and_edges() {
        let b = SquareBasis::new(spec(0.5, -0.5, Sigma::PlusHalf), 9);
        for &(x, y) in &[(0.4, 0.4), (1.0, 0.3), (-1.0, -1.0), (0.2, 1.0)] {
            assert!(b.eval(x, y).iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn gram_matrix_is_identity() {
        use crate::oracle::OracleGrid;
        for sp in [
            spec(0.5, -0.5, Sigma::MinusHalf),
            spec(1.5, 0.0, Sigma::MinusHalf),
            spec(-0.5, -0.5, Sigma::PlusHalf),
            spec(0.5, 1.5, Sigma::PlusHalf),
        ] {
            let b = SquareBasis::new(sp, 7);
            let grid = OracleGrid::new(sp, 48).unwrap();
            let n = b.len();
            let mut v = vec![0.0; n];
            let gram = grid
                .integrate_many(n * n, |x, y, out| {
                    b.eval_into(x, y, &mut v);
                    for i in 0..n {
                        for j in 0..n {
                            out[i * n + j] = v[i] * v[j];
                        }
                    }
                })
                .unwrap();
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (gram[i * n + j] - expect).abs() < 1e-10,
                        "{sp:?} ({i},{j}) = {}",
                        gram[i * n + j]
                    );
                }
            }
        }
    }

    #[test]
    fn p_basis_degree_zero_is_constant() {
        let s = spec(0.25, -0.25, Sigma::MinusHalf);
        assert!((basis_p(&s, 0, 0, 0.3, -0.9) - 1.0).abs() < 1e-15);
    }
}
