use super::CubatureRule2D;
use crate::error::{CubError, Result};
use crate::oracle::{moment_table_on, MomentTable, OracleGrid};

/// Residual tolerance per monomial, relative to `1 + |moment|`.
pub const EXACTNESS_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomialResidual {
    /// Exponents of `x^a y^b`.
    pub a: usize,
    pub b: usize,
    pub moment: f64,
    pub rule_value: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub rule_id: String,
    pub tested_degree: usize,
    pub oracle_order: usize,
    /// One entry per monomial of total degree `≤ tested_degree`.
    pub residuals: Vec<MonomialResidual>,
    /// Largest `d` such that every monomial of degree `≤ d` passes; `None` if
    /// even the constant fails.
    pub max_exact_degree: Option<usize>,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }

    /// Max residual over monomials of total degree `≤ degree`.
    pub fn max_residual_through(&self, degree: usize) -> f64 {
        self.residuals
            .iter()
            .filter(|r| r.a + r.b <= degree)
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }

    pub fn is_exact_through(&self, degree: usize) -> bool {
        self.max_exact_degree.is_some_and(|d| d >= degree)
    }
}

/// Compares the rule on every monomial of degree `≤ degree` with the oracle.
pub fn verify_rule(
    rule: &CubatureRule2D,
    degree: usize,
    oracle_order: usize,
) -> Result<VerificationReport> {
    verify_rule_on(rule, degree, &OracleGrid::new(rule.spec, oracle_order)?)
}

/// As [`verify_rule`], reusing a prebuilt oracle grid.
pub fn verify_rule_on(
    rule: &CubatureRule2D,
    degree: usize,
    grid: &OracleGrid,
) -> Result<VerificationReport> {
    if grid.spec() != rule.spec {
        return Err(CubError::InputMismatch(
            "oracle grid was built for a different weight".into(),
        ));
    }
    let table = moment_table_on(grid, degree)?;
    verify_rule_with_moments(rule, degree, &table, grid.order())
}

/// As [`verify_rule`], against a precomputed moment table of degree `≥ degree`.
pub fn verify_rule_with_moments(
    rule: &CubatureRule2D,
    degree: usize,
    table: &MomentTable,
    oracle_order: usize,
) -> Result<VerificationReport> {
    if table.spec != rule.spec {
        return Err(CubError::InputMismatch(
            "moment table was computed for a different weight".into(),
        ));
    }
    if table.max_degree < degree {
        return Err(CubError::InputMismatch(format!(
            "moment table has degree {} < {degree}",
            table.max_degree
        )));
    }
    let nm = (degree + 1) * (degree + 2) / 2;
    let mut sums = vec![0.0; nm];
    let mut px = vec![0.0; degree + 1];
    let mut py = vec![0.0; degree + 1];
    for node in &rule.nodes {
        px[0] = 1.0;
        py[0] = 1.0;
        for k in 1..=degree {
            px[k] = px[k - 1] * node.x;
            py[k] = py[k - 1] * node.y;
        }
        let mut i = 0;
        for d in 0..=degree {
            for b in 0..=d {
                sums[i] += node.weight * px[d - b] * py[b];
                i += 1;
            }
        }
    }
    let residuals: Vec<MonomialResidual> = table
        .iter()
        .take(nm)
        .zip(&sums)
        .map(|((a, b, moment), &rule_value)| MonomialResidual {
            a,
            b,
            moment,
            rule_value,
            residual: (rule_value - moment).abs(),
        })
        .collect();
    let mut max_exact_degree = None;
    for d in 0..=degree {
        let ok = residuals
            .iter()
            .filter(|r| r.a + r.b == d)
            .all(|r| r.residual <= EXACTNESS_TOLERANCE * (1.0 + r.moment.abs()));
        if !ok {
            break;
        }
        max_exact_degree = Some(d);
    }
    Ok(VerificationReport {
        rule_id: rule.id(),
        tested_degree: degree,
        oracle_order,
        residuals,
        max_exact_degree,
    })
}
