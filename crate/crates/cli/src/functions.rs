//! Built-in test functions for `interpolate`.

use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `1 / (1 + 25 (x² + y²))`
    Runge2d,
    /// `cos(π (x + y))`
    CosPi,
    /// `Σ c x^a y^b`
    Poly(Vec<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub a: u32,
    pub b: u32,
}

impl TestFunction {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            TestFunction::Runge2d => 1.0 / (1.0 + 25.0 * (x * x + y * y)),
            TestFunction::CosPi => (PI * (x + y)).cos(),
            TestFunction::Poly(terms) => terms
                .iter()
                .map(|t| t.coeff * x.powi(t.a as i32) * y.powi(t.b as i32))
                .sum(),
        }
    }
}

fn parse_term(s: &str) -> Result<Term, String> {
    let (c, exps) = s
        .split_once('@')
        .ok_or_else(|| format!("term `{s}` is not of the form c@a,b"))?;
    let (a, b) = exps
        .split_once(',')
        .ok_or_else(|| format!("term `{s}` needs two exponents a,b"))?;
    let coeff: f64 = c
        .trim()
        .parse()
        .map_err(|_| format!("bad coefficient `{c}`"))?;
    if !coeff.is_finite() {
        return Err(format!("coefficient `{c}` is not finite"));
    }
    let exp = |e: &str| {
        e.trim()
            .parse::<u32>()
            .map_err(|_| format!("bad exponent `{e}`"))
    };
    Ok(Term {
        coeff,
        a: exp(a)?,
        b: exp(b)?,
    })
}

impl FromStr for TestFunction {
    type Err = String;

    /// `runge2d`, `cospi` or `poly:c@a,b;c@a,b;...`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "runge2d" => Ok(TestFunction::Runge2d),
            "cospi" => Ok(TestFunction::CosPi),
            _ => {
                let body = s.strip_prefix("poly:").ok_or_else(|| {
                    format!("unknown function `{s}` (expected runge2d, cospi or poly:c@a,b;...)")
                })?;
                let terms = body
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(parse_term)
                    .collect::<Result<Vec<_>, _>>()?;
                if terms.is_empty() {
                    return Err("polynomial has no terms".into());
                }
                Ok(TestFunction::Poly(terms))
            }
        }
    }
}
