//! The JSON/CSV form of a cubature rule.

use std::fmt::Write as _;

use cubkit::cubature::{CubatureRule2D, NodeLabel};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
}

/// One node. Diagonal nodes of minimal rules carry `j = k = index` and
/// `orbit = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
    pub j: usize,
    pub k: usize,
    pub orbit: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    /// Oracle order used for verification, if any was run.
    pub oracle_order: Option<usize>,
    pub solve_residual: Option<f64>,
    /// Seconds since the Unix epoch; only written when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleDocument {
    pub schema_version: String,
    pub spec: SpecDoc,
    pub m: usize,
    pub kind: String,
    pub degree_claimed: usize,
    pub degree_verified: Option<usize>,
    pub nodes: Vec<NodeDoc>,
    pub metadata: Metadata,
}

impl RuleDocument {
    pub fn from_rule(rule: &CubatureRule2D) -> Self {
        let nodes = rule
            .nodes
            .iter()
            .map(|n| {
                let (j, k, orbit) = match n.label {
                    NodeLabel::Orbit { j, k, i } => (j, k, i),
                    NodeLabel::Diagonal { index } => (index, index, 0),
                };
                NodeDoc {
                    x: n.x,
                    y: n.y,
                    weight: n.weight,
                    j,
                    k,
                    orbit,
                }
            })
            .collect();
        RuleDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            spec: SpecDoc {
                alpha: rule.spec.alpha,
                beta: rule.spec.beta,
                sigma: rule.spec.sigma.value(),
            },
            m: rule.m,
            kind: rule.kind.as_str().to_string(),
            degree_claimed: rule.degree,
            degree_verified: None,
            nodes,
            metadata: Metadata {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                oracle_order: None,
                solve_residual: rule.solve_residual,
                generated_at_unix: None,
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,weight,j,k,orbit\n");
        for n in &self.nodes {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                n.x, n.y, n.weight, n.j, n.k, n.orbit
            );
        }
        s
    }
}
