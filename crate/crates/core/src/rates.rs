//! Closed-form asymptotic rate references.
//!
//! These are limits or limit bounds as `n -> infinity`; a finite-n measurement
//! may be attached for comparison but is never checked against them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{pair_count, PatternGraph};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    /// Differences contain `L`: rate `1/(chi-1)`.
    ContainsPattern,
    /// At least `c n^v(L)` copies: lower bound `1/(chi-1) - 2c/e(L)`.
    ManyCopies { c: f64 },
    /// At least `c n` disjoint copies: bound `(1-c)^2/(chi-1)`.
    DisjointCopies { c: f64 },
    /// Contains `K_{t,t}` with `t = c log2 n`: bound `1 - 2^(-2/c)`.
    Biclique { c: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteMeasurement {
    pub n: usize,
    pub log2_size: f64,
    pub rate: f64,
}

impl FiniteMeasurement {
    pub fn new(n: usize, log2_size: f64) -> Self {
        FiniteMeasurement { n, log2_size, rate: log2_size / pair_count(n).max(1) as f64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub pattern: String,
    pub scenario: Scenario,
    pub chromatic_number: usize,
    pub pattern_edges: usize,
    pub asymptotic_value: f64,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite: Option<FiniteMeasurement>,
}

pub fn rates(l: &PatternGraph, scenario: Scenario, finite: Option<FiniteMeasurement>) -> Result<RateReport> {
    let chi = l.chromatic_number();
    let e = l.size();
    if e == 0 {
        return Err(Error::usage("the pattern needs at least one edge (chromatic number 1)"));
    }
    let base = 1.0 / (chi - 1) as f64;
    let c_range = |c: f64| {
        if c > 0.0 && c.is_finite() {
            Ok(c)
        } else {
            Err(Error::usage(format!("scenario constant must be positive, got {c}")))
        }
    };
    let (value, label) = match scenario {
        Scenario::ContainsPattern => (base, "limit 1/(chi-1)"),
        Scenario::ManyCopies { c } => (base - 2.0 * c_range(c)? / e as f64, "lower bound 1/(chi-1) - 2c/e(L)"),
        Scenario::DisjointCopies { c } => ((1.0 - c_range(c)?).powi(2) * base, "bound (1-c)^2/(chi-1)"),
        Scenario::Biclique { c } => (1.0 - (-2.0 / c_range(c)?).exp2(), "bound 1 - 2^(-2/c)"),
    };
    Ok(RateReport {
        pattern: l.graph().to_line(),
        scenario,
        chromatic_number: chi,
        pattern_edges: e,
        asymptotic_value: value,
        label: format!("asymptotic reference, {label}"),
        finite,
    })
}
