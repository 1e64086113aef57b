use std::collections::BTreeMap;

use serde::Serialize;

use super::catalog::{Kind, VarDomain};
use super::spec::Expectation;
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;

/// A sample point at which the property failed in f64.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationExample {
    pub point: BTreeMap<String, f64>,
    pub slack: f64,
    /// Slack re-evaluated in double-double; `None` if that evaluation failed.
    pub confirmed_slack: Option<f64>,
    pub confirmed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrecisionInfo {
    pub policy: PrecisionPolicy,
    pub slack_tol: f64,
    /// Arithmetic used to confirm f64 violations.
    pub confirm: &'static str,
}

/// Outcome of one scan.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub property_id: String,
    pub label: Option<String>,
    pub kind: Kind,
    pub summary: String,
    pub expectation: Expectation,
    /// Points evaluated to a finite outcome.
    pub points_tested: u64,
    /// Confirmed violations.
    pub violations: u64,
    /// f64 violations that vanished under double-double re-evaluation.
    pub noise: u64,
    /// Points inside the constraints where a pole or domain error occurred.
    pub domain_skips: u64,
    /// Points with a non-finite result (counted separately from skips).
    pub nonfinite: u64,
    /// Random draws rejected by the constraints.
    pub rejected_draws: u64,
    pub min_slack: Option<f64>,
    pub max_residual: Option<f64>,
    pub argmin_point: Option<BTreeMap<String, f64>>,
    pub violation_examples: Vec<ViolationExample>,
    pub seed: u64,
    pub elapsed_ms: u64,
    pub precision: PrecisionInfo,
    pub domains: BTreeMap<String, VarDomain>,
    pub constraints: Vec<String>,
    pub grid_points: usize,
    pub random_points: usize,
    pub passed: bool,
}

impl Report {
    /// Zeroes wall-clock fields so identical runs serialize identically.
    pub fn make_reproducible(&mut self) {
        self.elapsed_ms = 0;
    }

    /// JSON with keys sorted at every level.
    pub fn to_json(&self) -> Result<String> {
        to_sorted_json(self)
    }
}

pub fn to_sorted_json<T: Serialize>(v: &T) -> Result<String> {
    // serde_json::Value maps are BTreeMaps, so keys come out sorted
    let value = serde_json::to_value(v).map_err(|e| Error::Serialize(e.to_string()))?;
    serde_json::to_string_pretty(&value).map_err(|e| Error::Serialize(e.to_string()))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    property_id: &'a str,
    label: &'a str,
    kind: Kind,
    expectation: Expectation,
    points_tested: u64,
    violations: u64,
    noise: u64,
    domain_skips: u64,
    nonfinite: u64,
    rejected_draws: u64,
    min_slack: Option<f64>,
    max_residual: Option<f64>,
    seed: u64,
    elapsed_ms: u64,
    passed: bool,
}

/// One CSV row per report, with a header.
pub fn reports_to_csv(reports: &[Report]) -> Result<String> {
    let err = |e: csv::Error| Error::Serialize(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(CsvRow {
            property_id: &r.property_id,
            label: r.label.as_deref().unwrap_or(""),
            kind: r.kind,
            expectation: r.expectation,
            points_tested: r.points_tested,
            violations: r.violations,
            noise: r.noise,
            domain_skips: r.domain_skips,
            nonfinite: r.nonfinite,
            rejected_draws: r.rejected_draws,
            min_slack: r.min_slack,
            max_residual: r.max_residual,
            seed: r.seed,
            elapsed_ms: r.elapsed_ms,
            passed: r.passed,
        })
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
}
