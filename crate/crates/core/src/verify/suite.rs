//! The default verification suite: every catalog entry flagged `in_suite`,
//! plus scans outside theorem domains that must find violations.

use super::catalog::{Kind, PropertyId};
use super::report::Report;
use super::scan::{run_scan_with, Execution};
use super::spec::ScanSpec;
use crate::error::Result;
use crate::precision::PrecisionPolicy;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Roughly a tenth of the full sample sizes.
    pub quick: bool,
    pub seed: u64,
    pub precision: PrecisionPolicy,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            quick: false,
            seed: 20_240_601,
            precision: PrecisionPolicy::default(),
        }
    }
}

/// Random points per scan, by kind (full mode).
fn sizes(kind: Kind) -> (usize, usize) {
    match kind {
        Kind::Theorem | Kind::Claim => (4, 10_000),
        Kind::Identity => (3, 10_000),
        Kind::Limit => (2, 2_000),
        Kind::NegativeControl => (2, 2_000),
    }
}

/// Per-property seed: the suite seed mixed with an FNV-1a hash of the name.
pub fn property_seed(base: u64, name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    base ^ h
}

fn spec_for(id: PropertyId, opts: &SuiteOptions) -> ScanSpec {
    let kind = id.def(&opts.precision).kind;
    let (grid, random) = sizes(kind);
    let (grid, random) = if opts.quick {
        (grid.min(2), random / 10)
    } else {
        (grid, random)
    };
    ScanSpec::new(id.name())
        .points(grid, random)
        .seed(property_seed(opts.seed, id.name()))
        .precision(opts.precision)
}

/// Scan specs of the default suite, in catalog order.
pub fn suite_specs(opts: &SuiteOptions) -> Vec<ScanSpec> {
    let mut out: Vec<ScanSpec> = PropertyId::ALL
        .iter()
        .filter(|id| id.def(&opts.precision).in_suite)
        .map(|&id| spec_for(id, opts))
        .collect();
    let (grid, random) = if opts.quick { (2, 200) } else { (2, 2_000) };
    for (id, clause, label) in OUT_OF_DOMAIN {
        out.push(
            spec_for(id, opts)
                .points(grid, random)
                .constraint(clause)
                .expect_violations(true)
                .label(label),
        );
    }
    out
}

/// Scans expected to fail: the a > b control, the bare stated hypotheses of
/// three theorems (each clause replaces the built-in one over the same
/// variables), and two proof claims that do not hold.
const OUT_OF_DOMAIN: [(PropertyId, &str, &str); 6] = [
    (PropertyId::AbqDirect, "a>b", "negative_control_a_gt_b"),
    (PropertyId::ContBinomial, "x-k-r>-10", "stated_hypotheses_only"),
    (PropertyId::AbqBinomialUpper, "y>=k-4", "stated_hypotheses_only"),
    (
        PropertyId::EllShifted,
        "p<1+a*q^(x+y+r+1)",
        "stated_hypotheses_only",
    ),
    (PropertyId::ThetaKernelD1Negative, "x>=r", "refuted_claim"),
    (PropertyId::ThetaKernelTermwise, "x>=r", "refuted_claim"),
];

/// Specs of every identity in the catalog, or with `exact_only` just the
/// algebraic ones held to the report tolerance (no finite differences).
pub fn identity_specs(opts: &SuiteOptions, exact_only: bool) -> Vec<ScanSpec> {
    PropertyId::ALL
        .iter()
        .filter(|id| {
            let d = id.def(&opts.precision);
            d.kind == Kind::Identity && (!exact_only || d.tol == opts.precision.report_tol)
        })
        .map(|&id| spec_for(id, opts))
        .collect()
}

pub fn run_specs(specs: &[ScanSpec], exec: Execution) -> Result<Vec<Report>> {
    specs.iter().map(|s| run_scan_with(s, exec)).collect()
}

pub fn run_suite(opts: &SuiteOptions) -> Result<Vec<Report>> {
    run_specs(&suite_specs(opts), Execution::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_layout() {
        let opts = SuiteOptions::default();
        let specs = suite_specs(&opts);
        let theorems = specs
            .iter()
            .filter(|s| s.label.is_none() && s.property.starts_with("check_"))
            .count();
        assert_eq!(theorems, 11);
        assert!(specs.iter().filter(|s| s.expect_violations == Some(true)).count() >= 3);
        let exact = identity_specs(&opts, true);
        assert!(exact
            .iter()
            .all(|s| !s.property.contains("zeta") && !s.property.contains("derivative")));
        assert!(identity_specs(&opts, false).len() > exact.len());
    }

    #[test]
    fn seeds_differ_per_property() {
        assert_ne!(property_seed(1, "a"), property_seed(1, "b"));
        assert_eq!(property_seed(1, "a"), property_seed(1, "a"));
    }
}
