//! Parameter scans over the catalog of identities and inequalities.

pub mod catalog;
pub mod expr;
pub mod report;
pub mod scan;
pub mod spec;
pub mod suite;

pub use catalog::{evaluate, Kind, Outcome, PropertyDef, PropertyId, Score, VarDomain};
pub use expr::Constraint;
pub use report::{reports_to_csv, to_sorted_json, Report, ViolationExample};
pub use scan::{run_scan, run_scan_with, Execution};
pub use spec::{Expectation, ScanSpec};
pub use suite::{identity_specs, property_seed, run_specs, run_suite, suite_specs, SuiteOptions};
