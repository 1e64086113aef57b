//! Acceptance criteria for `abqp`. Each criterion runs its scans, compares
//! against tolerances pinned below and returns a one-line verdict.

use std::time::Instant;

use abqp::verify::{run_scan_with, run_specs, to_sorted_json, Execution, Kind};
use abqp::{Report, ScanSpec, SuiteOptions};

pub mod rational;

/// Seed shared by every acceptance scan that is not part of the suite.
pub const SEED: u64 = 7_301;

pub const IDENTITY_RESIDUAL: f64 = 1e-10;
pub const IDENTITY_POINTS: usize = 1_000;
pub const IDENTITY_SECONDS: f64 = 5.0;
pub const ADDITION_POINTS: usize = 10_000;
pub const FD_RELATIVE: f64 = 1e-6;
pub const DERIVATIVE_POINTS: usize = 1_000;
pub const SIGMA_PRIME: f64 = 1e-8;
pub const SIGMA_RELATIVE: f64 = 1e-6;
pub const THEOREM_POINTS: u64 = 10_000;
pub const THEOREM_COUNT: usize = 11;
pub const SUITE_SECONDS: f64 = 60.0;
pub const REPORT_TOL: f64 = 1e-10;
pub const ORACLE_RELATIVE: f64 = 1e-12;
pub const ORACLE_POINTS: usize = 25;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        format!(
            "criterion {} [{}]: {status} - {}",
            self.id, self.title, self.detail
        )
    }
}

type Check = (u8, &'static str, fn() -> abqp::Result<(bool, String)>);

pub const CRITERIA: &[Check] = &[
    (1, "theta identities", identities),
    (2, "addition formulas", additions),
    (3, "kernel derivatives", derivatives),
    (4, "sigma machinery", sigma),
    (5, "theorem certification", theorems),
    (6, "negative controls", negative_controls),
    (7, "degeneration chain", degenerations),
    (8, "rational oracle", rational::oracle),
    (9, "determinism", determinism),
];

pub fn run_all() -> Vec<Verdict> {
    CRITERIA
        .iter()
        .map(|&(id, title, f)| {
            let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
            Verdict {
                id,
                title,
                pass,
                detail,
            }
        })
        .collect()
}

fn scan(name: &str, random: usize) -> abqp::Result<Report> {
    run_scan_with(
        &ScanSpec::new(name).points(0, random).seed(SEED),
        Execution::Parallel,
    )
}

fn residual(r: &Report) -> f64 {
    r.max_residual.unwrap_or(f64::NAN)
}

/// `true` when every point was finite, the sample was large enough and the
/// residual stayed within `tol`.
fn identity_ok(r: &Report, points: usize, tol: f64) -> bool {
    r.points_tested >= points as u64 && r.nonfinite == 0 && r.violations == 0 && residual(r) <= tol
}

fn residual_checks(names: &[&str], points: usize, tol: f64) -> abqp::Result<(bool, Vec<String>)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in names {
        let r = scan(name, points)?;
        pass &= identity_ok(&r, points, tol);
        let noise = if r.noise > 0 {
            format!(" ({} unconfirmed)", r.noise)
        } else {
            String::new()
        };
        parts.push(format!(
            "{name} {:.1e} over {}{noise}",
            residual(&r),
            r.points_tested
        ));
    }
    Ok((pass, parts))
}

fn identities() -> abqp::Result<(bool, String)> {
    let start = Instant::now();
    let (ok, parts) = residual_checks(
        &["theta_inversion", "theta_quasi_periodicity", "theta_addition"],
        IDENTITY_POINTS,
        IDENTITY_RESIDUAL,
    )?;
    let secs = start.elapsed().as_secs_f64();
    let pass = ok && secs < IDENTITY_SECONDS;
    Ok((
        pass,
        format!("{}; {secs:.2} s (limit {IDENTITY_SECONDS} s)", parts.join(", ")),
    ))
}

fn additions() -> abqp::Result<(bool, String)> {
    let (pass, parts) = residual_checks(
        &["abq_addition", "elliptic_addition"],
        ADDITION_POINTS,
        IDENTITY_RESIDUAL,
    )?;
    Ok((pass, parts.join(", ")))
}

fn derivatives() -> abqp::Result<(bool, String)> {
    let (fd_ok, mut parts) = residual_checks(
        &["f_kernel_derivative", "theta_kernel_derivative"],
        DERIVATIVE_POINTS,
        FD_RELATIVE,
    )?;
    let mut pass = fd_ok;
    for name in ["f_kernel_d1_negative", "theta_kernel_d1_negative"] {
        let r = scan(name, DERIVATIVE_POINTS)?;
        let negative = r.violations == 0 && r.min_slack.is_some_and(|s| s > 0.0);
        pass &= negative && r.points_tested >= DERIVATIVE_POINTS as u64;
        if negative {
            parts.push(format!("{name} negative at all {}", r.points_tested));
        } else {
            let example = r
                .violation_examples
                .iter()
                .find(|e| e.confirmed)
                .map(|e| format!(" e.g. {:?}", e.point))
                .unwrap_or_default();
            let why = if name.starts_with("theta") {
                " (theta(u^2 q^2x; p) < 0, so f' > 0, for u < sqrt(p) q^-x, inside the interval whenever p < q^2r)"
            } else {
                ""
            };
            parts.push(format!(
                "{name} non-negative at {} of {} points{example}{why}",
                r.violations, r.points_tested
            ));
        }
    }
    Ok((pass, parts.join(", ")))
}

fn sigma() -> abqp::Result<(bool, String)> {
    let (p1, mut parts) = residual_checks(&["sigma_prime_at_zero"], IDENTITY_POINTS, SIGMA_PRIME)?;
    let (p2, rest) = residual_checks(&["zeta_doubling", "wp_relation"], IDENTITY_POINTS, SIGMA_RELATIVE)?;
    parts.extend(rest);
    Ok((p1 && p2, parts.join(", ")))
}

fn theorems() -> abqp::Result<(bool, String)> {
    let start = Instant::now();
    let reports = abqp::run_suite(&SuiteOptions::default())?;
    let secs = start.elapsed().as_secs_f64();
    let thm: Vec<&Report> = reports
        .iter()
        .filter(|r| r.kind == Kind::Theorem && r.label.is_none())
        .collect();
    let failing: Vec<&str> = thm
        .iter()
        .filter(|r| r.violations > 0 || r.points_tested < THEOREM_POINTS)
        .map(|r| r.property_id.as_str())
        .collect();
    let fewest = thm.iter().map(|r| r.points_tested).min().unwrap_or(0);
    let pass = thm.len() == THEOREM_COUNT && failing.is_empty() && secs < SUITE_SECONDS;
    Ok((
        pass,
        format!(
            "{} theorems, fewest points {fewest}, failing {failing:?}; suite of {} scans {secs:.2} s (limit {SUITE_SECONDS} s)",
            thm.len(),
            reports.len()
        ),
    ))
}

fn negative_controls() -> abqp::Result<(bool, String)> {
    let specs = [
        ScanSpec::new("check_abq_direct")
            .constraint("a>b")
            .expect_violations(true),
        ScanSpec::new("bq_binomial_lower"),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for spec in specs {
        let r = run_scan_with(&spec.points(0, 2_000).seed(SEED), Execution::Parallel)?;
        let confirmed = r.violation_examples.iter().any(|e| e.confirmed);
        pass &= r.violations >= 1 && confirmed;
        let scope = if r.constraints.iter().any(|c| c == "a>b") {
            " (a>b)"
        } else {
            ""
        };
        parts.push(format!(
            "{}{scope}: {} confirmed violations",
            r.property_id, r.violations
        ));
    }
    Ok((pass, parts.join(", ")))
}

fn degenerations() -> abqp::Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in [
        "limit_elliptic_p_to_zero",
        "limit_abq_b_to_zero",
        "limit_abq_a_to_zero",
        "limit_binomial_chain",
    ] {
        let r = scan(name, 2_000)?;
        pass &= r.passed && r.violations == 0 && r.points_tested > 0;
        parts.push(format!(
            "{name} monotone at {}/{}",
            r.points_tested - r.violations,
            r.points_tested
        ));
    }
    let (ok, rest) = residual_checks(
        &["binomial_k1_reductions", "zero_parameter_specializations"],
        IDENTITY_POINTS,
        REPORT_TOL,
    )?;
    pass &= ok;
    parts.extend(rest);
    Ok((pass, parts.join(", ")))
}

fn suite_json(exec: Execution) -> abqp::Result<String> {
    let opts = SuiteOptions::default();
    let mut reports = run_specs(&abqp::verify::suite_specs(&opts), exec)?;
    reports.iter_mut().for_each(Report::make_reproducible);
    to_sorted_json(&reports)
}

fn determinism() -> abqp::Result<(bool, String)> {
    let first = suite_json(Execution::Parallel)?;
    let second = suite_json(Execution::Parallel)?;
    let serial = suite_json(Execution::Serial)?;
    let pass = first == second && first == serial;
    Ok((
        pass,
        format!(
            "two parallel runs and one serial run of the full suite, {} bytes, identical: {pass}",
            first.len()
        ),
    ))
}
