//! Sampling and evaluation of a scan.
//!
//! Points are generated serially from a seeded ChaCha8 stream, evaluated
//! independently (in parallel when the `parallel` feature is on), and folded
//! serially in index order, so reports do not depend on the thread count.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::catalog::{evaluate, PropertyId, Score, VarDomain};
use super::report::{PrecisionInfo, Report, ViolationExample};
use super::spec::{Expectation, Resolved, ScanSpec};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;
use crate::real::Real;

const MAX_EXAMPLES: usize = 5;

/// How points are evaluated. `Parallel` degrades to serial when the crate is
/// built without the `parallel` feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Clone, Debug)]
enum PointResult {
    Skip,
    NonFinite,
    Ok {
        slack: f64,
        residual: Option<f64>,
    },
    Violation {
        slack: f64,
        residual: Option<f64>,
        confirmed_slack: Option<f64>,
        confirmed: bool,
    },
}

/// Runs a scan with the default (parallel) execution.
pub fn run_scan(spec: &ScanSpec) -> Result<Report> {
    run_scan_with(spec, Execution::default())
}

pub fn run_scan_with(spec: &ScanSpec, exec: Execution) -> Result<Report> {
    let start = Instant::now();
    let res = spec.resolve()?;
    let (mut points, grid_skips) = grid(&res, spec.grid_points);
    let (random, rejected) = random(&res, spec.random_points, spec.seed)?;
    points.extend(random);

    let pol = spec.precision;
    let high = high_policy(&pol);
    let eval = |p: &Vec<f64>| evaluate_point(res.def.id, p, res.tol, &pol, &high);
    let results: Vec<PointResult> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => points.par_iter().map(eval).collect(),
        _ => points.iter().map(eval).collect(),
    };

    let names = res.def.var_names();
    let named = |p: &[f64]| -> BTreeMap<String, f64> {
        names.iter().zip(p).map(|(n, v)| (n.to_string(), *v)).collect()
    };
    let mut report = Report {
        property_id: res.def.name.to_string(),
        label: spec.label.clone(),
        kind: res.def.kind,
        summary: res.def.summary.to_string(),
        expectation: res.expectation,
        points_tested: 0,
        violations: 0,
        noise: 0,
        domain_skips: grid_skips,
        nonfinite: 0,
        rejected_draws: rejected,
        min_slack: None,
        max_residual: None,
        argmin_point: None,
        violation_examples: Vec::new(),
        seed: spec.seed,
        elapsed_ms: 0,
        precision: PrecisionInfo {
            policy: pol,
            slack_tol: res.tol,
            confirm: "double-double",
        },
        domains: names
            .iter()
            .map(|n| n.to_string())
            .zip(res.domains.iter().cloned())
            .collect(),
        constraints: res.constraints.iter().map(|c| c.text().to_string()).collect(),
        grid_points: spec.grid_points,
        random_points: spec.random_points,
        passed: false,
    };
    let mut min_slack = f64::INFINITY;
    for (p, r) in points.iter().zip(&results) {
        let (slack, residual) = match *r {
            PointResult::Skip => {
                report.domain_skips += 1;
                continue;
            }
            PointResult::NonFinite => {
                report.nonfinite += 1;
                continue;
            }
            PointResult::Ok { slack, residual } => (slack, residual),
            PointResult::Violation {
                slack,
                residual,
                confirmed_slack,
                confirmed,
            } => {
                if confirmed {
                    report.violations += 1;
                } else {
                    report.noise += 1;
                }
                // confirmed violations first, then noise
                let ex = ViolationExample {
                    point: named(p),
                    slack,
                    confirmed_slack,
                    confirmed,
                };
                let n_confirmed = report.violation_examples.iter().filter(|e| e.confirmed).count();
                if report.violation_examples.len() < MAX_EXAMPLES {
                    report.violation_examples.push(ex);
                } else if confirmed && n_confirmed < MAX_EXAMPLES {
                    if let Some(i) = report.violation_examples.iter().position(|e| !e.confirmed) {
                        report.violation_examples.remove(i);
                        report.violation_examples.push(ex);
                    }
                }
                (slack, residual)
            }
        };
        report.points_tested += 1;
        if slack < min_slack {
            min_slack = slack;
            report.argmin_point = Some(named(p));
        }
        if let Some(res) = residual {
            report.max_residual = Some(report.max_residual.map_or(res, |m: f64| m.max(res)));
        }
    }
    if report.points_tested > 0 {
        report.min_slack = Some(min_slack);
    }
    report.passed = match res.expectation {
        Expectation::Holds => report.points_tested > 0 && report.violations == 0,
        Expectation::Violations => report.violations > 0,
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Policy for confirmation: the double-double tail bound, the caller's
/// steps and tolerances.
fn high_policy(pol: &PrecisionPolicy) -> PrecisionPolicy {
    let h = PrecisionPolicy::high();
    PrecisionPolicy {
        product_tail_bound: h.product_tail_bound,
        eta_terms: h.eta_terms.max(pol.eta_terms),
        ..*pol
    }
}

fn evaluate_point(
    id: PropertyId,
    p: &[f64],
    tol: f64,
    pol: &PrecisionPolicy,
    high: &PrecisionPolicy,
) -> PointResult {
    let sc = match evaluate::<f64>(id, p, pol) {
        Ok(o) => o.score(),
        Err(_) => return PointResult::Skip,
    };
    let (slack, residual) = (sc.slack, sc.residual.or(sc.aux));
    if !slack.is_finite()
        || residual.is_some_and(|r| !r.is_finite())
        || sc.aux.is_some_and(|r| !r.is_finite())
    {
        return PointResult::NonFinite;
    }
    if !fails(&sc, tol, pol, 1.0) {
        return PointResult::Ok { slack, residual };
    }
    let pd: Vec<Dd> = p.iter().map(|&v| Dd::from_f64(v)).collect();
    let (confirmed_slack, confirmed) = match evaluate::<Dd>(id, &pd, high) {
        Ok(o) => {
            let s = o.score();
            (Some(s.slack), fails(&s, tol, pol, 0.1))
        }
        Err(_) => (None, false),
    };
    PointResult::Violation {
        slack,
        residual,
        confirmed_slack,
        confirmed,
    }
}

/// A point fails if its slack is below `-scale * tol`, or if an auxiliary
/// identity residual exceeds `scale` times the report tolerance.
fn fails(s: &Score, tol: f64, pol: &PrecisionPolicy, scale: f64) -> bool {
    // non-finite double-double results count as unconfirmed
    if !s.slack.is_finite() {
        return false;
    }
    let aux_bad = s.aux.is_some_and(|r| r > scale * pol.report_tol.max(tol));
    s.slack < -scale * tol || aux_bad
}

fn values(d: &VarDomain, n: usize) -> Vec<f64> {
    match d {
        VarDomain::Range { lo, hi } => match n {
            0 => vec![],
            1 => vec![0.5 * (lo + hi)],
            _ => (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect(),
        },
        VarDomain::Integer { lo, hi } => (*lo..=*hi).map(|v| v as f64).collect(),
        VarDomain::Choice { values } => values.clone(),
    }
}

/// Cartesian grid; points outside the constraints are counted as skips.
fn grid(res: &Resolved, n: usize) -> (Vec<Vec<f64>>, u64) {
    if n == 0 {
        return (vec![], 0);
    }
    let axes: Vec<Vec<f64>> = res.domains.iter().map(|d| values(d, n)).collect();
    let mut out = Vec::new();
    let mut skipped = 0;
    let mut idx = vec![0usize; axes.len()];
    'outer: loop {
        let p: Vec<f64> = idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
        if res.admits(&p) {
            out.push(p);
        } else {
            skipped += 1;
        }
        for d in (0..axes.len()).rev() {
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }
    (out, skipped)
}

fn draw(d: &VarDomain, rng: &mut ChaCha8Rng) -> f64 {
    match d {
        VarDomain::Range { lo, hi } => lo + (hi - lo) * rng.gen::<f64>(),
        VarDomain::Integer { lo, hi } => rng.gen_range(*lo..=*hi) as f64,
        VarDomain::Choice { values } => values[rng.gen_range(0..values.len())],
    }
}

/// Rejection sampling of `n` admissible points.
fn random(res: &Resolved, n: usize, seed: u64) -> Result<(Vec<Vec<f64>>, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_attempts = 1000 * n as u64 + 100_000;
    let mut out = Vec::with_capacity(n);
    let mut rejected = 0u64;
    while out.len() < n && (out.len() as u64 + rejected) < max_attempts {
        let p: Vec<f64> = res.domains.iter().map(|d| draw(d, &mut rng)).collect();
        if res.admits(&p) {
            out.push(p);
        } else {
            rejected += 1;
        }
    }
    if n > 0 && out.is_empty() {
        return Err(Error::EmptyDomain(res.def.name.to_string()));
    }
    Ok((out, rejected))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serial_and_parallel_reports_agree() {
        let spec = ScanSpec::new("check_abq_direct").points(3, 500).seed(7);
        let mut a = run_scan_with(&spec, Execution::Serial).unwrap();
        let mut b = run_scan_with(&spec, Execution::Parallel).unwrap();
        a.make_reproducible();
        b.make_reproducible();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(a.passed && a.points_tested > 500);
    }

    #[test]
    fn empty_domain_is_reported() {
        let spec = ScanSpec::new("check_aq_numbers")
            .points(0, 10)
            .constraint("q > 2");
        assert!(matches!(run_scan(&spec), Err(Error::EmptyDomain(_))));
    }

    #[test]
    fn grid_counts_integer_values() {
        let spec = ScanSpec::new("aq_binomial_symmetry").points(2, 0);
        let r = run_scan(&spec).unwrap();
        // q, a: 2 values each; x, k: 9 each with k <= x leaving 45 pairs
        assert_eq!(r.points_tested + r.domain_skips + r.nonfinite, 4 * 81);
        assert!(r.passed);
    }
}
