use abqp::verify::{
    reports_to_csv, run_scan_with, run_specs, suite_specs, Execution, Expectation, Kind, VarDomain,
};
use abqp::{run_scan, Error, PrecisionPolicy, ScanSpec, SuiteOptions};

fn json_in_pool(spec: &ScanSpec, threads: usize) -> String {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    let mut r = pool.install(|| run_scan_with(spec, Execution::Parallel)).unwrap();
    r.make_reproducible();
    r.to_json().unwrap()
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let spec = ScanSpec::new("check_ell_shifted").points(2, 3000).seed(11);
    let one = json_in_pool(&spec, 1);
    assert_eq!(one, json_in_pool(&spec, 4));
    let mut serial = run_scan_with(&spec, Execution::Serial).unwrap();
    serial.make_reproducible();
    assert_eq!(one, serial.to_json().unwrap());
}

#[test]
fn json_keys_are_sorted() {
    let r = run_scan(&ScanSpec::new("check_aq_numbers").points(0, 50)).unwrap();
    let json = r.to_json().unwrap();
    let keys: Vec<&str> = json
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(keys.contains(&"property_id") && keys.contains(&"violation_examples"));
}

#[test]
fn seed_changes_sample() {
    let a = run_scan(&ScanSpec::new("check_bq_numbers").points(0, 200).seed(1)).unwrap();
    let b = run_scan(&ScanSpec::new("check_bq_numbers").points(0, 200).seed(2)).unwrap();
    assert_ne!(a.argmin_point, b.argmin_point);
}

#[test]
fn theorem_scans_hold_on_their_domains() {
    for name in [
        "check_prop_1factor",
        "check_abq_direct",
        "check_aq_binomial_lower",
        "check_ell_direct",
    ] {
        let r = run_scan(&ScanSpec::new(name).points(3, 3000).seed(3)).unwrap();
        assert_eq!(r.kind, Kind::Theorem);
        assert!(
            r.passed && r.violations == 0,
            "{name}: {} violations",
            r.violations
        );
        assert!(r.points_tested >= 3000);
    }
}

#[test]
fn negative_controls_find_confirmed_violations() {
    let r = run_scan(&ScanSpec::new("bq_binomial_lower").points(0, 4000)).unwrap();
    assert_eq!(r.expectation, Expectation::Violations);
    assert!(r.passed && r.violations > 0);
    assert!(r.violation_examples.iter().any(|e| e.confirmed));

    let r = run_scan(
        &ScanSpec::new("check_abq_direct")
            .points(0, 4000)
            .constraint("a>b"),
    )
    .unwrap();
    assert_eq!(r.expectation, Expectation::Holds);
    assert!(!r.passed && r.violations > 0);
    assert!(r.violation_examples.len() <= 5);
}

#[test]
fn user_constraint_replaces_builtin_on_same_variables() {
    let spec = ScanSpec::new("check_cont_binomial").points(0, 100);
    let default = run_scan(&spec).unwrap();
    assert!(default.constraints.iter().any(|c| c == "x-k-r>-1"));
    let widened = run_scan(&spec.clone().constraint("x-k-r>-10")).unwrap();
    assert!(!widened.constraints.iter().any(|c| c == "x-k-r>-1"));
    assert!(widened.constraints.iter().any(|c| c == "x-k-r>-10"));
}

#[test]
fn domain_override_is_honoured() {
    let r = run_scan(
        &ScanSpec::new("check_aq_numbers")
            .points(0, 400)
            .domain("q", VarDomain::Range { lo: 0.9, hi: 0.95 }),
    )
    .unwrap();
    let q = r.argmin_point.unwrap()["q"];
    assert!((0.9..=0.95).contains(&q));
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(matches!(
        run_scan(&ScanSpec::new("nope")),
        Err(Error::UnknownProperty(_))
    ));
    assert!(matches!(
        run_scan(&ScanSpec::new("check_aq_numbers").constraint("z > 1")),
        Err(Error::InvalidSpec(_))
    ));
    assert!(matches!(
        run_scan(&ScanSpec::new("check_aq_numbers").constraint("x >")),
        Err(Error::InvalidSpec(_))
    ));
    assert!(matches!(
        run_scan(&ScanSpec::new("check_aq_numbers").domain("q", VarDomain::Range { lo: 0.5, hi: 0.1 })),
        Err(Error::InvalidSpec(_))
    ));
    let bad = PrecisionPolicy {
        product_tail_bound: -1.0,
        ..PrecisionPolicy::default()
    };
    assert!(matches!(
        run_scan(&ScanSpec::new("check_aq_numbers").precision(bad)),
        Err(Error::Policy(_))
    ));
}

#[test]
fn quick_suite_covers_every_kind_and_passes() {
    let opts = SuiteOptions {
        quick: true,
        ..SuiteOptions::default()
    };
    let specs = suite_specs(&opts);
    let reports = run_specs(&specs, Execution::Parallel).unwrap();
    assert!(reports.len() >= 14);
    for r in &reports {
        assert!(r.passed, "{} ({:?}) failed", r.property_id, r.label);
    }
    let csv = reports_to_csv(&reports).unwrap();
    assert_eq!(csv.lines().count(), reports.len() + 1);
}
