use std::process::{Command, Output};

use serde_json::Value;

fn abqp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abqp"))
        .args(args)
        .env_remove("ABQP_THREADS")
        .output()
        .expect("spawn abqp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn error_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).expect("json error on stderr");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn eval_prints_value_and_precision() {
    let o = abqp(&["eval", "q_number", "x=3", "q=0.5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("1.75"));
    assert!(lines.next().unwrap().starts_with("precision: "));

    let o = abqp(&["eval", "abq_number", "x=1", "q=0.5", "a=0.2", "b=0.3"]);
    assert_eq!(stdout(&o).lines().next(), Some("1"));
    let o = abqp(&["eval", "theta", "x=0.5", "p=0"]);
    assert_eq!(stdout(&o).lines().next(), Some("0.5"));
}

#[test]
fn eval_json_output() {
    let v = json(&abqp(&["eval", "q_number", "x=3", "q=0.5", "--format", "json"]));
    assert_eq!(v["value"].as_f64(), Some(1.75));
    assert_eq!(v["operation"], "q_number");
    assert!(v["precision"]["product_tail_bound"].is_number());
}

#[test]
fn eval_list_names_operations() {
    let o = abqp(&["eval", "--list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for name in ["abq_binomial", "elliptic_number", "theta_kernel_d1", "wp"] {
        assert!(out.contains(name), "{name} missing from --list");
    }
}

#[test]
fn exit_codes_and_error_json() {
    let o = abqp(&["eval", "theta", "x=0", "p=0.3"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_kind(&o), "domain");

    let o = abqp(&["eval", "q_number", "x=3"]);
    assert_eq!(o.status.code(), Some(2));

    let o = abqp(&["scan", "--property", "no_such_property"]);
    assert_eq!(o.status.code(), Some(2));

    let o = abqp(&[
        "scan",
        "--property",
        "check_aq_numbers",
        "--domain",
        "q > 2",
        "--grid",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = abqp(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_theorem_holds() {
    let o = abqp(&[
        "scan",
        "--property",
        "check_abq_direct",
        "--grid",
        "4",
        "--random",
        "2000",
        "--seed",
        "42",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 42);
    assert!(v["points_tested"].as_u64().unwrap() >= 2000);
}

#[test]
fn scan_negative_control() {
    let args = [
        "scan",
        "--property",
        "check_abq_direct",
        "--domain",
        "a>b",
        "--random",
        "2000",
        "--grid",
        "0",
    ];
    let o = abqp(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["violations"].as_u64().unwrap() >= 1);

    let mut expect = args.to_vec();
    expect.push("--expect-violations");
    let o = abqp(&expect);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["expectation"], "violations");
    assert!(!v["violation_examples"].as_array().unwrap().is_empty());
}

#[test]
fn scan_var_overrides_domain() {
    let v = json(&abqp(&[
        "scan",
        "--property",
        "check_aq_numbers",
        "--var",
        "q=0.2:0.3",
        "--grid",
        "0",
        "--random",
        "300",
    ]));
    assert_eq!(v["domains"]["q"]["lo"], 0.2);
    assert_eq!(v["points_tested"], 300);
}

#[test]
fn reproducible_output_is_byte_identical() {
    let run = || {
        abqp(&[
            "scan",
            "--property",
            "check_ell_direct",
            "--random",
            "3000",
            "--seed",
            "9",
            "--reproducible",
        ])
        .stdout
    };
    let first = run();
    assert!(!first.is_empty());
    assert_eq!(first, run());
    let threaded = abqp(&[
        "--threads",
        "1",
        "scan",
        "--property",
        "check_ell_direct",
        "--random",
        "3000",
        "--seed",
        "9",
        "--reproducible",
    ]);
    assert_eq!(first, threaded.stdout);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.conf");
    std::fs::write(
        &path,
        "# scan settings\nproperty = check_aq_numbers\nrandom = 250\ngrid = 0\nseed = 5\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();

    let v = json(&abqp(&["--config", cfg, "scan"]));
    assert_eq!(v["property_id"], "check_aq_numbers");
    assert_eq!(v["points_tested"], 250);
    assert_eq!(v["seed"], 5);

    let v = json(&abqp(&["--config", cfg, "scan", "--seed", "6"]));
    assert_eq!(v["seed"], 6);

    std::fs::write(&path, "property = check_aq_numbers\nbogus = 1\n").unwrap();
    let o = abqp(&["--config", cfg, "scan"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "usage");
}

#[test]
fn csv_output_has_header_and_rows() {
    let o = abqp(&["identities", "--exact", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("property_id,"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 10);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn quick_suite_passes_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.json");
    let o = abqp(&["suite", "--quick", "-o", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["summary"]["all_passed"], true);
    assert!(v["summary"]["properties"].as_u64().unwrap() >= 14);
    let kinds: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    for k in ["theorem", "identity", "limit", "claim", "negative_control"] {
        assert!(kinds.contains(&k), "no {k} in suite");
    }
}

#[test]
fn identity_suite_property() {
    let o = abqp(&["scan", "--property", "check_identity_suite", "--random", "500"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["name"], "check_identity_suite");
    assert_eq!(v["summary"]["all_passed"], true);
    for r in v["reports"].as_array().unwrap() {
        assert!(
            r["max_residual"].as_f64().unwrap() <= 1e-10,
            "{}",
            r["property_id"]
        );
    }
}
