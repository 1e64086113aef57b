//! `abqp` — evaluate generalized q-/elliptic numbers and run verification scans.
//!
//! Exit codes: 0 success, 1 a scan did not meet its expectation, 2 usage
//! error, 3 evaluation error. Errors are written to stderr as JSON.

mod config;
mod eval;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use abqp::verify::{
    identity_specs, reports_to_csv, run_specs, to_sorted_json, Execution, Report, ScanSpec, SuiteOptions,
    VarDomain,
};
use abqp::PrecisionPolicy;
use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use config::FileConfig;

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// The scan ran but did not meet its expectation.
#[derive(Debug)]
struct Unmet(String);

impl std::fmt::Display for Unmet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Unmet {}

#[derive(Parser)]
#[command(
    name = "abqp",
    version,
    about = "Generalized q-, a,b;q- and elliptic numbers: evaluation and verification scans"
)]
struct Cli {
    /// key = value configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true, env = "ABQP_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one library function, e.g. `eval q_number x=3 q=0.5`.
    Eval(EvalArgs),
    /// Scan one catalog property (or `check_identity_suite`).
    Scan(ScanArgs),
    /// Run the default verification suite.
    Suite(SuiteArgs),
    /// Run every identity check.
    Identities(IdentityArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Operation name (see --list).
    name: Option<String>,
    /// Arguments as key=value.
    assignments: Vec<String>,
    /// List operations and their arguments.
    #[arg(long)]
    list: bool,
    /// `json` prints a JSON object; otherwise plain text.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    precision: PrecisionArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Catalog property name.
    #[arg(long)]
    property: Option<String>,
    /// Grid values per continuous variable.
    #[arg(long)]
    grid: Option<usize>,
    /// Accepted random points.
    #[arg(long)]
    random: Option<usize>,
    /// Seed of the random-point stream.
    #[arg(long)]
    seed: Option<u64>,
    /// Extra constraint, e.g. 'a>b'; replaces a built-in one over the same variables.
    #[arg(long = "domain")]
    domains: Vec<String>,
    /// Variable domain: name=lo:hi, name=int:lo:hi or name=choice:v1,v2,...
    #[arg(long = "var")]
    vars: Vec<String>,
    /// Override the property's slack / residual tolerance.
    #[arg(long)]
    slack_tol: Option<f64>,
    /// Pass only if at least one confirmed violation is found.
    #[arg(long)]
    expect_violations: bool,
    /// Free-form label copied into the report.
    #[arg(long)]
    label: Option<String>,
    #[command(flatten)]
    precision: PrecisionArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SuiteArgs {
    /// About a tenth of the full sample sizes.
    #[arg(long)]
    quick: bool,
    /// Base seed; each property mixes in a hash of its name.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    precision: PrecisionArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct IdentityArgs {
    /// Only the algebraic identities (no finite differences).
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    suite: SuiteArgs,
}

#[derive(Args)]
struct PrecisionArgs {
    /// Truncation bound for infinite products.
    #[arg(long)]
    tail_bound: Option<f64>,
    /// Minimum terms of the eta series.
    #[arg(long)]
    eta_terms: Option<u32>,
    /// Relative finite-difference step.
    #[arg(long)]
    fd_step: Option<f64>,
    /// Residual tolerance for exact identities.
    #[arg(long)]
    report_tol: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format (default json).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Zero wall-clock fields so identical runs give identical bytes.
    #[arg(long)]
    reproducible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_format(v: &str) -> Result<Format, UsageError> {
    Format::from_str(v, true).map_err(|_| UsageError(format!("format must be json or csv, got `{v}`")))
}

impl PrecisionArgs {
    fn resolve(&self, cfg: &FileConfig) -> anyhow::Result<PrecisionPolicy> {
        let mut p = PrecisionPolicy::default();
        p.product_tail_bound = self
            .tail_bound
            .or(cfg.parsed("tail_bound")?)
            .unwrap_or(p.product_tail_bound);
        p.eta_terms = self.eta_terms.or(cfg.parsed("eta_terms")?).unwrap_or(p.eta_terms);
        p.fd_step = self.fd_step.or(cfg.parsed("fd_step")?).unwrap_or(p.fd_step);
        p.report_tol = self
            .report_tol
            .or(cfg.parsed("report_tol")?)
            .unwrap_or(p.report_tol);
        p.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(p)
    }
}

struct Output {
    format: Format,
    path: Option<PathBuf>,
    reproducible: bool,
}

impl OutputArgs {
    fn resolve(&self, cfg: &FileConfig) -> anyhow::Result<Output> {
        let format = match (self.format, cfg.get("format")) {
            (Some(f), _) => f,
            (None, Some(v)) => parse_format(v)?,
            (None, None) => Format::Json,
        };
        Ok(Output {
            format,
            path: self.output.clone().or(cfg.get("output").map(PathBuf::from)),
            reproducible: self.reproducible || cfg.flag("reproducible")?,
        })
    }
}

fn parse_var(s: &str) -> Result<(String, VarDomain), UsageError> {
    let bad = || {
        UsageError(format!(
            "--var `{s}`: expected name=lo:hi, name=int:lo:hi or name=choice:v1,v2"
        ))
    };
    let (name, spec) = s.split_once('=').ok_or_else(bad)?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
    let dom = if let Some(rest) = spec.strip_prefix("int:") {
        let (lo, hi) = rest.split_once(':').ok_or_else(bad)?;
        let int = |v: &str| v.trim().parse::<i64>().map_err(|_| bad());
        VarDomain::Integer {
            lo: int(lo)?,
            hi: int(hi)?,
        }
    } else if let Some(rest) = spec.strip_prefix("choice:") {
        VarDomain::Choice {
            values: rest.split(',').map(num).collect::<Result<_, _>>()?,
        }
    } else {
        let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
        VarDomain::Range {
            lo: num(lo)?,
            hi: num(hi)?,
        }
    };
    Ok((name.trim().to_string(), dom))
}

fn emit(out: &Output, body: String) -> anyhow::Result<()> {
    match &out.path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            if !body.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn summary_line(r: &Report) -> String {
    format!(
        "{:<6} {:<32} {:<24} tested={} violations={} skips={} min_slack={}",
        if r.passed { "PASS" } else { "FAIL" },
        r.property_id,
        r.label.as_deref().unwrap_or(""),
        r.points_tested,
        r.violations,
        r.domain_skips,
        r.min_slack.map_or("-".into(), |v| format!("{v:.3e}")),
    )
}

/// Writes one report (single scan) or a collection with a summary.
fn write_reports(out: &Output, name: &str, mut reports: Vec<Report>, single: bool) -> anyhow::Result<bool> {
    if out.reproducible {
        reports.iter_mut().for_each(Report::make_reproducible);
    }
    let passed = reports.iter().all(|r| r.passed);
    let body = match out.format {
        Format::Csv => reports_to_csv(&reports)?,
        Format::Json if single => to_sorted_json(&reports[0])?,
        Format::Json => {
            let failed: Vec<String> = reports
                .iter()
                .filter(|r| !r.passed)
                .map(|r| match &r.label {
                    Some(l) => format!("{}[{l}]", r.property_id),
                    None => r.property_id.clone(),
                })
                .collect();
            to_sorted_json(&json!({
                "name": name,
                "summary": {
                    "properties": reports.len(),
                    "passed": reports.len() - failed.len(),
                    "failed": failed,
                    "all_passed": passed,
                },
                "reports": reports,
            }))?
        }
    };
    emit(out, body)?;
    if out.path.is_some() {
        for r in &reports {
            println!("{}", summary_line(r));
        }
    }
    Ok(passed)
}

fn run_eval(a: &EvalArgs, cfg: &FileConfig) -> anyhow::Result<()> {
    if a.list {
        for (n, args) in eval::names() {
            println!(
                "{n} {}",
                args.iter().map(|k| format!("{k}=")).collect::<Vec<_>>().join(" ")
            );
        }
        return Ok(());
    }
    let name = a
        .name
        .as_deref()
        .ok_or_else(|| UsageError("eval needs an operation name".into()))?;
    let pol = a.precision.resolve(cfg)?;
    let (op, args) = eval::parse_args(name, &a.assignments)?;
    let value = op(&args, &pol)?;
    // plain text unless JSON is asked for explicitly
    let format = match (a.format, cfg.get("format")) {
        (Some(f), _) => Some(f),
        (None, Some(v)) => Some(parse_format(v)?),
        (None, None) => None,
    };
    let shown = eval::format_g(value, 15);
    if format == Some(Format::Json) {
        println!(
            "{}",
            to_sorted_json(
                &json!({ "operation": name, "value": value, "display": shown, "precision": pol })
            )?
        );
    } else {
        println!("{shown}");
        println!(
            "precision: product_tail_bound={:e} eta_terms={} fd_step={:e} report_tol={:e}",
            pol.product_tail_bound, pol.eta_terms, pol.fd_step, pol.report_tol
        );
    }
    Ok(())
}

fn suite_options(a: &SuiteArgs, cfg: &FileConfig) -> anyhow::Result<SuiteOptions> {
    let mut o = SuiteOptions::default();
    o.quick = a.quick || cfg.flag("quick")?;
    o.seed = a.seed.or(cfg.parsed("seed")?).unwrap_or(o.seed);
    o.precision = a.precision.resolve(cfg)?;
    Ok(o)
}

fn run_scan(a: &ScanArgs, cfg: &FileConfig) -> anyhow::Result<bool> {
    let out = a.output.resolve(cfg)?;
    let property = a
        .property
        .clone()
        .or(cfg.get("property").map(String::from))
        .ok_or_else(|| UsageError("scan needs --property".into()))?;
    let precision = a.precision.resolve(cfg)?;
    let grid = a.grid.or(cfg.parsed("grid")?);
    let random = a.random.or(cfg.parsed("random")?);
    let seed = a.seed.or(cfg.parsed("seed")?);

    if property == "check_identity_suite" {
        let opts = SuiteOptions {
            seed: seed.unwrap_or(SuiteOptions::default().seed),
            precision,
            ..Default::default()
        };
        let specs: Vec<ScanSpec> = identity_specs(&opts, true)
            .into_iter()
            .map(|mut s| {
                s.grid_points = grid.unwrap_or(s.grid_points);
                s.random_points = random.unwrap_or(s.random_points);
                s
            })
            .collect();
        let reports = run_specs(&specs, Execution::Parallel)?;
        return write_reports(&out, &property, reports, false);
    }

    let mut spec = ScanSpec::new(property.clone()).precision(precision);
    if let Some(g) = grid {
        spec.grid_points = g;
    }
    if let Some(r) = random {
        spec.random_points = r;
    }
    if let Some(s) = seed {
        spec.seed = s;
    }
    spec.constraints = if a.domains.is_empty() {
        cfg.all("domain")
    } else {
        a.domains.clone()
    };
    let vars = if a.vars.is_empty() {
        cfg.all("var")
    } else {
        a.vars.clone()
    };
    for v in &vars {
        let (n, d) = parse_var(v)?;
        spec.domains.insert(n, d);
    }
    spec.slack_tol = a.slack_tol.or(cfg.parsed("slack_tol")?);
    if a.expect_violations || cfg.flag("expect_violations")? {
        spec.expect_violations = Some(true);
    }
    spec.label = a.label.clone().or(cfg.get("label").map(String::from));
    let report = abqp::verify::run_scan(&spec)?;
    write_reports(&out, &property, vec![report], true)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => cfg.parsed::<usize>("threads")?,
    };
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    let passed = match &cli.cmd {
        Cmd::Eval(a) => {
            run_eval(a, &cfg)?;
            true
        }
        Cmd::Scan(a) => run_scan(a, &cfg)?,
        Cmd::Suite(a) => {
            let opts = suite_options(a, &cfg)?;
            let reports = abqp::verify::run_suite(&opts)?;
            write_reports(&a.output.resolve(&cfg)?, "suite", reports, false)?
        }
        Cmd::Identities(a) => {
            let opts = suite_options(&a.suite, &cfg)?;
            let exact = a.exact || cfg.flag("exact")?;
            let reports = run_specs(&identity_specs(&opts, exact), Execution::Parallel)?;
            write_reports(&a.suite.output.resolve(&cfg)?, "identities", reports, false)?
        }
    };
    if passed {
        Ok(())
    } else {
        Err(Unmet("one or more scans did not meet their expectation".into()).into())
    }
}

fn report_error(kind: &str, message: String, code: u8) -> ExitCode {
    let body = json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(
                e.kind(),
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return report_error("usage", e.render().to_string().trim().to_string(), 2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(u) = e.downcast_ref::<Unmet>() {
                return report_error("expectation_unmet", u.to_string(), 1);
            }
            if let Some(u) = e.downcast_ref::<UsageError>() {
                return report_error("usage", u.to_string(), 2);
            }
            if let Some(le) = e.downcast_ref::<abqp::Error>() {
                let code = match le {
                    abqp::Error::UnknownProperty(_)
                    | abqp::Error::InvalidSpec(_)
                    | abqp::Error::EmptyDomain(_)
                    | abqp::Error::Policy(_) => 2,
                    _ => 3,
                };
                return report_error(le.kind(), le.to_string(), code);
            }
            report_error("io", format!("{e:#}"), 3)
        }
    }
}
