//! Configuration-driven command-line front end.
//!
//! One subcommand per analysis: `classify` the channel, resolve the
//! achievable `exponents`, `evaluate` the schemes exactly across the
//! blocklength grid, `simulate` them by Monte Carlo, and run the oracle
//! `selftest` battery. Machine output goes to `--out` when given and to
//! stdout otherwise, as CSV or as JSON (`--format structured`); a short
//! human summary goes to the other stream.
//!
//! Exit codes: 0 on success, 2 on validation or usage errors, 3 when an
//! enumeration hits its resource cap or the self-test battery fails.

use crate::channel::{check_useless_communication_condition, classify, gamma_min, gamma_quotient};
use crate::config::{ProblemConfig, ProblemInstance};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate_exact, fit_exponent, simulate, EvaluationResult};
use crate::exponents::{resolve_exponents, ExponentReport};
use crate::schemes::{resolve_instance, Regime};
use crate::selftest::run_selftests;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "steinx",
    version,
    about = "Stein exponents of distributed detection over a discrete memoryless channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the channel as fully or partially connected.
    Classify(CommonArgs),
    /// Resolve the achievable error exponents for every regime.
    Exponents(CommonArgs),
    /// Exactly evaluate the schemes across the blocklength grid.
    Evaluate(CommonArgs),
    /// Estimate scheme performance by seeded Monte Carlo simulation.
    Simulate(CommonArgs),
    /// Run the oracle cross-check battery.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Path to the JSON problem configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Write machine output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the config's random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the config's Monte Carlo trial count.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Optional config to validate as an extra battery item; the battery
    /// itself is problem-independent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write machine output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Structured,
}

/// CSV cell rendering: full precision, locale-independent, infinities
/// spelled out.
fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

/// JSON value for a float; non-finite values become strings so they survive
/// serialization.
fn jf(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::String(fmt_float(v))
    }
}

struct CommandOutput {
    human: String,
    machine: String,
}

fn theory_exponent(report: &ExponentReport, regime: Regime) -> f64 {
    match regime {
        Regime::SublinearUses => report.sublinear_uses,
        Regime::StrictCost => report.strict_cost,
        Regime::ExpectedCostH0 => report.expected_cost_h0,
        Regime::ExpectedCostBoth => report.expected_cost_both,
        Regime::LocalOnly => report.local_only,
    }
}

fn cmd_classify(inst: &ProblemInstance, format: OutputFormat) -> Result<CommandOutput> {
    let report = classify(&inst.channel)?;
    let gmin = gamma_min(&inst.channel);
    let (human, machine) = match report.triple {
        Some(t) => {
            let human = format!(
                "partially connected: x0={}, x1={}, y*={} (gamma={})",
                t.x0, t.x1, t.y_star, t.gamma_x0
            );
            let machine = match format {
                OutputFormat::Csv => {
                    let mut s = String::from("key,value\n");
                    s.push_str("is_fully_connected,false\n");
                    s.push_str(&format!("x0,{}\n", t.x0));
                    s.push_str(&format!("x1,{}\n", t.x1));
                    s.push_str(&format!("y_star,{}\n", t.y_star));
                    s.push_str(&format!("gamma_x0,{}\n", fmt_float(t.gamma_x0)));
                    s
                }
                OutputFormat::Structured => serde_json::to_string_pretty(&json!({
                    "is_fully_connected": false,
                    "triple": {"x0": t.x0, "x1": t.x1, "y_star": t.y_star},
                    "gamma_x0": jf(t.gamma_x0),
                }))? + "\n",
            };
            (human, machine)
        }
        None => {
            let quotient = gamma_quotient(&inst.channel)?;
            let human = format!(
                "fully connected: gamma_min={gmin}, gamma_quotient={quotient}"
            );
            let machine = match format {
                OutputFormat::Csv => {
                    let mut s = String::from("key,value\n");
                    s.push_str("is_fully_connected,true\n");
                    s.push_str(&format!("gamma_min,{}\n", fmt_float(gmin)));
                    s.push_str(&format!("gamma_quotient,{}\n", fmt_float(quotient)));
                    s
                }
                OutputFormat::Structured => serde_json::to_string_pretty(&json!({
                    "is_fully_connected": true,
                    "gamma_min": jf(gmin),
                    "gamma_quotient": jf(quotient),
                }))? + "\n",
            };
            (human, machine)
        }
    };
    Ok(CommandOutput { human, machine })
}

fn report_fields(report: &ExponentReport) -> Vec<(&'static str, f64)> {
    vec![
        ("e1", report.e1),
        ("e2", report.e2),
        ("e3", report.e3),
        ("local_only", report.local_only),
        ("sublinear_uses", report.sublinear_uses),
        ("strict_cost", report.strict_cost),
        ("expected_cost_h0", report.expected_cost_h0),
        ("expected_cost_both", report.expected_cost_both),
    ]
}

fn cmd_exponents(inst: &ProblemInstance, format: OutputFormat) -> Result<CommandOutput> {
    let report = resolve_exponents(&inst.p_uv, &inst.q_uv, &inst.channel, &inst.cost)?;
    let useless = check_useless_communication_condition(&inst.p_uv, &inst.q_uv);
    let case = serde_json::to_value(report.channel_case)?;
    let case_str = case.as_str().unwrap_or("unknown").to_string();

    let mut human = format!("channel case: {case_str}\n");
    for (name, v) in report_fields(&report) {
        human.push_str(&format!("{name:>20}: {v:.8}\n"));
    }
    human.push_str(&format!("communication_useless: {useless}"));

    let machine = match format {
        OutputFormat::Csv => {
            let mut s = String::from("key,value\n");
            s.push_str(&format!("channel_case,{case_str}\n"));
            for (name, v) in report_fields(&report) {
                s.push_str(&format!("{name},{}\n", fmt_float(v)));
            }
            s.push_str(&format!("communication_useless,{useless}\n"));
            s
        }
        OutputFormat::Structured => {
            let mut map = Map::new();
            map.insert("channel_case".into(), case);
            for (name, v) in report_fields(&report) {
                map.insert(name.into(), jf(v));
            }
            map.insert("communication_useless".into(), json!(useless));
            serde_json::to_string_pretty(&Value::Object(map))? + "\n"
        }
    };
    Ok(CommandOutput { human, machine })
}

struct GridRow {
    result: EvaluationResult,
    theory: f64,
    exact_alpha: Option<f64>,
    exact_log2_beta: Option<f64>,
}

fn run_grid(
    inst: &ProblemInstance,
    monte_carlo: bool,
) -> Result<(Vec<(Regime, Vec<GridRow>, Option<f64>)>, ExponentReport)> {
    let report = resolve_exponents(&inst.p_uv, &inst.q_uv, &inst.channel, &inst.cost)?;
    let mut blocks = Vec::new();
    for &regime in &inst.regimes {
        let theory = theory_exponent(&report, regime);
        let mut rows = Vec::new();
        for &n in &inst.grid {
            let scheme = resolve_instance(
                regime,
                n,
                &inst.p_uv,
                &inst.q_uv,
                &inst.channel,
                &inst.cost,
                &inst.schedules,
                inst.mu,
            )?;
            let row = if monte_carlo {
                let mc = simulate(
                    &scheme,
                    &inst.p_uv,
                    &inst.q_uv,
                    &inst.channel,
                    &inst.cost,
                    inst.seed,
                    inst.trials,
                )?;
                let exact = evaluate_exact(&scheme, &inst.p_uv, &inst.q_uv).ok();
                GridRow {
                    theory,
                    exact_alpha: exact.as_ref().map(|e| e.alpha),
                    exact_log2_beta: exact.as_ref().map(|e| e.log2_beta),
                    result: mc,
                }
            } else {
                let exact = evaluate_exact(&scheme, &inst.p_uv, &inst.q_uv).map_err(|e| {
                    eprintln!("while evaluating {regime} at n = {n}");
                    e
                })?;
                GridRow {
                    theory,
                    exact_alpha: None,
                    exact_log2_beta: None,
                    result: exact,
                }
            };
            rows.push(row);
        }
        let points: Vec<(usize, f64)> = rows
            .iter()
            .map(|r| (r.result.n, r.result.log2_beta))
            .collect();
        let fit = fit_exponent(&points).ok().map(|f| f.exponent);
        blocks.push((regime, rows, fit));
    }
    Ok((blocks, report))
}

fn grid_csv(blocks: &[(Regime, Vec<GridRow>, Option<f64>)], monte_carlo: bool) -> String {
    let mut s = String::from(
        "regime,n,alpha,log2_beta,expected_cost_H0,expected_cost_H1,theory_exponent,fit_slope",
    );
    if monte_carlo {
        s.push_str(",alpha_ci_halfwidth,beta_ci_halfwidth,beta_is_upper_bound,alpha_exact,log2_beta_exact");
    }
    s.push('\n');
    for (regime, rows, fit) in blocks {
        for row in rows {
            let r = &row.result;
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}",
                regime,
                r.n,
                fmt_float(r.alpha),
                fmt_float(r.log2_beta),
                fmt_float(r.expected_cost_h0),
                fmt_float(r.expected_cost_h1),
                fmt_float(row.theory),
                fmt_float(fit.unwrap_or(f64::NAN)),
            ));
            if monte_carlo {
                s.push_str(&format!(
                    ",{},{},{},{},{}",
                    fmt_float(r.alpha_ci_halfwidth.unwrap_or(f64::NAN)),
                    fmt_float(r.beta_ci_halfwidth.unwrap_or(f64::NAN)),
                    r.beta_is_upper_bound,
                    row.exact_alpha.map(fmt_float).unwrap_or_default(),
                    row.exact_log2_beta.map(fmt_float).unwrap_or_default(),
                ));
            }
            s.push('\n');
        }
    }
    s
}

fn grid_json(
    blocks: &[(Regime, Vec<GridRow>, Option<f64>)],
    report: &ExponentReport,
    monte_carlo: bool,
) -> Result<String> {
    let mut rows_json = Vec::new();
    for (regime, rows, fit) in blocks {
        for row in rows {
            let r = &row.result;
            let mut m = Map::new();
            m.insert("regime".into(), serde_json::to_value(regime)?);
            m.insert("n".into(), json!(r.n));
            m.insert("alpha".into(), jf(r.alpha));
            m.insert("log2_beta".into(), jf(r.log2_beta));
            m.insert("expected_cost_h0".into(), jf(r.expected_cost_h0));
            m.insert("expected_cost_h1".into(), jf(r.expected_cost_h1));
            m.insert("theory_exponent".into(), jf(row.theory));
            m.insert("fit_slope".into(), jf(fit.unwrap_or(f64::NAN)));
            if monte_carlo {
                m.insert("trials".into(), json!(r.trials));
                m.insert(
                    "alpha_ci_halfwidth".into(),
                    jf(r.alpha_ci_halfwidth.unwrap_or(f64::NAN)),
                );
                m.insert(
                    "beta_ci_halfwidth".into(),
                    jf(r.beta_ci_halfwidth.unwrap_or(f64::NAN)),
                );
                m.insert("beta_is_upper_bound".into(), json!(r.beta_is_upper_bound));
                m.insert(
                    "alpha_exact".into(),
                    row.exact_alpha.map(jf).unwrap_or(Value::Null),
                );
                m.insert(
                    "log2_beta_exact".into(),
                    row.exact_log2_beta.map(jf).unwrap_or(Value::Null),
                );
            }
            rows_json.push(Value::Object(m));
        }
    }
    let mut report_map = Map::new();
    for (name, v) in report_fields(report) {
        report_map.insert(name.into(), jf(v));
    }
    report_map.insert(
        "channel_case".into(),
        serde_json::to_value(report.channel_case)?,
    );
    Ok(serde_json::to_string_pretty(&json!({
        "rows": rows_json,
        "exponents": Value::Object(report_map),
    }))? + "\n")
}

fn cmd_grid(
    inst: &ProblemInstance,
    format: OutputFormat,
    monte_carlo: bool,
) -> Result<CommandOutput> {
    let (blocks, report) = run_grid(inst, monte_carlo)?;
    let label = if monte_carlo { "simulated" } else { "evaluated" };
    let mut human = String::new();
    for (regime, rows, fit) in &blocks {
        human.push_str(&format!(
            "{regime}: {label} {} blocklengths, theory exponent {:.6}, fit slope {}\n",
            rows.len(),
            rows.first().map(|r| r.theory).unwrap_or(f64::NAN),
            fit.map(|f| format!("{f:.6}")).unwrap_or_else(|| "n/a".into()),
        ));
    }
    let machine = match format {
        OutputFormat::Csv => grid_csv(&blocks, monte_carlo),
        OutputFormat::Structured => grid_json(&blocks, &report, monte_carlo)?,
    };
    Ok(CommandOutput {
        human: human.trim_end().to_string(),
        machine,
    })
}

fn cmd_selftest(args: &SelftestArgs) -> Result<(CommandOutput, bool)> {
    let mut results = run_selftests();
    if let Some(path) = &args.config {
        let parsed = ProblemConfig::from_path(path).and_then(|c| c.build().map(|_| ()));
        results.push(crate::selftest::SelfTestItem {
            name: "config_validates",
            passed: parsed.is_ok(),
            detail: match parsed {
                Ok(()) => format!("{} parses and validates", path.display()),
                Err(e) => format!("{}: {e}", path.display()),
            },
        });
    }
    let all_passed = results.iter().all(|r| r.passed);
    let mut human = String::new();
    for r in &results {
        human.push_str(&format!(
            "[{}] {}: {}\n",
            if r.passed { "pass" } else { "FAIL" },
            r.name,
            r.detail
        ));
    }
    human.push_str(&format!(
        "{}/{} checks passed",
        results.iter().filter(|r| r.passed).count(),
        results.len()
    ));
    let machine = match args.format {
        OutputFormat::Csv => {
            let mut s = String::from("name,passed,detail\n");
            for r in &results {
                s.push_str(&format!(
                    "{},{},\"{}\"\n",
                    r.name,
                    r.passed,
                    r.detail.replace('"', "'")
                ));
            }
            s
        }
        OutputFormat::Structured => serde_json::to_string_pretty(&results)? + "\n",
    };
    Ok((CommandOutput { human, machine }, all_passed))
}

fn load_instance(args: &CommonArgs) -> Result<ProblemInstance> {
    let cfg = ProblemConfig::from_path(&args.config)?;
    let mut inst = cfg.build()?;
    if let Some(seed) = args.seed {
        inst.seed = seed;
    }
    if let Some(trials) = args.trials {
        if trials == 0 {
            return Err(Error::InvalidConfig {
                detail: "trials must be positive".into(),
            });
        }
        inst.trials = trials;
    }
    Ok(inst)
}

fn emit(output: &CommandOutput, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, &output.machine)?;
            println!("{}", output.human);
        }
        None => {
            eprintln!("{}", output.human);
            print!("{}", output.machine);
        }
    }
    Ok(())
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResourceLimit { .. } => 3,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Classify(args) => {
            let inst = load_instance(args)?;
            emit(&cmd_classify(&inst, args.format)?, &args.out)?;
            Ok(0)
        }
        Command::Exponents(args) => {
            let inst = load_instance(args)?;
            emit(&cmd_exponents(&inst, args.format)?, &args.out)?;
            Ok(0)
        }
        Command::Evaluate(args) => {
            let inst = load_instance(args)?;
            emit(&cmd_grid(&inst, args.format, false)?, &args.out)?;
            Ok(0)
        }
        Command::Simulate(args) => {
            let inst = load_instance(args)?;
            emit(&cmd_grid(&inst, args.format, true)?, &args.out)?;
            Ok(0)
        }
        Command::Selftest(args) => {
            let (output, all_passed) = cmd_selftest(args)?;
            emit(&output, &args.out)?;
            Ok(if all_passed { 0 } else { 3 })
        }
    }
}

/// Parses the command line, runs the command, and returns the process exit
/// code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
