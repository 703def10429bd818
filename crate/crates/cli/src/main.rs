//! `samplab` — command-line front end for the sampled-data control
//! simulation laboratory.
//!
//! Verbs: `run` (simulate a scenario and emit artifacts), `masp` (compute a
//! maximum allowable sampling period), `sweep` (one run per parameter
//! value with a summary table), `list-scenarios`, and `replay` (re-run the
//! certificate checks on stored trace/event files).
//!
//! Exit codes: 0 all requested checks pass; 1 a check failed (or no
//! positive sampling period exists for `masp`); 2 configuration error;
//! 3 simulation blow-up or Zeno-suspicion abort.

mod config;
mod plot;

use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use samplab::{
    analysis, build_scenario, interevent_stats, masp, named, read_events_csv, simulate,
    ultimate_bound, AnalysisReport, Error, Scenario, SimResult, Termination, Trace,
};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "samplab",
    about = "Simulation laboratory for event-triggered and periodic sampled-data control",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate a scenario and write trace, events, report and plot files.
    Run(RunArgs),
    /// Compute the maximum allowable sampling period for a gain pair.
    Masp(MaspArgs),
    /// Run a scenario once per parameter value and summarize.
    Sweep(SweepArgs),
    /// List the built-in scenario ids.
    ListScenarios,
    /// Re-run the certificate checks on a stored trace and event log.
    Replay(ReplayArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario id or path to a TOML run config.
    target: String,
    /// Override a scenario parameter, e.g. `--set lambda=2`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Simulation horizon (shorthand for `--set t_end=...`).
    #[arg(long = "T-end", alias = "t-end", value_name = "SECONDS")]
    t_end: Option<f64>,
    /// Output directory for artifacts.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Checks to evaluate, comma-separated (lyapunov, bibs, udot, zeno,
    /// shadow, interevent).
    #[arg(long, value_delimiter = ',', value_name = "NAMES")]
    checks: Option<Vec<String>>,
    /// Skip writing trace.csv and events.csv.
    #[arg(long)]
    no_csv: bool,
    /// Skip writing report.json.
    #[arg(long)]
    no_report: bool,
    /// Skip writing plot.svg.
    #[arg(long)]
    no_svg: bool,
}

#[derive(clap::Args)]
struct MaspArgs {
    /// Registry id of the radial bound function U.
    u: String,
    /// Registry id of the gain function.
    gamma: String,
    /// Probe radius.
    #[arg(long, default_value_t = 1.0)]
    r0: f64,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Scenario id or path to a TOML run config.
    target: String,
    /// Name of the parameter to sweep.
    #[arg(long)]
    param: String,
    /// Comma-separated parameter values, one run each.
    #[arg(long, value_name = "V1,V2,...")]
    values: String,
    /// Base override applied to every run, e.g. `--set t_end=10`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; each run writes into a subdirectory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Checks to evaluate per run, comma-separated.
    #[arg(long, value_delimiter = ',', value_name = "NAMES")]
    checks: Option<Vec<String>>,
}

#[derive(clap::Args)]
struct ReplayArgs {
    /// Scenario id or path to a TOML run config (supplies the certificates).
    target: String,
    /// Stored trace CSV.
    #[arg(long, value_name = "FILE")]
    trace: PathBuf,
    /// Stored event-log CSV.
    #[arg(long, value_name = "FILE")]
    events: PathBuf,
    /// Checks to evaluate, comma-separated.
    #[arg(long, value_delimiter = ',', value_name = "NAMES")]
    checks: Option<Vec<String>>,
}

const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_CONFIG: i32 = 2;
const EXIT_RUNTIME: i32 = 3;

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Run(a) => cmd_run(a),
        Cmd::Masp(a) => cmd_masp(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::ListScenarios => cmd_list(),
        Cmd::Replay(a) => cmd_replay(a),
    };
    std::process::exit(code);
}

fn fail(e: &Error, code: i32) -> i32 {
    eprintln!("error: {e}");
    code
}

/// Builds the resolved config for a run-like verb from the target plus
/// command-line overlays.
fn resolve(
    target: &str,
    sets: &[String],
    t_end: Option<f64>,
    out: Option<&PathBuf>,
    checks: Option<&Vec<String>>,
) -> samplab::Result<RunConfig> {
    let mut cfg = config::load(target)?;
    for s in sets {
        let (k, v) = config::parse_set(s)?;
        cfg.overrides.insert(k, v);
    }
    if let Some(t) = t_end {
        cfg.overrides.insert("t_end".into(), t);
    }
    if let Some(dir) = out {
        cfg.output = dir.clone();
    }
    if let Some(c) = checks {
        cfg.checks = c.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

struct RunOutcome {
    scenario: Scenario,
    result: SimResult,
    analysis: AnalysisReport,
}

/// Builds, simulates, checks and writes artifacts for one resolved config.
/// Returns the exit code alongside the error so callers (notably `sweep`)
/// can keep going.
fn execute(cfg: &RunConfig) -> Result<RunOutcome, (i32, Error)> {
    let scenario =
        build_scenario(&cfg.scenario, &cfg.overrides).map_err(|e| (EXIT_CONFIG, e))?;
    let result = simulate(&scenario).map_err(|e| (EXIT_RUNTIME, e))?;
    // a failing check is a finding, not an error; only a missing certificate
    // or an empty trace gets here
    let analysis =
        analysis::run_checks(&scenario, &result, &cfg.checks).map_err(|e| (EXIT_CONFIG, e))?;
    write_artifacts(cfg, &result, &analysis).map_err(|e| (EXIT_CONFIG, e))?;
    Ok(RunOutcome {
        scenario,
        result,
        analysis,
    })
}

#[derive(serde::Serialize)]
struct RunReport<'a> {
    config: &'a RunConfig,
    analysis: &'a AnalysisReport,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> samplab::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn write_artifacts(
    cfg: &RunConfig,
    result: &SimResult,
    analysis: &AnalysisReport,
) -> samplab::Result<()> {
    std::fs::create_dir_all(&cfg.output)?;
    if cfg.emit.csv {
        let mut buf = Vec::new();
        result.trace.write_csv(&mut buf)?;
        write_atomic(&cfg.output.join("trace.csv"), &buf)?;
        let mut buf = Vec::new();
        samplab::write_events_csv(&result.events, &mut buf)?;
        write_atomic(&cfg.output.join("events.csv"), &buf)?;
    }
    if cfg.emit.report {
        let report = RunReport {
            config: cfg,
            analysis,
        };
        let mut buf = serde_json::to_vec_pretty(&report)
            .map_err(|e| Error::Parse(format!("report serialization: {e}")))?;
        buf.push(b'\n');
        write_atomic(&cfg.output.join("report.json"), &buf)?;
    }
    if cfg.emit.svg {
        write_atomic(&cfg.output.join("plot.svg"), plot::render(result).as_bytes())?;
    }
    Ok(())
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::Horizon => "horizon",
        Termination::Converged => "converged",
    }
}

fn print_outcome(cfg: &RunConfig, out: &RunOutcome) {
    println!(
        "scenario {}: {} events, terminated at t = {:.6} ({})",
        cfg.scenario,
        out.result.events.len(),
        out.result.trace.rows.last().map_or(f64::NAN, |r| r.t),
        termination_name(out.result.termination),
    );
    for rec in &out.analysis.checks {
        println!(
            "check {}: {} (worst margin {:.3e} at {})",
            rec.name,
            if rec.pass { "pass" } else { "FAIL" },
            rec.worst_margin,
            rec.location,
        );
    }
}

fn cmd_run(args: RunArgs) -> i32 {
    let cfg = match resolve(
        &args.target,
        &args.set,
        args.t_end,
        args.out.as_ref(),
        args.checks.as_ref(),
    ) {
        Ok(mut cfg) => {
            cfg.emit.csv &= !args.no_csv;
            cfg.emit.report &= !args.no_report;
            cfg.emit.svg &= !args.no_svg;
            cfg
        }
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    match execute(&cfg) {
        Ok(out) => {
            print_outcome(&cfg, &out);
            if out.analysis.all_pass {
                0
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err((code, e)) => fail(&e, code),
    }
}

fn cmd_masp(args: MaspArgs) -> i32 {
    let lookup = |id: &str| {
        named(id).ok_or_else(|| {
            Error::Config(format!(
                "unknown function `{id}` (known: {})",
                samplab::kfun::NAMED_FUNCTIONS.join(", ")
            ))
        })
    };
    let (u, gamma) = match (lookup(&args.u), lookup(&args.gamma)) {
        (Ok(u), Ok(g)) => (u, g),
        (Err(e), _) | (_, Err(e)) => return fail(&e, EXIT_CONFIG),
    };
    match masp(&u, &gamma, args.r0) {
        Ok(m) => {
            println!("{}", serde_json::to_string_pretty(&m).unwrap());
            0
        }
        Err(e @ (Error::NoPositiveMasp | Error::UnboundedInterval)) => fail(&e, EXIT_CHECK_FAILED),
        Err(e) => fail(&e, EXIT_CONFIG),
    }
}

fn float_cell(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| format!("{v:.16e}"))
}

fn cmd_sweep(args: SweepArgs) -> i32 {
    let tokens: Vec<&str> = args
        .values
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return fail(
            &Error::Config("sweep needs a nonempty --values list".into()),
            EXIT_CONFIG,
        );
    }
    let mut values = Vec::new();
    for t in &tokens {
        match t.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) => {
                return fail(
                    &Error::Parse(format!("sweep value `{t}` is not a number")),
                    EXIT_CONFIG,
                )
            }
        }
    }
    let base = match resolve(
        &args.target,
        &args.set,
        None,
        args.out.as_ref(),
        args.checks.as_ref(),
    ) {
        Ok(cfg) => cfg,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };

    let mut worst = 0;
    let mut summary = String::from(
        "value,events,min_interval,tail_interval,final_plant_norm,ultimate_bound\n",
    );
    for (tok, v) in tokens.iter().zip(&values) {
        let mut cfg = base.clone();
        cfg.overrides.insert(args.param.clone(), *v);
        cfg.output = base.output.join(format!("{}-{tok}", args.param));
        match execute(&cfg) {
            Ok(out) => {
                print_outcome(&cfg, &out);
                if !out.analysis.all_pass {
                    worst = worst.max(EXIT_CHECK_FAILED);
                }
                let events = &out.result.events;
                let stats = interevent_stats(events, None);
                let trace = &out.result.trace;
                let final_norm = trace
                    .rows
                    .last()
                    .map(|r| out.scenario.plant_state_norm(&r.w));
                let ub = ultimate_bound(trace, 0.2, &|w| out.scenario.plant_state_norm(w)).ok();
                summary.push_str(&format!(
                    "{tok},{},{},{},{},{}\n",
                    events.len(),
                    float_cell(stats.min),
                    float_cell(stats.tail_mean),
                    float_cell(final_norm),
                    float_cell(ub),
                ));
            }
            Err((code, e)) => {
                eprintln!("error ({} = {tok}): {e}", args.param);
                worst = worst.max(code);
                summary.push_str(&format!("{tok},,,,,\n"));
            }
        }
    }
    if let Err(e) = std::fs::create_dir_all(&base.output)
        .map_err(Error::from)
        .and_then(|()| write_atomic(&base.output.join("summary.csv"), summary.as_bytes()))
    {
        return fail(&e, EXIT_CONFIG);
    }
    println!("wrote {}", base.output.join("summary.csv").display());
    worst
}

fn cmd_list() -> i32 {
    for id in samplab::SCENARIO_IDS {
        println!("{id}");
    }
    0
}

fn cmd_replay(args: ReplayArgs) -> i32 {
    let cfg = match resolve(&args.target, &[], None, None, args.checks.as_ref()) {
        Ok(cfg) => cfg,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let scenario = match build_scenario(&cfg.scenario, &cfg.overrides) {
        Ok(s) => s,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let read = || -> samplab::Result<SimResult> {
        let trace = Trace::read_csv(BufReader::new(std::fs::File::open(&args.trace)?))?;
        let events = read_events_csv(BufReader::new(std::fs::File::open(&args.events)?))?;
        Ok(SimResult {
            trace,
            events,
            termination: Termination::Horizon,
        })
    };
    let result = match read() {
        Ok(r) => r,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let report = match analysis::run_checks(&scenario, &result, &cfg.checks) {
        Ok(r) => r,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    if report.all_pass {
        0
    } else {
        EXIT_CHECK_FAILED
    }
}
