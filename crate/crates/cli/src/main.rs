//! Command line front end: builds orders and predicates from textual
//! arguments, runs the evaluation engines and probes, and emits machine
//! readable JSON artifacts.
//!
//! Exit codes: 0 success, 1 malformed input or rejected configuration,
//! 2 contract violation (fixpoint failure, rank-descent failure, engine
//! disagreement), 3 fuel exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use etr_core::probe::{check_fixpoint, find_descending_chain};
use etr_core::setr::{DescentReport, SetrSession};
use etr_core::step::{predicate_from_json, StepPredicate};
use etr_core::{Error, Family, Order, WetrSession};
use serde_json::{json, Value};

const DEFAULT_FUEL: u64 = 1 << 20;
const FUEL_ENV: &str = "ETR_DEFAULT_FUEL";

#[derive(Parser)]
#[command(
    name = "etr",
    about = "Evaluate step-indexed recursions over computable orders",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize a membership family with one or both engines
    Eval(EvalArgs),
    /// Search an order for a descending chain
    Probe(ProbeArgs),
    /// Verify a family file against its predicate's fixpoint equation
    Check(CheckArgs),
    /// Trace a single setr evaluation step by step
    Trace(TraceArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Wetr,
    Setr,
    Both,
}

#[derive(Args)]
struct EvalArgs {
    /// Engine to run
    #[arg(long, value_enum)]
    engine: EngineChoice,
    /// Order expression: fin(k), omega, sum(E,E), lex(E,E), exp(E,E), rev(E), tree(d)
    #[arg(long)]
    order: String,
    /// Step predicate as JSON, e.g. {"kind":"induction","params":{"P":"sum-witness"}}
    #[arg(long)]
    pred: String,
    /// Evaluate values 0..n-max at every stage
    #[arg(long = "n-max")]
    n_max: u64,
    /// Number of stages drawn from the order's enumeration
    #[arg(long = "x-budget", default_value_t = 64)]
    x_budget: usize,
    /// Work cap per engine; defaults to ETR_DEFAULT_FUEL or 1048576
    #[arg(long)]
    fuel: Option<u64>,
    /// Write the family as a sorted JSON array of [stage, value] pairs
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write setr step records as JSON lines; needs --engine setr or both
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Seed for seeded predicates when the JSON omits one
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ProbeArgs {
    /// Order expression; exponentials over unverified exponents are allowed here
    #[arg(long)]
    order: String,
    /// Chain length to search for
    #[arg(long = "chain-length")]
    chain_length: usize,
    /// Maximum elements enumerated for the search
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
}

#[derive(Args)]
struct CheckArgs {
    /// Family file: JSON array of [stage, value] pairs
    #[arg(long)]
    fixpoint: PathBuf,
    /// Step predicate as JSON
    #[arg(long)]
    pred: String,
    /// Order expression the family was materialized over
    #[arg(long)]
    order: String,
    /// Window height; defaults to one past the largest value in the file
    #[arg(long = "n-max")]
    n_max: Option<u64>,
    /// Stage budget used when the family was materialized
    #[arg(long = "x-budget", default_value_t = 64)]
    x_budget: usize,
    /// Work cap; defaults to ETR_DEFAULT_FUEL or 1048576
    #[arg(long)]
    fuel: Option<u64>,
    /// Seed for seeded predicates when the JSON omits one
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TraceArgs {
    /// Order expression; must carry a well-order claim
    #[arg(long)]
    order: String,
    /// Step predicate as JSON
    #[arg(long)]
    pred: String,
    /// Value to evaluate
    #[arg(long)]
    n: u64,
    /// Stage to evaluate at
    #[arg(long)]
    x: u64,
    /// Work cap; defaults to ETR_DEFAULT_FUEL or 1048576
    #[arg(long)]
    fuel: Option<u64>,
    /// Write step records here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for seeded predicates when the JSON omits one
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Error>().map_or(1, |err| match err {
                Error::FuelExhausted { .. } => 3,
                Error::InconsistentPredicate { .. } => 2,
                _ => 1,
            });
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Eval(args) => run_eval(args),
        Command::Probe(args) => run_probe(args),
        Command::Check(args) => run_check(args),
        Command::Trace(args) => run_trace(args),
    }
}

fn run_eval(args: EvalArgs) -> anyhow::Result<ExitCode> {
    let order = Order::parse(&args.order)?;
    let pred = build_predicate(&args.pred, args.seed, &order)?;
    let fuel = resolve_fuel(args.fuel)?;
    if args.trace.is_some() && args.engine == EngineChoice::Wetr {
        anyhow::bail!("step traces come from the setr engine; pass --engine setr or both");
    }

    // Both sessions are constructed up front so order rejections fire
    // before any evaluation starts.
    let mut wetr_session = match args.engine {
        EngineChoice::Wetr | EngineChoice::Both => {
            Some(WetrSession::new(pred.as_ref(), &order, fuel)?)
        }
        EngineChoice::Setr => None,
    };
    let setr_session = match args.engine {
        EngineChoice::Setr | EngineChoice::Both => {
            Some(SetrSession::new(pred.as_ref(), &order, fuel)?)
        }
        EngineChoice::Wetr => None,
    };

    let wetr_family = match &mut wetr_session {
        Some(session) => Some(session.materialize_family(args.n_max, args.x_budget)?),
        None => None,
    };
    let (setr_family, descent) = match &setr_session {
        Some(session) => {
            if let Some(path) = &args.trace {
                let (family, descent, lines) =
                    traced_family(session, &order, args.n_max, args.x_budget)?;
                fs::write(path, lines)
                    .with_context(|| format!("writing trace to {}", path.display()))?;
                (Some(family), Some(descent))
            } else {
                (Some(session.materialize_family(args.n_max, args.x_budget)?), None)
            }
        }
        None => (None, None),
    };

    let agree = match (&wetr_family, &setr_family) {
        (Some(w), Some(s)) => Some(w.members == s.members),
        _ => None,
    };
    let primary = wetr_family.as_ref().or(setr_family.as_ref()).expect("an engine ran");

    // On disagreement there is no canonical family to persist.
    if agree != Some(false) {
        if let Some(path) = &args.out {
            write_family(path, primary)?;
        }
    }

    let members = match (&wetr_family, &setr_family) {
        (Some(w), Some(s)) => json!({"wetr": w.members.len(), "setr": s.members.len()}),
        (Some(w), None) => json!(w.members.len()),
        (None, Some(s)) => json!(s.members.len()),
        (None, None) => unreachable!(),
    };
    let summary = json!({
        "command": "eval",
        "engine": engine_name(args.engine),
        "order": order.to_string(),
        "predicate": pred.name(),
        "n_max": args.n_max,
        "x_budget": args.x_budget,
        "fuel": fuel,
        "domain": primary.domain.len(),
        "members": members,
        "agree": agree,
        "descent": descent.as_ref().map(summarize_descent),
        "out": args.out.as_ref().map(|p| p.display().to_string()),
        "trace": args.trace.as_ref().map(|p| p.display().to_string()),
    });
    print_sorted(&summary)?;

    let descent_ok = descent.as_ref().map_or(true, DescentReport::ok);
    if agree == Some(false) || !descent_ok {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

/// Evaluates every window pair with full tracing, concatenating the step
/// records of each evaluation in domain-then-value order.
fn traced_family(
    session: &SetrSession,
    order: &Order,
    n_max: u64,
    x_budget: usize,
) -> anyhow::Result<(Family, DescentReport, String)> {
    let domain = order.enumerate(x_budget);
    let mut family = Family::new(order.to_string(), n_max, domain.clone());
    let mut descent = DescentReport {
        compared: 0,
        violations: Vec::new(),
    };
    let mut lines = String::new();
    for &x in &domain {
        for n in 0..n_max {
            let outcome = session.eval_full(n, x, true, true)?;
            if outcome.value {
                family.insert(x, n);
            }
            for entry in outcome.trace.expect("tracing was requested") {
                lines.push_str(&serde_json::to_string(&entry)?);
                lines.push('\n');
            }
            let part = outcome.descent.expect("monitoring was requested");
            descent.compared += part.compared;
            descent.violations.extend(part.violations);
        }
    }
    Ok((family, descent, lines))
}

fn run_probe(args: ProbeArgs) -> anyhow::Result<ExitCode> {
    let order = Order::parse_allowing_unsafe_exponent(&args.order)?;
    let report = find_descending_chain(&order, args.chain_length, args.budget);
    let mut value = serde_json::to_value(&report)?;
    value["found"] = json!(report.found());
    value["command"] = json!("probe");
    value["order"] = json!(order.to_string());
    print_sorted(&value)?;
    Ok(ExitCode::SUCCESS)
}

fn run_check(args: CheckArgs) -> anyhow::Result<ExitCode> {
    let order = Order::parse(&args.order)?;
    let pred = build_predicate(&args.pred, args.seed, &order)?;
    let fuel = resolve_fuel(args.fuel)?;
    let text = fs::read_to_string(&args.fixpoint)
        .with_context(|| format!("reading {}", args.fixpoint.display()))?;
    let pairs: Vec<(u64, u64)> = serde_json::from_str(&text)
        .context("family file must be a JSON array of [stage, value] pairs")?;

    let n_max = args
        .n_max
        .unwrap_or_else(|| pairs.iter().map(|p| p.1 + 1).max().unwrap_or(0));
    let domain = order.enumerate(args.x_budget);
    let mut family = Family::new(order.to_string(), n_max, domain.clone());
    for &(x, n) in &pairs {
        if n >= n_max {
            anyhow::bail!("family pair [{x}, {n}] lies beyond the window height {n_max}");
        }
        if !domain.contains(&x) {
            anyhow::bail!("family stage {x} is outside the first {} enumerated stages; raise --x-budget", args.x_budget);
        }
        family.insert(x, n);
    }

    let report = check_fixpoint(&family, pred.as_ref(), &order, fuel)?;
    let mut value = serde_json::to_value(&report)?;
    value["command"] = json!("check");
    value["order"] = json!(order.to_string());
    value["predicate"] = json!(pred.name());
    value["ok"] = json!(report.ok());
    print_sorted(&value)?;
    if report.ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn run_trace(args: TraceArgs) -> anyhow::Result<ExitCode> {
    let order = Order::parse(&args.order)?;
    let pred = build_predicate(&args.pred, args.seed, &order)?;
    let fuel = resolve_fuel(args.fuel)?;
    let session = SetrSession::new(pred.as_ref(), &order, fuel)?;
    let outcome = session.eval_full(args.n, args.x, true, true)?;

    let trace = outcome.trace.expect("tracing was requested");
    let descent = outcome.descent.expect("monitoring was requested");
    let mut lines = String::new();
    for entry in &trace {
        lines.push_str(&serde_json::to_string(entry)?);
        lines.push('\n');
    }
    let summary = json!({
        "command": "trace",
        "order": order.to_string(),
        "predicate": pred.name(),
        "n": args.n,
        "x": args.x,
        "value": outcome.value,
        "steps": outcome.steps,
        "folds": outcome.folds.len(),
        "descent": summarize_descent(&descent),
    });

    match &args.out {
        Some(path) => {
            fs::write(path, lines)
                .with_context(|| format!("writing trace to {}", path.display()))?;
            print_sorted(&summary)?;
        }
        None => {
            // Keep stdout pure JSON lines; the summary goes to stderr.
            print!("{lines}");
            eprintln!("{}", serde_json::to_string(&summary)?);
        }
    }
    if descent.ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn engine_name(choice: EngineChoice) -> &'static str {
    match choice {
        EngineChoice::Wetr => "wetr",
        EngineChoice::Setr => "setr",
        EngineChoice::Both => "both",
    }
}

fn summarize_descent(report: &DescentReport) -> Value {
    json!({"compared": report.compared, "violations": report.violations.len()})
}

/// Builds the predicate, first injecting the command line seed into the
/// JSON when it does not carry a seed of its own.
fn build_predicate(
    json_text: &str,
    seed: Option<u64>,
    order: &Order,
) -> anyhow::Result<Arc<dyn StepPredicate>> {
    let effective = match (seed, serde_json::from_str::<Value>(json_text)) {
        (Some(seed), Ok(Value::Object(mut spec))) => {
            let params = spec
                .entry("params")
                .or_insert_with(|| Value::Object(Default::default()));
            if let Value::Object(params) = params {
                params.entry("seed").or_insert_with(|| json!(seed));
            }
            serde_json::to_string(&Value::Object(spec))?
        }
        // Malformed JSON falls through so the predicate parser reports it.
        _ => json_text.to_string(),
    };
    let pred = predicate_from_json(&effective, order)?;
    Ok(pred)
}

fn resolve_fuel(flag: Option<u64>) -> anyhow::Result<u64> {
    let fuel = match flag {
        Some(f) => f,
        None => match std::env::var(FUEL_ENV) {
            Ok(text) => text
                .parse::<u64>()
                .with_context(|| format!("{FUEL_ENV} must be a nonnegative integer, got {text:?}"))?,
            Err(_) => DEFAULT_FUEL,
        },
    };
    anyhow::ensure!(fuel > 0, "fuel must be positive");
    Ok(fuel)
}

fn write_family(path: &Path, family: &Family) -> anyhow::Result<()> {
    let pairs: Vec<[u64; 2]> = family.members.iter().map(|&(x, n)| [x, n]).collect();
    let mut text = serde_json::to_string_pretty(&pairs)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing family to {}", path.display()))?;
    Ok(())
}

fn print_sorted(value: &Value) -> anyhow::Result<()> {
    // serde_json maps are b-tree backed, so keys come out sorted.
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}
