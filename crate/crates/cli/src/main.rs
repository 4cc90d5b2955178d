//! mvhr: exact mixed volumes, mixed area measures, and inequality suites for
//! convex bodies.
//!
//! Exit codes: 0 all checks pass (or pass within tolerance), 1 a check failed
//! or the two mixed-volume engines disagreed, 2 invalid input.

mod config;
mod suite;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{BodySource, CheckSpec, OutputFormat, SuiteConfig, Workers};
use mvhr_core::ball::BallApprox;
use mvhr_core::body::Body;
use mvhr_core::measures::{measures_equal, mixed_area_measure};
use mvhr_core::mixedvol::{mixed_volume, mv_polarization, with_workers, BodyList};

#[derive(Parser)]
#[command(name = "mvhr", version, about = "Exact mixed-volume engine and inequality harness")]
struct Cli {
    /// Worker threads for the enumeration engine ('auto' or a count).
    /// Results are identical for every worker count. Falls back to the
    /// MVHR_WORKERS environment variable.
    #[arg(long, global = true)]
    workers: Option<Workers>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured (or default) check suite and write reports.
    Suite(SuiteArgs),
    /// Compute one mixed volume with both engines and cross-check.
    Mv(MvArgs),
    /// Compare two mixed area measures exactly.
    Measure(MeasureArgs),
    /// Run a single named check.
    Check(CheckArgs),
}

#[derive(Args)]
struct SuiteArgs {
    /// JSON suite configuration; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Ball resolution; repeat for several levels (strictly increasing).
    #[arg(long = "m")]
    m: Vec<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for report.json / report.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct MvArgs {
    /// Body file (JSON) or inline JSON object; repeatable.
    #[arg(long = "body", required = true)]
    bodies: Vec<String>,
    /// Multiplicity per body, parallel to --body (default 1 each).
    #[arg(long = "mult")]
    mults: Vec<usize>,
}

#[derive(Args)]
struct MeasureArgs {
    /// Left tuple: one body (plain surface measure) or two (mixed measure
    /// with ball padding); file path or inline JSON.
    #[arg(long, required = true, num_args = 1..=2)]
    left: Vec<String>,
    /// Right tuple, same shape as --left.
    #[arg(long, required = true, num_args = 1..=2)]
    right: Vec<String>,
    #[arg(long)]
    n: usize,
    /// Ball resolution (needed for two-body tuples).
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CheckArgs {
    /// One of: odd-reflection, even-sum, reflected-bound, measure-equality,
    /// gram-psd, lefschetz-rank, isoperimetric.
    id: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reference bodies (files or inline JSON); seeded defaults when omitted.
    #[arg(long = "body")]
    bodies: Vec<String>,
    /// Pool bodies for gram-psd / lefschetz-rank.
    #[arg(long = "pool")]
    pool: Vec<String>,
    /// Degree parameter of lefschetz-rank.
    #[arg(long)]
    i: Option<usize>,
}

fn parse_body_arg(raw: &str) -> BodySource {
    if raw.trim_start().starts_with('{') {
        match serde_json::from_str::<Body>(raw) {
            Ok(b) => BodySource::Inline(b),
            Err(_) => BodySource::Path(raw.to_string()),
        }
    } else {
        BodySource::Path(raw.to_string())
    }
}

fn resolve_workers(cli: &Cli) -> Workers {
    if let Some(w) = cli.workers {
        return w;
    }
    if let Ok(env) = std::env::var("MVHR_WORKERS") {
        if let Ok(w) = env.parse() {
            return w;
        }
    }
    Workers::Auto
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = resolve_workers(&cli).resolve();
    let outcome = with_workers(workers, || match &cli.command {
        Command::Suite(args) => cmd_suite(args),
        Command::Mv(args) => cmd_mv(args),
        Command::Measure(args) => cmd_measure(args),
        Command::Check(args) => cmd_check(args),
    });
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn cmd_suite(args: &SuiteArgs) -> Result<ExitCode> {
    let (mut config, base): (SuiteConfig, Option<PathBuf>) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let cfg = serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))?;
            (cfg, path.parent().map(Path::to_path_buf))
        }
        None => {
            let n = args.n.unwrap_or(2);
            (
                SuiteConfig {
                    n,
                    m: vec![8, 16],
                    seed: 0,
                    checks: suite::default_checks(n),
                    out: None,
                    format: OutputFormat::Both,
                    workers: Workers::Auto,
                },
                None,
            )
        }
    };
    if let Some(n) = args.n {
        config.n = n;
        if args.config.is_none() {
            config.checks = suite::default_checks(n);
        }
    }
    if !args.m.is_empty() {
        config.m = args.m.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.out = Some(out.clone());
    }
    if let Some(fmt) = args.format {
        config.format = fmt;
    }

    let outcome = suite::run_suite(&config, base.as_deref())?;
    for line in suite::summary_lines(&outcome.reports) {
        println!("{line}");
    }
    let (pass, within, fail, hyp) = suite::count_verdicts(&outcome.reports);
    println!(
        "suite: {} checks, {pass} pass, {within} within tolerance, {hyp} hypothesis-not-met, {fail} fail",
        outcome.reports.len()
    );
    Ok(ExitCode::from(suite::exit_code(&outcome) as u8))
}

fn cmd_mv(args: &MvArgs) -> Result<ExitCode> {
    if !args.mults.is_empty() && args.mults.len() != args.bodies.len() {
        bail!("--mult must be given once per --body");
    }
    let mut entries = Vec::new();
    for (i, raw) in args.bodies.iter().enumerate() {
        let body = parse_body_arg(raw).load(None)?;
        let mult = args.mults.get(i).copied().unwrap_or(1);
        entries.push((body, mult));
    }
    let bl = BodyList::new(entries).map_err(|e| anyhow::anyhow!("{e}"))?;
    let value = mixed_volume(&bl).map_err(|e| anyhow::anyhow!("{e}"))?;

    if polarization_feasible(&bl) {
        let oracle = mv_polarization(&bl).map_err(|e| anyhow::anyhow!("{e}"))?;
        if oracle != value {
            eprintln!("engine discrepancy: enumeration {value} vs polarization {oracle}");
            println!("{value}");
            return Ok(ExitCode::from(1));
        }
        println!("{value}");
        println!("{}", value.to_decimal(15));
        println!("cross-check: polarization agrees");
    } else {
        println!("{value}");
        println!("{}", value.to_decimal(15));
        println!("cross-check: skipped (instance too large for the oracle)");
    }
    Ok(ExitCode::SUCCESS)
}

/// The polarization oracle enumerates Minkowski-sum volumes; keep it to
/// instances where that stays cheap.
fn polarization_feasible(bl: &BodyList) -> bool {
    let total_gens: usize = bl
        .entries()
        .iter()
        .map(|(b, _)| match b {
            Body::Zonotope(z) => z.generators().len(),
            Body::VPolytope(p) => p.vertices().len(),
        })
        .sum();
    if bl.all_zonotopes() {
        bl.dim() <= 6 && total_gens <= 24
    } else {
        bl.dim() <= 4 && total_gens <= 12
    }
}

fn load_tuple(raw: &[String], n: usize, ball: &BallApprox) -> Result<mvhr_core::measures::AtomicMeasure> {
    let bodies: Vec<Body> = raw
        .iter()
        .map(|r| parse_body_arg(r).load(None))
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    match bodies.len() {
        1 => {
            let z = bodies[0]
                .as_zonotope()
                .context("measures need zonotope bodies")?;
            entries.push((z.clone(), n - 1));
        }
        2 => {
            if n < 4 {
                bail!("two-body mixed area measures need dimension >= 4");
            }
            for b in &bodies {
                let z = b.as_zonotope().context("measures need zonotope bodies")?;
                entries.push((z.clone(), 1));
            }
            entries.push((ball.zonotope.clone(), n - 3));
        }
        _ => bail!("a measure tuple has one or two bodies"),
    }
    mixed_area_measure(&entries, n).map_err(|e| anyhow::anyhow!("{e}"))
}

fn cmd_measure(args: &MeasureArgs) -> Result<ExitCode> {
    if args.n < 2 {
        bail!("dimension must be at least 2");
    }
    let ball = BallApprox::new(args.n, args.m.max(args.n), args.seed)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let left = load_tuple(&args.left, args.n, &ball)?;
    let right = load_tuple(&args.right, args.n, &ball)?;
    if measures_equal(&left, &right) {
        println!("equal");
        Ok(ExitCode::SUCCESS)
    } else {
        let (dir, a, b) = left.first_difference(&right).expect("measures differ");
        let dir: Vec<String> = dir.iter().map(|c| c.to_string()).collect();
        println!(
            "unequal {}",
            serde_json::json!({"direction": dir, "left": a.to_string(), "right": b.to_string()})
        );
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode> {
    let spec = CheckSpec {
        id: args.id.clone(),
        bodies: args.bodies.iter().map(|r| parse_body_arg(r)).collect(),
        pool: args.pool.iter().map(|r| parse_body_arg(r)).collect(),
        i: args.i,
    };
    let config = SuiteConfig {
        n: args.n,
        m: vec![args.m],
        seed: args.seed,
        checks: vec![spec],
        out: None,
        format: OutputFormat::Both,
        workers: Workers::Auto,
    };
    let outcome = suite::run_suite(&config, None)?;
    for line in suite::summary_lines(&outcome.reports) {
        println!("{line}");
    }
    for r in &outcome.reports {
        if let Some(note) = &r.note {
            println!("note[{}]: {note}", r.id);
        }
    }
    Ok(ExitCode::from(suite::exit_code(&outcome) as u8))
}
