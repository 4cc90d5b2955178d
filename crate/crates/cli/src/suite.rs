//! Suite runner: builds instances, executes checks at every resolution,
//! writes reports.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use mvhr_core::ball::BallApprox;
use mvhr_core::body::{Body, VPolytope, Zonotope};
use mvhr_core::hrcheck::{
    check_even_sum, check_gram_psd, check_isoperimetric, check_lefschetz_rank,
    check_measure_equality, check_odd_reflection, check_reflected_bound,
};
use mvhr_core::report::{CheckReport, Verdict};
use mvhr_core::rng::Rng;
use mvhr_core::samples::{random_fulldim_zonotope, random_zonotope};
use mvhr_core::scalar::Scalar;

use crate::config::{CheckSpec, OutputFormat, SuiteConfig};

/// Default checks when no explicit list is configured: seeded symmetric and
/// asymmetric instances of every check applicable at the configured
/// dimension.
pub fn default_checks(n: usize) -> Vec<CheckSpec> {
    let mut ids: Vec<&str> = vec!["odd-reflection", "even-sum", "reflected-bound"];
    if n == 2 {
        ids.push("isoperimetric");
    }
    if n >= 4 {
        ids.extend(["measure-equality", "gram-psd", "lefschetz-rank"]);
    }
    ids.into_iter()
        .map(|id| CheckSpec {
            id: id.to_string(),
            bodies: Vec::new(),
            pool: Vec::new(),
            i: None,
        })
        .collect()
}

fn seeded_refs(rng: &mut Rng, n: usize) -> Vec<Body> {
    (0..n - 1)
        .map(|_| random_zonotope(rng, n, 4, 2).into())
        .collect()
}

fn load_bodies(spec: &CheckSpec, base: Option<&Path>) -> Result<Vec<Body>> {
    spec.bodies.iter().map(|s| s.load(base)).collect()
}

fn as_zonotope(b: Body) -> Result<Zonotope> {
    match b {
        Body::Zonotope(z) => Ok(z),
        Body::VPolytope(_) => bail!("this check requires zonotope bodies"),
    }
}

fn run_check(
    spec: &CheckSpec,
    ball: &BallApprox,
    seed: u64,
    base: Option<&Path>,
) -> Result<Vec<CheckReport>> {
    let n = ball.n;
    let mut rng = Rng::new(seed).derive(&format!("{}-{n}-{}", spec.id, ball.m));
    let bodies = load_bodies(spec, base)?;
    let reports = match spec.id.as_str() {
        "odd-reflection" | "even-sum" | "reflected-bound" => {
            let refs = if bodies.is_empty() {
                seeded_refs(&mut rng, n)
            } else {
                bodies
            };
            let run = match spec.id.as_str() {
                "odd-reflection" => check_odd_reflection,
                "even-sum" => check_even_sum,
                _ => check_reflected_bound,
            };
            let mut out = vec![run(&refs, ball, seed)?];
            // the default suite also exercises the exact equality case
            if spec.bodies.is_empty() && spec.id != "odd-reflection" {
                let ball_refs: Vec<Body> = vec![ball.body(); n - 1];
                out.push(run(&ball_refs, ball, seed)?);
            }
            out
        }
        "isoperimetric" => {
            let body = if bodies.is_empty() {
                Body::from(Zonotope::from_int_generators(2, &[&[1, 0], &[0, 1]])?)
            } else if bodies.len() == 1 {
                bodies.into_iter().next().expect("one body")
            } else {
                bail!("isoperimetric takes a single body");
            };
            let mut out = vec![check_isoperimetric(&body, ball, seed)?];
            if spec.bodies.is_empty() {
                out.push(check_isoperimetric(
                    &VPolytope::standard_simplex(2).into(),
                    ball,
                    seed,
                )?);
            }
            out
        }
        "measure-equality" => {
            let quad: Vec<Zonotope> = if bodies.is_empty() {
                let k1 = random_fulldim_zonotope(&mut rng, n, 5, 2);
                let k2 = random_fulldim_zonotope(&mut rng, n, 5, 2);
                let alpha = Scalar::ratio(3, 2);
                vec![
                    k1.clone(),
                    k2.clone(),
                    k1.scale(&alpha)?,
                    k2.scale(&alpha.recip())?,
                ]
            } else if bodies.len() == 4 {
                bodies
                    .into_iter()
                    .map(as_zonotope)
                    .collect::<Result<Vec<_>>>()?
            } else {
                bail!("measure-equality takes exactly four bodies");
            };
            vec![check_measure_equality(
                &quad[0], &quad[1], &quad[2], &quad[3], ball, seed,
            )?]
        }
        "gram-psd" => {
            let pool: Vec<Zonotope> = if spec.pool.is_empty() {
                let k1 = random_fulldim_zonotope(&mut rng, n, 5, 2);
                let k2 = random_fulldim_zonotope(&mut rng, n, 5, 2);
                vec![
                    k1.clone(),
                    k1.scale(&Scalar::from_int(2))?,
                    k2.clone(),
                    k2.scale(&Scalar::ratio(3, 2))?,
                    random_fulldim_zonotope(&mut rng, n, 5, 2),
                ]
            } else {
                spec.pool
                    .iter()
                    .map(|s| s.load(base).and_then(|b| Ok(as_zonotope(b)?)))
                    .collect::<Result<Vec<_>>>()?
            };
            vec![check_gram_psd(&pool, ball, seed)?]
        }
        "lefschetz-rank" => {
            let pool: Vec<Zonotope> = if spec.pool.is_empty() {
                (0..3)
                    .map(|_| random_fulldim_zonotope(&mut rng, n, 5, 2))
                    .collect()
            } else {
                spec.pool
                    .iter()
                    .map(|s| s.load(base).and_then(|b| Ok(as_zonotope(b)?)))
                    .collect::<Result<Vec<_>>>()?
            };
            let i = spec.i.unwrap_or(1);
            vec![check_lefschetz_rank(&pool, i, ball, seed)?]
        }
        other => bail!("unknown check id {other:?}"),
    };
    Ok(reports)
}

#[derive(Serialize)]
struct SuiteReport<'a> {
    n: usize,
    m: &'a [usize],
    seed: u64,
    results: Vec<serde_json::Value>,
    total_millis: u128,
}

pub struct SuiteOutcome {
    pub reports: Vec<CheckReport>,
    pub any_failure: bool,
}

/// Executes every configured check at every resolution. Deterministic for a
/// fixed (config, seed); the per-check timing fields are informational only.
pub fn run_suite(config: &SuiteConfig, base: Option<&Path>) -> Result<SuiteOutcome> {
    config.validate()?;
    let started = std::time::Instant::now();
    let mut reports = Vec::new();
    for &m in &config.m {
        let ball = BallApprox::new(config.n, m, config.seed)
            .with_context(|| format!("building ball approximant at m = {m}"))?;
        for spec in &config.checks {
            let batch = run_check(spec, &ball, config.seed, base)
                .with_context(|| format!("check {:?} at m = {m}", spec.id))?;
            reports.extend(batch);
        }
    }
    let any_failure = reports.iter().any(|r| r.verdict.is_failure());

    if let Some(dir) = &config.out {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        if matches!(config.format, OutputFormat::Json | OutputFormat::Both) {
            let json = SuiteReport {
                n: config.n,
                m: &config.m,
                seed: config.seed,
                results: reports
                    .iter()
                    .map(|r| serde_json::to_value(r).expect("report serializes"))
                    .collect(),
                total_millis: started.elapsed().as_millis(),
            };
            let path = dir.join("report.json");
            std::fs::write(&path, serde_json::to_string_pretty(&json)?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        if matches!(config.format, OutputFormat::Csv | OutputFormat::Both) {
            let mut csv = String::from(CheckReport::csv_header());
            csv.push('\n');
            for r in &reports {
                csv.push_str(&r.csv_row());
                csv.push('\n');
            }
            let path = dir.join("report.csv");
            std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
        }
    }

    Ok(SuiteOutcome {
        reports,
        any_failure,
    })
}

pub fn summary_lines(reports: &[CheckReport]) -> Vec<String> {
    reports
        .iter()
        .map(|r| {
            format!(
                "{} n={} m={} deficit={} tolerance={} verdict={}",
                r.id,
                r.n,
                r.m,
                r.deficit.to_decimal(6),
                r.tolerance.to_decimal(6),
                r.verdict.as_str()
            )
        })
        .collect()
}

pub fn exit_code(outcome: &SuiteOutcome) -> i32 {
    if outcome.any_failure {
        1
    } else {
        0
    }
}

pub fn count_verdicts(reports: &[CheckReport]) -> (usize, usize, usize, usize) {
    let mut pass = 0;
    let mut within = 0;
    let mut fail = 0;
    let mut hyp = 0;
    for r in reports {
        match r.verdict {
            Verdict::Pass => pass += 1,
            Verdict::PassWithinTolerance => within += 1,
            Verdict::Fail => fail += 1,
            Verdict::HypothesisNotMet => hyp += 1,
        }
    }
    (pass, within, fail, hyp)
}
