//! Suite configuration: JSON file plus command-line overrides.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use mvhr_core::body::Body;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub n: usize,
    /// Ball resolutions, strictly increasing.
    pub m: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Check specifications; an empty list is a valid (empty) suite.
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
    #[serde(default)]
    pub workers: Workers,
}

fn default_format() -> OutputFormat {
    OutputFormat::Both
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Both,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Workers {
    #[default]
    #[serde(rename = "auto")]
    Auto,
    Count(usize),
}

impl Workers {
    pub fn resolve(self) -> usize {
        match self {
            // 0 lets the engine pick available parallelism
            Workers::Auto => 0,
            Workers::Count(c) => c,
        }
    }
}

impl std::str::FromStr for Workers {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "auto" {
            Ok(Workers::Auto)
        } else {
            s.parse::<usize>()
                .map(Workers::Count)
                .map_err(|e| format!("workers must be 'auto' or a count: {e}"))
        }
    }
}

/// A body given inline as a JSON object or by file path.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BodySource {
    Path(String),
    Inline(Body),
}

impl BodySource {
    pub fn load(&self, base: Option<&Path>) -> Result<Body> {
        match self {
            BodySource::Inline(b) => Ok(b.clone()),
            BodySource::Path(p) => {
                let path = match base {
                    Some(dir) if !Path::new(p).is_absolute() => dir.join(p),
                    _ => PathBuf::from(p),
                };
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading body file {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing body file {}", path.display()))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub id: String,
    /// Reference bodies for the doubled-space checks (odd/even/reflected) or
    /// the quadruple of the measure-equality check.
    #[serde(default)]
    pub bodies: Vec<BodySource>,
    /// Pool for the Gram-positivity and rank checks.
    #[serde(default)]
    pub pool: Vec<BodySource>,
    /// Degree parameter of the rank check.
    #[serde(default)]
    pub i: Option<usize>,
}

pub const CHECK_IDS: [&str; 7] = [
    "odd-reflection",
    "even-sum",
    "reflected-bound",
    "measure-equality",
    "gram-psd",
    "lefschetz-rank",
    "isoperimetric",
];

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            bail!("config field n: dimension must be at least 2");
        }
        if self.m.is_empty() {
            bail!("config field m: at least one ball resolution is required");
        }
        for w in self.m.windows(2) {
            if w[0] >= w[1] {
                bail!("config field m: resolutions must be strictly increasing");
            }
        }
        for m in &self.m {
            if *m < self.n {
                bail!("config field m: resolution {m} is below the dimension {}", self.n);
            }
        }
        let known: BTreeSet<&str> = CHECK_IDS.into_iter().collect();
        for c in &self.checks {
            if !known.contains(c.id.as_str()) {
                bail!(
                    "config field checks: unknown check id {:?} (known: {})",
                    c.id,
                    CHECK_IDS.join(", ")
                );
            }
        }
        Ok(())
    }
}
