//! Check reports, canonical serialization, and input digests.
//!
//! Reports serialize to JSON and to flat CSV rows with identical numeric
//! content (exact rationals as strings in both). The canonical form used for
//! determinism comparisons excludes the timing field, which is the only
//! nondeterministic part of a report.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "pass-within-tolerance")]
    PassWithinTolerance,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "hypothesis-not-met")]
    HypothesisNotMet,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::PassWithinTolerance => "pass-within-tolerance",
            Verdict::Fail => "fail",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
        }
    }
}

/// Verdict from the oriented deficit (>= 0 means the inequality holds) and
/// the tolerance; exact-mode checks pass tolerance 0.
pub fn verdict_from(deficit: &Scalar, tolerance: &Scalar) -> Verdict {
    if !deficit.is_negative() {
        Verdict::Pass
    } else if *deficit >= -tolerance.clone() {
        Verdict::PassWithinTolerance
    } else {
        Verdict::Fail
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub inputs_digest: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
    /// Oriented so that >= 0 means the checked inequality holds.
    pub deficit: Scalar,
    pub tolerance: Scalar,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    pub millis: u128,
}

impl CheckReport {
    /// Canonical JSON with the timing field zeroed: byte-identical across
    /// reruns, worker counts and platforms.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.millis = 0;
        serde_json::to_string(&clone).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "id,n,m,seed,inputs_digest,lhs,rhs,deficit,tolerance,verdict,note,millis"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.id,
            self.n,
            self.m,
            self.seed,
            self.inputs_digest,
            self.lhs,
            self.rhs,
            self.deficit,
            self.tolerance,
            self.verdict.as_str(),
            self.note.as_deref().unwrap_or(""),
            self.millis
        )
    }

    /// CSV row with the timing field zeroed (see `canonical_json`).
    pub fn canonical_csv_row(&self) -> String {
        let mut clone = self.clone();
        clone.millis = 0;
        clone.csv_row()
    }
}

/// FNV-1a over the canonical JSON of any serializable input bundle; the
/// digest identifies the inputs of a report for reproduction.
pub fn digest_inputs<T: Serialize>(inputs: &T) -> String {
    let json = serde_json::to_string(inputs).expect("inputs serialize");
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in json.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_from_deficit() {
        let tol = Scalar::ratio(1, 100);
        assert_eq!(verdict_from(&Scalar::one(), &tol), Verdict::Pass);
        assert_eq!(verdict_from(&Scalar::zero(), &Scalar::zero()), Verdict::Pass);
        assert_eq!(
            verdict_from(&Scalar::ratio(-1, 200), &tol),
            Verdict::PassWithinTolerance
        );
        assert_eq!(verdict_from(&Scalar::ratio(-1, 10), &tol), Verdict::Fail);
        assert_eq!(
            verdict_from(&Scalar::ratio(-1, 1000), &Scalar::zero()),
            Verdict::Fail
        );
    }

    #[test]
    fn canonical_json_ignores_timing() {
        let mk = |millis| CheckReport {
            id: "odd-reflection".into(),
            n: 2,
            m: 8,
            seed: 1,
            inputs_digest: "00".into(),
            lhs: Scalar::one(),
            rhs: Scalar::zero(),
            deficit: Scalar::one(),
            tolerance: Scalar::zero(),
            verdict: Verdict::Pass,
            note: None,
            millis,
        };
        assert_eq!(mk(5).canonical_json(), mk(900).canonical_json());
        assert_ne!(mk(5).csv_row(), mk(900).csv_row());
        assert_eq!(mk(5).canonical_csv_row(), mk(900).canonical_csv_row());
    }

    #[test]
    fn digest_is_stable() {
        let a = digest_inputs(&("odd", 2, "3/4"));
        let b = digest_inputs(&("odd", 2, "3/4"));
        let c = digest_inputs(&("odd", 2, "3/5"));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
