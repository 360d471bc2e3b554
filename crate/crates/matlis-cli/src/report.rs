use serde::{Deserialize, Serialize};
use serde_json::Value;

use matlis::functor::FunctorError;

use crate::spec::SuiteSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A certificate could not be produced within the budget. Counts as a failure.
    NoStabilization { budget: usize },
    Error { message: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn from_error(e: &FunctorError) -> Verdict {
        match e {
            FunctorError::NoStabilization(b) => Verdict::NoStabilization { budget: *b },
            other => Verdict::Error { message: other.to_string() },
        }
    }
}

/// One case. `input` is enough to replay the case alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseRecord {
    pub index: usize,
    pub input: Value,
    pub output: Value,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub spec: SuiteSpec,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub no_stabilization: usize,
    pub pass: bool,
    pub warnings: Vec<String>,
    /// The seed that regenerates this report.
    pub replay_seed: u64,
    /// The only field that varies between runs of one spec.
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(spec: &SuiteSpec, mut cases: Vec<CaseRecord>, mut warnings: Vec<String>, elapsed_ms: u128) -> Report {
        cases.sort_by_key(|c| c.index);
        let passed = cases.iter().filter(|c| c.verdict.passed()).count();
        let no_stabilization = cases.iter().filter(|c| matches!(c.verdict, Verdict::NoStabilization { .. })).count();
        if cases.is_empty() {
            warnings.push("no cases were run; the pass is vacuous".into());
        }
        let summary = Summary {
            spec: spec.clone(),
            cases: cases.len(),
            passed,
            failed: cases.len() - passed,
            no_stabilization,
            pass: passed == cases.len(),
            warnings,
            replay_seed: spec.seed,
            elapsed_ms,
        };
        Report { cases, summary }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.verdict.passed())
    }

    /// One JSON object per case, then `{"summary": …}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&serde_json::to_string(c).expect("case serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&serde_json::json!({ "summary": self.summary })).expect("summary serializes"));
        out.push('\n');
        out
    }

    pub fn to_human(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "{} on {}: {}/{} passed{}\n",
            s.spec.suite,
            s.spec.instance,
            s.passed,
            s.cases,
            if s.pass { "" } else { " FAILED" }
        );
        for c in self.failures() {
            out.push_str(&format!("  case {}: {:?}\n", c.index, c.verdict));
        }
        for w in &s.warnings {
            out.push_str(&format!("  warning: {w}\n"));
        }
        out
    }
}
