use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use matlis::instances::{EpiInstance, InstanceDesc};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("invalid instance: {0}")]
    Instance(#[from] matlis::instances::InstanceError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    FiveTermTor,
    FiveTermExt,
    FirstMatlis,
    SecondMatlis,
    ClassifyAgreement,
    ClosureProperties,
    Adjunction,
    LambdaDecompose,
    FlatnessDichotomy,
    EndRing,
    ProjInjConditions,
}

impl SuiteName {
    pub const ALL: [SuiteName; 11] = [
        SuiteName::FiveTermTor,
        SuiteName::FiveTermExt,
        SuiteName::FirstMatlis,
        SuiteName::SecondMatlis,
        SuiteName::ClassifyAgreement,
        SuiteName::ClosureProperties,
        SuiteName::Adjunction,
        SuiteName::LambdaDecompose,
        SuiteName::FlatnessDichotomy,
        SuiteName::EndRing,
        SuiteName::ProjInjConditions,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::FiveTermTor => "five-term-tor",
            SuiteName::FiveTermExt => "five-term-ext",
            SuiteName::FirstMatlis => "first-matlis",
            SuiteName::SecondMatlis => "second-matlis",
            SuiteName::ClassifyAgreement => "classify-agreement",
            SuiteName::ClosureProperties => "closure-properties",
            SuiteName::Adjunction => "adjunction",
            SuiteName::LambdaDecompose => "lambda-decompose",
            SuiteName::FlatnessDichotomy => "flatness-dichotomy",
            SuiteName::EndRing => "end-ring",
            SuiteName::ProjInjConditions => "proj-inj-conditions",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<SuiteName, SpecError> {
        SuiteName::ALL.into_iter().find(|n| n.as_str() == s.trim()).ok_or_else(|| SpecError::UnknownSuite(s.into()))
    }
}

pub const MAX_DIM_BOUND: usize = 8;

/// What to run. Thresholds and budgets are carried here, not fixed by the suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub suite: SuiteName,
    pub instance: InstanceDesc,
    pub seed: u64,
    /// Number of cases, or the sample count of a single-case suite.
    pub samples: usize,
    pub dim_bound: usize,
    /// Truncation depth for the suites that walk levels; the engine's own budget otherwise.
    #[serde(default)]
    pub level_budget: Option<usize>,
    /// Morphisms for the naturality squares of the second equivalence.
    #[serde(default)]
    pub morphisms: Option<usize>,
}

impl SuiteSpec {
    pub fn new(suite: SuiteName, instance: InstanceDesc, seed: u64, samples: usize, dim_bound: usize) -> SuiteSpec {
        SuiteSpec { suite, instance, seed, samples, dim_bound, level_budget: None, morphisms: None }
    }

    pub fn with_levels(mut self, n: usize) -> SuiteSpec {
        self.level_budget = Some(n);
        self
    }

    pub fn with_morphisms(mut self, n: usize) -> SuiteSpec {
        self.morphisms = Some(n);
        self
    }

    /// Checks the bounds and builds the instance.
    pub fn validate(&self) -> Result<EpiInstance, SpecError> {
        if self.dim_bound > MAX_DIM_BOUND {
            return Err(SpecError::Invalid(format!("dim_bound {} exceeds {MAX_DIM_BOUND}", self.dim_bound)));
        }
        let inst = EpiInstance::from_desc(&self.instance)?;
        let kron_only = matches!(self.suite, SuiteName::LambdaDecompose);
        let cpid_only = matches!(self.suite, SuiteName::FirstMatlis | SuiteName::EndRing);
        if kron_only && !inst.is_kron() || cpid_only && inst.is_kron() {
            return Err(SpecError::Invalid(format!("suite {} does not run on {}", self.suite, self.instance)));
        }
        Ok(inst)
    }
}

/// `kron:inf,2` or `cpid:0,1`.
pub fn parse_instance(s: &str) -> Result<InstanceDesc, SpecError> {
    let (kind, pts) = s.split_once(':').unwrap_or((s, ""));
    let kind = kind.parse()?;
    let points = pts
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.parse().map_err(|e: matlis::quiver::QuiverError| SpecError::Invalid(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let inst = matlis::instances::make_instance(kind, &points)?;
    Ok(inst.desc().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for n in SuiteName::ALL {
            assert_eq!(n.as_str().parse::<SuiteName>().unwrap(), n);
            assert_eq!(serde_json::to_value(n).unwrap(), n.as_str());
        }
        assert!("thm".parse::<SuiteName>().is_err());
    }

    #[test]
    fn instances_parse_and_normalize() {
        let d = parse_instance("kron:2,inf").unwrap();
        assert_eq!(d.to_string(), "KRON{2,inf}");
        assert!(parse_instance("kron:2").is_err());
        assert!(parse_instance("cpid:").is_err());
        assert!(parse_instance("ring:0").is_err());
    }

    #[test]
    fn oversized_bounds_are_rejected() {
        let spec = SuiteSpec::new(SuiteName::ClassifyAgreement, parse_instance("kron:inf").unwrap(), 1, 1, 9);
        assert!(spec.validate().is_err());
        let spec = SuiteSpec::new(SuiteName::EndRing, parse_instance("kron:inf").unwrap(), 1, 1, 3);
        assert!(spec.validate().is_err());
    }
}
