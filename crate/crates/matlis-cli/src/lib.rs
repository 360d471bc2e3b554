//! Seeded generators, named verification suites and machine-readable reports over the
//! `matlis` library.

pub mod describe;
pub mod gen;
pub mod report;
pub mod spec;
pub mod suites;

pub use report::{CaseRecord, Report, Summary, Verdict};
pub use spec::{parse_instance, SpecError, SuiteName, SuiteSpec};
pub use suites::{replay, run_case, run_suite};
