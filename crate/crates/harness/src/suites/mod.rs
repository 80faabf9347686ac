//! Property suites. Each suite runs a fixed battery of randomized and
//! exhaustive checks and reports one line per check; summaries feed the
//! expected-value comparison of [`crate::runner::run_suite`].

use std::collections::BTreeMap;

use msg_core::groups::stream_rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};
use crate::report::ExperimentReport;

mod algebra;
mod metric;
mod structure;
mod trends;

pub use algebra::{near_root_case, NearRootCase};

/// Absolute tolerance for floating-point conjugacy distances.
pub const CONJ_TOLERANCE: f64 = 1e-9;
/// Largest `q^d` for which a `d`-dimensional commutant is enumerated.
pub const COMMUTANT_ENUMERATION_LIMIT: u64 = 1_000_000;
/// Upper bound on the median `|d_c - l_H|` at the end of the alternating schedule.
pub const EQUIVALENCE_GAP_LIMIT: f64 = 0.1;

pub const SUITES: [&str; 11] = [
    "near_root",
    "centralize",
    "factorization",
    "niceblock",
    "commutators",
    "metric_axioms",
    "class_sizes",
    "centralizer_structure",
    "geodesics",
    "equivalence",
    "fingerprint",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub summary: BTreeMap<String, String>,
    /// Data tables keyed by file stem.
    pub tables: Vec<(String, ExperimentReport)>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> SuiteOutcome {
        SuiteOutcome {
            name,
            checks: Vec::new(),
            summary: BTreeMap::new(),
            tables: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn tally(&mut self, name: &str, tally: Tally) {
        self.summary
            .insert(format!("{name}.failures"), tally.failures.to_string());
        self.summary
            .insert(format!("{name}.cases"), tally.cases.to_string());
        let passed = tally.failures == 0 && tally.cases > 0;
        let detail = tally.describe();
        self.check(name, passed, detail);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn checks_table(&self) -> ExperimentReport {
        let mut t = ExperimentReport::new(&["suite", "check", "status", "detail"]);
        for c in &self.checks {
            t.push(vec![
                self.name.into(),
                c.name.clone(),
                if c.passed { "PASS" } else { "FAIL" }.into(),
                c.detail.clone(),
            ]);
        }
        t
    }
}

/// Failure counter keeping the smallest failing instance as a reproducer.
#[derive(Debug, Default)]
struct Tally {
    cases: usize,
    failures: usize,
    smallest: Option<(usize, String)>,
}

impl Tally {
    fn record(&mut self, ok: bool, size: usize, reproducer: impl FnOnce() -> String) {
        self.cases += 1;
        if ok {
            return;
        }
        self.failures += 1;
        if self.smallest.as_ref().is_none_or(|(s, _)| size < *s) {
            self.smallest = Some((size, reproducer()));
        }
    }

    fn describe(&self) -> String {
        match &self.smallest {
            None => format!("{} cases, 0 failures", self.cases),
            Some((_, repro)) => format!(
                "{} of {} cases failed; smallest: {repro}",
                self.failures, self.cases
            ),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteParams {
    pub seed: u64,
    /// Overrides the per-suite default sample count.
    pub trials: Option<usize>,
}

impl SuiteParams {
    pub fn new(seed: u64) -> SuiteParams {
        SuiteParams { seed, trials: None }
    }

    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    /// Stream `index` of the suite numbered `tag`.
    fn rng(&self, tag: u64, index: usize) -> ChaCha8Rng {
        stream_rng(self.seed, (tag << 40) | index as u64)
    }
}

pub fn run_named(name: &str, params: &SuiteParams) -> Result<SuiteOutcome> {
    Ok(match name {
        "near_root" => algebra::near_root_suite(params),
        "centralize" => algebra::centralize_suite(params),
        "factorization" => algebra::factorization_suite(params),
        "niceblock" => algebra::niceblock_suite(params),
        "commutators" => algebra::commutator_suite(params),
        "metric_axioms" => metric::metric_axiom_suite(params),
        "class_sizes" => metric::class_size_suite(params),
        "centralizer_structure" => structure::centralizer_structure_suite(params),
        "geodesics" => structure::geodesic_suite(params),
        "equivalence" => trends::equivalence_suite(params),
        "fingerprint" => trends::fingerprint_suite(params),
        other => return Err(HarnessError::UnknownSuite(other.into())),
    })
}

pub use algebra::{
    centralize_suite, commutator_suite, factorization_suite, near_root_suite, niceblock_suite,
};
pub use metric::{class_size_suite, metric_axiom_suite};
pub use structure::{centralizer_structure_suite, geodesic_suite};
pub use trends::{equivalence_suite, fingerprint_suite};
