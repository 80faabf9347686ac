//! One PASS/FAIL line per acceptance criterion. Exits nonzero when a
//! criterion fails that is not listed in `UNATTAINABLE`, or when a listed one
//! unexpectedly passes.

use std::time::{Duration, Instant};

use msg_lab::runner::DEFAULT_SEED;
use msg_lab::suites::{self, SuiteOutcome, SuiteParams};

const NEAR_ROOT_BUDGET: Duration = Duration::from_secs(60);
const EQUIVALENCE_BUDGET: Duration = Duration::from_secs(120);

/// Criteria that cannot hold, with the failing check and the reason.
const UNATTAINABLE: [(&str, &str, &str); 1] = [(
    "commutators",
    "every_sl2_3_element_is_a_commutator",
    "SL_2(3) is not perfect: its commutator subgroup is Q8 of order 8",
)];

struct Criterion {
    name: &'static str,
    suites: &'static [&'static str],
    budget: Option<Duration>,
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        name: "near_root",
        suites: &["near_root"],
        budget: Some(NEAR_ROOT_BUDGET),
    },
    Criterion {
        name: "centralize",
        suites: &["centralize"],
        budget: None,
    },
    Criterion {
        name: "factorization",
        suites: &["factorization"],
        budget: None,
    },
    Criterion {
        name: "niceblock",
        suites: &["niceblock"],
        budget: None,
    },
    Criterion {
        name: "commutators",
        suites: &["commutators"],
        budget: None,
    },
    Criterion {
        name: "metric_axioms",
        suites: &["metric_axioms"],
        budget: None,
    },
    Criterion {
        name: "class_sizes",
        suites: &["class_sizes"],
        budget: None,
    },
    Criterion {
        name: "centralizer_structure",
        suites: &["centralizer_structure", "fingerprint"],
        budget: None,
    },
    Criterion {
        name: "geodesics",
        suites: &["geodesics"],
        budget: None,
    },
    Criterion {
        name: "equivalence",
        suites: &["equivalence"],
        budget: Some(EQUIVALENCE_BUDGET),
    },
];

fn main() {
    let params = SuiteParams::new(DEFAULT_SEED);
    let mut unexpected = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcomes: Vec<SuiteOutcome> = c
            .suites
            .iter()
            .map(|s| suites::run_named(s, &params).expect("known suite"))
            .collect();
        let elapsed = start.elapsed();
        let failed: Vec<String> = outcomes
            .iter()
            .flat_map(|o| {
                o.failed_checks()
                    .map(|f| format!("{}: {}", f.name, f.detail))
            })
            .collect();
        let in_time = c.budget.is_none_or(|b| elapsed <= b);
        let passed = failed.is_empty() && in_time;
        let checks: usize = outcomes.iter().map(|o| o.checks.len()).sum();
        let mut line = format!(
            "{} {} ({checks} checks, {:.1}s)",
            if passed { "PASS" } else { "FAIL" },
            c.name,
            elapsed.as_secs_f64()
        );
        if !in_time {
            line.push_str(&format!(" over budget {:?}", c.budget.expect("budget")));
        }
        for f in &failed {
            line.push_str(&format!("\n    {f}"));
        }
        let known = UNATTAINABLE.iter().find(|(name, _, _)| *name == c.name);
        match known {
            Some((_, check, reason)) => {
                let only_known = outcomes
                    .iter()
                    .flat_map(|o| o.failed_checks())
                    .all(|f| f.name == *check);
                line.push_str(&format!("\n    unattainable: {reason}"));
                if passed || !only_known || !in_time {
                    unexpected.push(c.name);
                }
            }
            None if !passed => unexpected.push(c.name),
            None => {}
        }
        println!("{line}");
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance results: {unexpected:?}");
        std::process::exit(1);
    }
}
