//! Config-driven execution of named suites.

use std::path::{Path, PathBuf};

use crate::config::SuiteConfig;
use crate::error::{HarnessError, Result};
use crate::suites::{run_named, SuiteOutcome, SuiteParams};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug)]
pub struct SuiteRun {
    pub outcomes: Vec<SuiteOutcome>,
    /// Expected values that were missing or differed, as `key: expected vs actual`.
    pub mismatches: Vec<String>,
    pub written: Vec<PathBuf>,
}

impl SuiteRun {
    pub fn success(&self) -> bool {
        self.mismatches.is_empty() && self.outcomes.iter().all(SuiteOutcome::passed)
    }
}

/// Runs every suite named in `cfg.run`, writes `<suite>.checks.csv` plus
/// any data tables to `out_dir` when set, and compares summaries against the
/// `expected.*` entries.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteRun> {
    let params = SuiteParams {
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        trials: cfg.trials,
    };
    let mut outcomes = Vec::new();
    for name in &cfg.run {
        outcomes.push(run_named(name, &params)?);
    }
    let mut mismatches = Vec::new();
    for (key, expected) in &cfg.expected {
        let actual = key.split_once('.').and_then(|(suite, rest)| {
            outcomes
                .iter()
                .find(|o| o.name == suite)
                .and_then(|o| o.summary.get(rest))
        });
        match actual {
            Some(a) if a == expected => {}
            Some(a) => mismatches.push(format!("{key}: expected {expected}, got {a}")),
            None => mismatches.push(format!("{key}: expected {expected}, not produced")),
        }
    }
    let mut written = Vec::new();
    if let Some(dir) = &cfg.out_dir {
        for o in &outcomes {
            written.push(save(dir, &format!("{}.checks", o.name), &o.checks_table())?);
            for (stem, table) in &o.tables {
                written.push(save(dir, stem, table)?);
            }
        }
    }
    Ok(SuiteRun {
        outcomes,
        mismatches,
        written,
    })
}

fn save(dir: &Path, stem: &str, table: &crate::report::ExperimentReport) -> Result<PathBuf> {
    let path = dir.join(format!("{stem}.csv"));
    table.save(&path)?;
    Ok(path)
}

pub fn run_suite_file(path: &Path) -> Result<SuiteRun> {
    let cfg = SuiteConfig::load(path)?;
    if let Some(unknown) = cfg
        .run
        .iter()
        .find(|n| !crate::suites::SUITES.contains(&n.as_str()))
    {
        return Err(HarnessError::UnknownSuite(unknown.clone()));
    }
    run_suite(&cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_succeeds_silently() {
        let run = run_suite(&SuiteConfig::default()).unwrap();
        assert!(run.success() && run.outcomes.is_empty() && run.written.is_empty());
    }

    #[test]
    fn expected_values_are_compared() {
        let mut cfg = SuiteConfig {
            run: vec!["class_sizes".into()],
            trials: Some(5),
            ..SuiteConfig::default()
        };
        cfg.expected
            .insert("class_sizes.orbit_stabilizer.failures".into(), "0".into());
        assert!(run_suite(&cfg).unwrap().success());
        cfg.expected
            .insert("class_sizes.orbit_stabilizer.failures".into(), "1".into());
        let run = run_suite(&cfg).unwrap();
        assert!(!run.success());
        assert_eq!(run.mismatches.len(), 1);
    }
}
