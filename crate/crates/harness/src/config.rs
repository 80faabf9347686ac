//! Flat `key = value` suite configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Recognized keys:
//! `seed`, `trials`, `out_dir`, `run` (comma-separated suite names),
//! `expected_file` (a file of further `expected.*` lines) and
//! `expected.<suite>.<summary key>`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{HarnessError, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub run: Vec<String>,
    pub expected: BTreeMap<String, String>,
}

pub fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| HarnessError::Config {
            line: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        pairs.push((i + 1, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

impl SuiteConfig {
    pub fn parse(text: &str, base: &Path) -> Result<SuiteConfig> {
        let mut cfg = SuiteConfig::default();
        for (line, key, value) in parse_pairs(text)? {
            let bad = |message: String| HarnessError::Config { line, message };
            match key.as_str() {
                "seed" => {
                    cfg.seed = Some(
                        value
                            .parse()
                            .map_err(|_| bad(format!("bad seed `{value}`")))?,
                    )
                }
                "trials" => {
                    cfg.trials = Some(
                        value
                            .parse()
                            .map_err(|_| bad(format!("bad trials `{value}`")))?,
                    )
                }
                "out_dir" => cfg.out_dir = Some(base.join(&value)),
                "run" => cfg.run.extend(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from),
                ),
                "expected_file" => {
                    let path = base.join(&value);
                    let text = fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
                    for (_, k, v) in parse_pairs(&text)? {
                        let k = k.strip_prefix("expected.").unwrap_or(&k).to_string();
                        cfg.expected.insert(k, v);
                    }
                }
                k => match k.strip_prefix("expected.") {
                    Some(name) => {
                        cfg.expected.insert(name.to_string(), value);
                    }
                    None => return Err(bad(format!("unknown key `{k}`"))),
                },
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<SuiteConfig> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        SuiteConfig::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let text =
            "# demo\nseed = 7\nrun = metrics, class_sizes\n\nexpected.metrics.failures = 0\n";
        let cfg = SuiteConfig::parse(text, Path::new("/tmp")).unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.run, vec!["metrics", "class_sizes"]);
        assert_eq!(cfg.expected["metrics.failures"], "0");
        assert!(SuiteConfig::parse("bogus = 1", Path::new(".")).is_err());
        assert!(SuiteConfig::parse("no equals sign", Path::new(".")).is_err());
        assert_eq!(
            SuiteConfig::parse("", Path::new(".")).unwrap(),
            SuiteConfig::default()
        );
    }
}
