//! Tabular experiment output.

use std::fs;
use std::io::Write;
use std::path::Path;

use msg_core::metrics::format_significant;
use msg_core::{MetricValue, Rational};

use crate::error::{HarnessError, Result};

/// Significant digits for inexact values.
pub const REAL_DIGITS: usize = 12;

pub fn exact(r: Rational) -> String {
    MetricValue::Exact(r).to_string()
}

pub fn real(x: f64) -> String {
    format_significant(x, REAL_DIGITS)
}

/// A table with a fixed header plus key-value metadata kept out of the CSV body.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExperimentReport {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub metadata: Vec<(String, String)>,
}

impl ExperimentReport {
    pub fn new(header: &[&str]) -> ExperimentReport {
        ExperimentReport {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            metadata: vec![("version".into(), env!("CARGO_PKG_VERSION").into())],
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Values of `column` in rows whose `key_column` equals `key`.
    pub fn column_where(&self, column: &str, key_column: &str, key: &str) -> Vec<&str> {
        let find = |name: &str| self.header.iter().position(|h| h == name);
        let (Some(c), Some(k)) = (find(column), find(key_column)) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter(|r| r[k] == key)
            .map(|r| r[c].as_str())
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| HarnessError::io("<csv>", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn metadata_text(&self) -> String {
        self.metadata
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Writes `path` and a `path.meta` sidecar holding the metadata.
    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        }
        fs::write(path, self.to_csv_string()?).map_err(|e| HarnessError::io(path, e))?;
        let mut meta = path.as_os_str().to_owned();
        meta.push(".meta");
        fs::write(&meta, self.metadata_text()).map_err(|e| HarnessError::io(&meta, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_quotes_commas() {
        let mut r = ExperimentReport::new(&["n", "value"]);
        r.push(vec!["5".into(), exact(Rational::new(2, 4))]);
        r.push(vec!["6".into(), "a,b".into()]);
        assert_eq!(r.to_csv_string().unwrap(), "n,value\n5,1/2\n6,\"a,b\"\n");
        assert_eq!(r.column_where("value", "n", "5"), vec!["1/2"]);
        assert_eq!(real(0.5), "0.500000000000");
    }
}
