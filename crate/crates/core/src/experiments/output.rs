use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};

/// `summary.json` plus zero or more CSV files, kept in memory.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub summary: Value,
    pub files: BTreeMap<String, String>,
}

/// Shortest round-trip decimal; identical inputs give identical text.
pub(crate) fn num(x: f64) -> String {
    format!("{x}")
}

pub(crate) fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl ExperimentOutput {
    pub fn new(summary: Value) -> Self {
        Self {
            summary,
            files: BTreeMap::new(),
        }
    }

    pub(crate) fn add_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::numerical(format!("csv buffer: {e}")))?;
        let text = String::from_utf8(bytes).map_err(|e| Error::numerical(format!("csv encoding: {e}")))?;
        self.files.insert(name.to_string(), text);
        Ok(())
    }

    pub fn csv(&self, name: &str) -> Option<&str> {
        self.files.get(name).map(String::as_str)
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary)?)
    }

    /// Creates `dir` if needed and writes `summary.json` and every CSV.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.json"), self.summary_json()? + "\n")?;
        for (name, text) in &self.files {
            std::fs::write(dir.join(name), text)?;
        }
        Ok(())
    }
}
