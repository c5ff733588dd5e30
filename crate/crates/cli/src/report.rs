//! Machine-readable outputs: JSON-lines result records and CSV plot data.

use crate::config::ExperimentConfig;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One emitted metric.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_high: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic_counterpart: Option<f64>,
    pub scenario_hash: String,
}

impl ResultRecord {
    pub fn plain(name: impl Into<String>, value: f64, hash: &str) -> Self {
        ResultRecord {
            name: name.into(),
            value,
            ci_low: None,
            ci_high: None,
            analytic_counterpart: None,
            scenario_hash: hash.to_string(),
        }
    }

    pub fn with_ci(mut self, low: f64, high: f64) -> Self {
        self.ci_low = Some(low);
        self.ci_high = Some(high);
        self
    }

    pub fn with_counterpart(mut self, counterpart: f64) -> Self {
        self.analytic_counterpart = Some(counterpart);
        self
    }
}

/// Stable digest of (config, seed): SHA-256 over the canonical JSON
/// serialization, independent of platform or memory layout.
pub fn scenario_hash(config: &ExperimentConfig) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(16);
    for byte in &digest[..8] {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

/// One plot-data row: (x, series, y, y_err).
#[derive(Debug, Clone)]
pub struct PlotRow {
    pub x: f64,
    pub series: String,
    pub y: f64,
    pub y_err: f64,
}

pub struct Reporter {
    out_dir: PathBuf,
}

impl Reporter {
    pub fn new(out_dir: impl AsRef<Path>) -> std::io::Result<Reporter> {
        fs::create_dir_all(out_dir.as_ref())?;
        Ok(Reporter {
            out_dir: out_dir.as_ref().to_path_buf(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.out_dir
    }

    /// Append records to `results.jsonl`, one JSON object per line.
    pub fn write_results(&self, records: &[ResultRecord]) -> std::io::Result<PathBuf> {
        let path = self.out_dir.join("results.jsonl");
        let mut file = fs::OpenOptions::new().create(true).append(true).open(&path)?;
        for r in records {
            serde_json::to_writer(&mut file, r)?;
            file.write_all(b"\n")?;
        }
        Ok(path)
    }

    /// Write a plot-data CSV `plot_<name>.csv` with header x,series,y,y_err.
    pub fn write_plot(&self, name: &str, rows: &[PlotRow]) -> std::io::Result<PathBuf> {
        let path = self.out_dir.join(format!("plot_{name}.csv"));
        let mut file = fs::File::create(&path)?;
        writeln!(file, "x,series,y,y_err")?;
        for r in rows {
            writeln!(file, "{},{},{},{}", r.x, escape_csv(&r.series), r.y, r.y_err)?;
        }
        Ok(path)
    }

    /// Write a generic CSV table.
    pub fn write_table(
        &self,
        name: &str,
        header: &str,
        rows: impl IntoIterator<Item = String>,
    ) -> std::io::Result<PathBuf> {
        let path = self.out_dir.join(format!("{name}.csv"));
        let mut file = fs::File::create(&path)?;
        writeln!(file, "{header}")?;
        for row in rows {
            writeln!(file, "{row}")?;
        }
        Ok(path)
    }
}

fn escape_csv(field: &str) -> String {
    if field.contains(',') || field.contains('"') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
