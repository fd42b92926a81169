//! Experiment reports: JSON (full) and long-format CSV rows.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constants::SCHEMA_VERSION;
use crate::error::Result;
use crate::geometry::Model;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub seed: u64,
    pub stats: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub model: Model,
    pub k: u32,
    pub seed: u64,
    pub params: BTreeMap<String, Value>,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, model: Model, k: u32, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            model,
            k,
            seed,
            params: BTreeMap::new(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn push_row<'a>(&mut self, label: &str, stats: impl IntoIterator<Item = (&'a str, f64)>) {
        self.rows.push(ReportRow {
            label: label.to_string(),
            seed: self.seed,
            stats: stats.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        });
    }

    /// Looks up `stat` in the row labelled `label`.
    pub fn stat(&self, label: &str, stat: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.label == label).and_then(|r| r.stats.get(stat).copied())
    }

    /// `{experiment}-{model}-k{k}-s{seed}.{ext}`
    pub fn file_name(&self, ext: &str) -> String {
        format!("{}-{}-k{}-s{}.{}", self.experiment, self.model, self.k, self.seed, ext)
    }

    /// Data rows as CSV: `experiment,model,k,seed,row,statistic,value`.
    pub fn csv_rows(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["experiment", "model", "k", "seed", "row", "statistic", "value"]).map_err(csv_err)?;
        for row in &self.rows {
            for (name, value) in &row.stats {
                w.write_record([
                    self.experiment.as_str(),
                    self.model.name(),
                    &self.k.to_string(),
                    &row.seed.to_string(),
                    &row.label,
                    name,
                    &value.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    /// Writes `<dir>/<name>.json` and `<dir>/<name>.csv`. `header` lines go
    /// before the CSV data as `# key: value` comments; run metadata and
    /// timestamps belong there so data rows stay reproducible.
    pub fn write(&self, dir: &Path, header: &[(String, String)], extra: &Value) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let json_path = dir.join(self.file_name("json"));
        let csv_path = dir.join(self.file_name("csv"));
        let mut full = serde_json::to_value(self).map_err(|e| std::io::Error::other(e.to_string()))?;
        if let (Value::Object(map), Value::Object(more)) = (&mut full, extra) {
            for (k, v) in more {
                map.insert(k.clone(), v.clone());
            }
        }
        std::fs::write(&json_path, serde_json::to_string_pretty(&full).expect("serializable") + "\n")?;
        let mut f = std::fs::File::create(&csv_path)?;
        for (k, v) in header {
            writeln!(f, "# {k}: {v}")?;
        }
        f.write_all(self.csv_rows()?.as_bytes())?;
        Ok((json_path, csv_path))
    }
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    std::io::Error::other(e.to_string()).into()
}

/// Linear-interpolation quantile of an unsorted sample.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile_sorted(&v, q)
}

pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (denominator `n - 1`).
pub fn std_dev(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() as f64 - 1.0)).sqrt()
}

/// Standard summary statistics of a sample, prefixed by `name`.
pub fn summary(name: &str, values: &[f64]) -> Vec<(String, f64)> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut out = vec![
        (format!("{name}_min"), v[0]),
        (format!("{name}_max"), v[v.len() - 1]),
        (format!("{name}_mean"), mean(&v)),
    ];
    for (tag, q) in [("q05", 0.05), ("q25", 0.25), ("median", 0.5), ("q75", 0.75), ("q95", 0.95), ("q99", 0.99)] {
        out.push((format!("{name}_{tag}"), quantile_sorted(&v, q)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles() {
        let v = [3.0, 1.0, 2.0, 4.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert!((std_dev(&[1.0, 2.0, 3.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_layout() {
        let mut r = ExperimentReport::new("demo", Model::Cp1, 3, 9);
        r.push_row("all", [("b", 2.5), ("a", 1.0)]);
        let csv = r.csv_rows().unwrap();
        assert_eq!(csv, "experiment,model,k,seed,row,statistic,value\ndemo,cp1,3,9,all,a,1\ndemo,cp1,3,9,all,b,2.5\n");
        assert_eq!(r.file_name("csv"), "demo-cp1-k3-s9.csv");
        assert_eq!(r.stat("all", "b"), Some(2.5));
    }
}
