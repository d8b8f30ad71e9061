//! File layout of the harness output directory.
//!
//! * `sweep_<axis>.csv`: one row per run with columns
//!   `value, filter, seed, gamma, diverged, t_predict, t_correct`
//!   (γ in metres, times in seconds of core filter time).
//! * `sweep_<axis>.json`: the axis, the base scenario and one summary per
//!   (value, filter) cell.
//! * `run_<filter>_<seed>.json`: metrics of a single run, next to
//!   `trace_<filter>_<seed>.csv` (per-step truth and estimate) and
//!   `corrections_<filter>_<seed>.csv` (one row per delivered fix).
//! * `comparison.csv`: the table produced by [`compare`].

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{FilterKind, ScenarioConfig};
use super::run::RunResult;
use super::sweep::{summarize, CellSummary, SweepAxis, SweepRecord};
use crate::error::ConfigError;

fn create(path: &Path) -> Result<BufWriter<File>, ConfigError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), ConfigError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv(path: &Path, records: &[SweepRecord]) -> Result<(), ConfigError> {
    write_rows(path, records)
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRecord>, ConfigError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub axis: SweepAxis,
    pub repeats: usize,
    pub base: ScenarioConfig,
    pub cells: Vec<CellSummary>,
}

/// Writes `sweep_<axis>.csv` and `sweep_<axis>.json` into `dir`.
pub fn write_sweep(
    dir: &Path,
    axis: SweepAxis,
    repeats: usize,
    base: &ScenarioConfig,
    records: &[SweepRecord],
) -> Result<(PathBuf, PathBuf), ConfigError> {
    let csv_path = dir.join(format!("sweep_{axis}.csv"));
    let json_path = dir.join(format!("sweep_{axis}.json"));
    write_sweep_csv(&csv_path, records)?;
    let summary = SweepSummary { axis, repeats, base: base.clone(), cells: summarize(records) };
    serde_json::to_writer_pretty(create(&json_path)?, &summary)?;
    Ok((csv_path, json_path))
}

/// Writes the metrics, trace and correction log of one run into `dir`.
pub fn write_run(dir: &Path, result: &RunResult) -> Result<PathBuf, ConfigError> {
    let stem = format!("{}_{}", result.filter, result.seed);
    let json_path = dir.join(format!("run_{stem}.json"));
    serde_json::to_writer_pretty(create(&json_path)?, result)?;
    write_rows(&dir.join(format!("trace_{stem}.csv")), &result.trace)?;
    write_rows(&dir.join(format!("corrections_{stem}.csv")), &result.corrections)?;
    Ok(json_path)
}

/// A row of the comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    /// Sweep axis, or `run` for single runs.
    pub axis: &'static str,
    pub value: f64,
    pub filter: FilterKind,
    pub runs: usize,
    pub mean_gamma: f64,
    pub divergence_rate: f64,
    pub mean_t_predict: f64,
    pub mean_t_correct: f64,
}

#[derive(Deserialize)]
struct StoredRun {
    filter: FilterKind,
    gamma: f64,
    diverged: bool,
    core: StoredCore,
}

#[derive(Deserialize)]
struct StoredCore {
    predict: f64,
    correct: f64,
}

/// Collects every sweep CSV and single-run JSON in `dir` into one table,
/// writes it to `comparison.csv` and returns it.
pub fn compare(dir: &Path) -> Result<Vec<ComparisonRow>, ConfigError> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    entries.sort();
    let mut rows = Vec::new();
    let mut singles: Vec<SweepRecord> = Vec::new();
    for path in &entries {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else { continue };
        if let Some(axis) = name.strip_prefix("sweep_").and_then(|n| n.strip_suffix(".csv")) {
            let axis: SweepAxis = axis.parse()?;
            for c in summarize(&read_sweep_csv(path)?) {
                rows.push(ComparisonRow {
                    axis: axis.name(),
                    value: c.value,
                    filter: c.filter,
                    runs: c.runs,
                    mean_gamma: c.mean_gamma,
                    divergence_rate: c.divergence_rate,
                    mean_t_predict: c.mean_t_predict,
                    mean_t_correct: c.mean_t_correct,
                });
            }
        } else if name.starts_with("run_") && name.ends_with(".json") {
            let run: StoredRun = serde_json::from_reader(File::open(path)?)?;
            singles.push(SweepRecord {
                value: 0.0,
                filter: run.filter,
                seed: 0,
                gamma: run.gamma,
                diverged: run.diverged,
                t_predict: run.core.predict,
                t_correct: run.core.correct,
            });
        }
    }
    singles.sort_by_key(|r| r.filter);
    for c in summarize(&singles) {
        rows.push(ComparisonRow {
            axis: "run",
            value: c.value,
            filter: c.filter,
            runs: c.runs,
            mean_gamma: c.mean_gamma,
            divergence_rate: c.divergence_rate,
            mean_t_predict: c.mean_t_predict,
            mean_t_correct: c.mean_t_correct,
        });
    }
    write_rows(&dir.join("comparison.csv"), &rows)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_csv_header_is_fixed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let rec = SweepRecord {
            value: 30.0,
            filter: FilterKind::EkfOr,
            seed: 7,
            gamma: 0.25,
            diverged: false,
            t_predict: 0.01,
            t_correct: 0.02,
        };
        write_sweep_csv(&path, &[rec]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), "value,filter,seed,gamma,diverged,t_predict,t_correct");
        assert!(text.contains("ekf_or"));
        assert_eq!(read_sweep_csv(&path).unwrap(), vec![rec]);
    }
}
