use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{FilterKind, ScenarioConfig};
use super::run::run_scenario;
use crate::error::ConfigError;

/// Scenario parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    DetectionFrequency,
    OutlierProbability,
    Delay,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::DetectionFrequency => "detection_frequency",
            SweepAxis::OutlierProbability => "outlier_probability",
            SweepAxis::Delay => "delay",
        }
    }

    pub fn apply(self, cfg: &mut ScenarioConfig, value: f64) {
        match self {
            SweepAxis::DetectionFrequency => cfg.sensors.f_v = value,
            SweepAxis::OutlierProbability => cfg.sensors.p_outlier = value,
            SweepAxis::Delay => cfg.sensors.delay = value,
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [SweepAxis::DetectionFrequency, SweepAxis::OutlierProbability, SweepAxis::Delay]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| ConfigError::Unknown { what: "sweep axis", value: s.to_owned() })
    }
}

/// One run of a sweep; a row of the long-format CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub value: f64,
    pub filter: FilterKind,
    pub seed: u64,
    pub gamma: f64,
    pub diverged: bool,
    pub t_predict: f64,
    pub t_correct: f64,
}

/// Aggregate over the repeats of one (value, filter) cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub value: f64,
    pub filter: FilterKind,
    pub runs: usize,
    pub mean_gamma: f64,
    /// Mean γ over runs that did not diverge; NaN when all diverged.
    pub mean_gamma_converged: f64,
    pub divergence_rate: f64,
    pub mean_t_predict: f64,
    pub mean_t_correct: f64,
    pub mean_core_time: f64,
}

/// Seed of repeat `i`: the base seed xor the repeat index, shared by every
/// value and filter so cells see comparable noise.
pub fn repeat_seed(base: u64, repeat: usize) -> u64 {
    base ^ repeat as u64
}

/// Runs `repeats` seeds of every (value, filter) combination. Records come
/// back ordered by value, then filter (in the given order), then repeat,
/// regardless of `jobs`. Runs that fail numerically are recorded as
/// diverged; only configuration errors abort the sweep.
///
/// With `jobs > 1` runs execute on that many threads. Keep `jobs = 1` when
/// the core times matter.
pub fn sweep(
    base: &ScenarioConfig,
    axis: SweepAxis,
    values: &[f64],
    repeats: usize,
    filters: &[FilterKind],
    jobs: usize,
) -> Result<Vec<SweepRecord>, ConfigError> {
    if repeats < 1 {
        return Err(ConfigError::invalid("repeats", "must be >= 1"));
    }
    let mut cells = Vec::with_capacity(values.len() * filters.len() * repeats);
    for &value in values {
        for &filter in filters {
            for r in 0..repeats {
                let mut cfg = base.with_filter(filter).with_seed(repeat_seed(base.seed, r));
                axis.apply(&mut cfg, value);
                cfg.validate()?;
                cells.push((value, cfg));
            }
        }
    }

    let run = |(value, cfg): &(f64, ScenarioConfig)| -> Result<SweepRecord, ConfigError> {
        let r = run_scenario(cfg)?;
        Ok(SweepRecord {
            value: *value,
            filter: cfg.filter,
            seed: cfg.seed,
            gamma: r.gamma,
            diverged: r.diverged,
            t_predict: r.core.predict,
            t_correct: r.core.correct,
        })
    };

    let jobs = jobs.max(1).min(cells.len().max(1));
    if jobs == 1 {
        return cells.iter().map(run).collect();
    }
    let chunk = cells.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> =
            cells.chunks(chunk).map(|part| s.spawn(move || part.iter().map(run).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
    })
}

/// Groups records by (value, filter), preserving first-seen order.
pub fn summarize(records: &[SweepRecord]) -> Vec<CellSummary> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<(u64, FilterKind), Vec<&SweepRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.value.to_bits(), r.filter);
        groups.entry(key).or_insert_with(|| {
            order.push(key);
            Vec::new()
        });
        groups.get_mut(&key).expect("just inserted").push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let rs = &groups[&key];
            let n = rs.len() as f64;
            let mean = |f: fn(&SweepRecord) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / n;
            let converged: Vec<f64> = rs.iter().filter(|r| !r.diverged).map(|r| r.gamma).collect();
            CellSummary {
                value: f64::from_bits(key.0),
                filter: key.1,
                runs: rs.len(),
                mean_gamma: mean(|r| r.gamma),
                mean_gamma_converged: if converged.is_empty() {
                    f64::NAN
                } else {
                    converged.iter().sum::<f64>() / converged.len() as f64
                },
                divergence_rate: rs.iter().filter(|r| r.diverged).count() as f64 / n,
                mean_t_predict: mean(|r| r.t_predict),
                mean_t_correct: mean(|r| r.t_correct),
                mean_core_time: mean(|r| r.t_predict + r.t_correct),
            }
        })
        .collect()
}
