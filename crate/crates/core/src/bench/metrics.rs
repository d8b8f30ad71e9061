use serde::Serialize;

use crate::error::ConfigError;

/// Final-lap RMS error above which a run counts as diverged, m.
pub const DIVERGENCE_THRESHOLD: f64 = 2.0;

/// Margin by which the estimated speed must exceed the true speed to count
/// as a velocity excursion, m/s.
pub const EXCURSION_MARGIN: f64 = 1.0;

/// One filter-rate sample of a closed-loop run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub vx: f64,
    pub vy: f64,
    pub psi: f64,
    pub x_est: f64,
    pub y_est: f64,
    pub vx_est: f64,
    pub vy_est: f64,
    /// Completed laps when the sample was taken.
    pub lap: u32,
    pub waypoint: usize,
}

/// Root mean squared horizontal error between time-aligned estimate and
/// truth positions.
pub fn compute_gamma(estimates: &[(f64, f64)], truth: &[(f64, f64)]) -> Result<f64, ConfigError> {
    if estimates.len() != truth.len() || estimates.is_empty() {
        return Err(ConfigError::Alignment { estimates: estimates.len(), truth: truth.len() });
    }
    let sum: f64 = estimates
        .iter()
        .zip(truth)
        .map(|(e, t)| (e.0 - t.0).powi(2) + (e.1 - t.1).powi(2))
        .sum();
    Ok((sum / estimates.len() as f64).sqrt())
}

/// [`compute_gamma`] over a recorded trace.
pub fn trace_gamma(trace: &[TraceSample]) -> Option<f64> {
    let est: Vec<_> = trace.iter().map(|s| (s.x_est, s.y_est)).collect();
    let truth: Vec<_> = trace.iter().map(|s| (s.x, s.y)).collect();
    compute_gamma(&est, &truth).ok()
}

/// The samples of the lap the trace ends in.
pub fn final_lap(trace: &[TraceSample]) -> &[TraceSample] {
    let Some(last) = trace.last() else { return trace };
    let start = trace.partition_point(|s| s.lap < last.lap);
    &trace[start..]
}

/// Diverged when the final-lap error exceeds [`DIVERGENCE_THRESHOLD`] or
/// cannot be computed. Depends on the trace alone.
pub fn classify_divergence(trace: &[TraceSample]) -> bool {
    match trace_gamma(final_lap(trace)) {
        Some(g) => !(g <= DIVERGENCE_THRESHOLD),
        None => true,
    }
}

/// Rising edges of `|v_est| > |v_true| + EXCURSION_MARGIN`.
pub fn count_velocity_excursions(trace: &[TraceSample]) -> usize {
    let mut above = false;
    let mut count = 0;
    for s in trace {
        let now = s.vx_est.hypot(s.vy_est) > s.vx.hypot(s.vy) + EXCURSION_MARGIN;
        if now && !above {
            count += 1;
        }
        above = now;
    }
    count
}
