use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// How the error model is fitted over the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    /// Plain least squares over every window entry.
    LeastSquares,
    /// RANSAC with unpenalised least-squares candidates.
    Basic,
    /// RANSAC with ridge-penalised candidates.
    Prior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VmlConfig {
    /// Linear drag coefficient c, 1/s (positive).
    pub drag_c: f64,
    pub g: f64,
    /// Maximum window span, s.
    pub t_window_max: f64,
    /// Minimum entries before a fit is attempted.
    pub n_fit: usize,
    pub ransac_iterations: usize,
    /// Fraction of the window drawn per RANSAC iteration.
    pub sample_ratio: f64,
    /// Per-entry residual clamp used when scoring candidates, m.
    pub residual_clamp: f64,
    /// Ridge penalty on the offset and drift terms.
    pub prior_px: f64,
    pub prior_pv: f64,
    /// Hard cap on buffered entries.
    pub capacity: usize,
    /// How far back predictions are archived for pairing delayed fixes, s.
    pub archive_horizon: f64,
}

impl Default for VmlConfig {
    fn default() -> Self {
        Self {
            drag_c: 0.5,
            g: 9.81,
            t_window_max: 1.0,
            n_fit: 4,
            ransac_iterations: 5,
            sample_ratio: 0.4,
            residual_clamp: 0.5,
            prior_px: 0.0,
            prior_pv: 0.3,
            capacity: 2048,
            archive_horizon: 2.0,
        }
    }
}

impl VmlConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.ransac_iterations < 1 {
            return Err(ConfigError::invalid("vml.ransac_iterations", "must be >= 1"));
        }
        if !(self.sample_ratio > 0.0 && self.sample_ratio <= 1.0) {
            return Err(ConfigError::invalid("vml.sample_ratio", "must lie in (0, 1]"));
        }
        if !(self.residual_clamp > 0.0) {
            return Err(ConfigError::invalid("vml.residual_clamp", "must be > 0"));
        }
        if !(self.prior_px >= 0.0 && self.prior_pv >= 0.0) {
            return Err(ConfigError::invalid("vml.prior", "penalties must be >= 0"));
        }
        if !(self.t_window_max > 0.0) {
            return Err(ConfigError::invalid("vml.t_window_max", "must be > 0"));
        }
        if self.n_fit < 2 || self.capacity < self.n_fit {
            return Err(ConfigError::invalid("vml.n_fit", "need 2 <= n_fit <= capacity"));
        }
        if !(self.drag_c >= 0.0 && self.archive_horizon >= 0.0) {
            return Err(ConfigError::invalid("vml", "drag_c and archive_horizon must be >= 0"));
        }
        Ok(())
    }
}
