use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Noise, gating and model parameters. The noise levels are calibration
/// constants: `r_diag` matches the 0.1 m detection noise and `q_diag`
/// lets position uncertainty grow by roughly 0.5 m over 1 s without fixes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EkfConfig {
    /// Continuous-time process noise density per state.
    pub q_diag: [f64; 6],
    /// Position measurement variance, m^2.
    pub r_diag: [f64; 2],
    /// Accept a fix when its squared Mahalanobis distance is at most this.
    pub chi2_threshold: f64,
    /// Seconds of history kept for delayed-fix replay.
    pub history_horizon: f64,
    /// Body-frame drag entries (negative), 1/s.
    pub drag_kx: f64,
    pub drag_ky: f64,
    pub g: f64,
    /// Initial covariance diagonal.
    pub p0_diag: [f64; 6],
}

impl Default for EkfConfig {
    fn default() -> Self {
        let bias_var = 3f64.to_radians().powi(2);
        Self {
            q_diag: [1e-3, 1e-3, 0.75, 0.75, 1e-6, 1e-6],
            r_diag: [0.01, 0.01],
            chi2_threshold: 9.21,
            history_horizon: 0.5,
            drag_kx: -0.5,
            drag_ky: -0.5,
            g: 9.81,
            p0_diag: [1.0, 1.0, 1.0, 1.0, bias_var, bias_var],
        }
    }
}

impl EkfConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.q_diag.iter().chain(&self.r_diag).any(|v| !(*v > 0.0)) {
            return Err(ConfigError::invalid("ekf noise", "noise diagonals must be > 0"));
        }
        if self.p0_diag.iter().any(|v| !(*v >= 0.0)) {
            return Err(ConfigError::invalid("ekf.p0_diag", "must be >= 0"));
        }
        if !(self.chi2_threshold > 0.0) {
            return Err(ConfigError::invalid("ekf.chi2_threshold", "must be > 0"));
        }
        if !(self.history_horizon >= 0.0) {
            return Err(ConfigError::invalid("ekf.history_horizon", "must be >= 0"));
        }
        Ok(())
    }
}
