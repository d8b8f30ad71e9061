use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Simulated vehicle state. Position and velocity are NED (z negative up);
/// `thrust` is specific thrust along body z, so hover is `-g`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TrueState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
    pub thrust: f64,
}

impl TrueState {
    /// Level hover at a position and heading.
    pub fn hover(x: f64, y: f64, z: f64, psi: f64, g: f64) -> Self {
        Self { x, y, z, psi, thrust: -g, ..Self::default() }
    }
}

/// Attitude and thrust setpoints for the first-order inner loops.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ControlInput {
    pub phi_c: f64,
    pub theta_c: f64,
    pub psi_c: f64,
    pub thrust_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimParams {
    pub g: f64,
    /// Diagonal of the body-frame linear drag matrix, 1/s (entries <= 0).
    pub drag: [f64; 3],
    pub k_phi: f64,
    pub k_theta: f64,
    pub k_psi: f64,
    pub k_thrust: f64,
    pub dt: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self { g: 9.81, drag: [-0.5, -0.5, 0.0], k_phi: 6.0, k_theta: 6.0, k_psi: 5.0, k_thrust: 3.0, dt: 0.002 }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ConfigError::invalid("sim.dt", "must be > 0"));
        }
        if [self.k_phi, self.k_theta, self.k_psi, self.k_thrust].iter().any(|k| !(*k > 0.0)) {
            return Err(ConfigError::invalid("sim gains", "loop gains must be > 0"));
        }
        if self.drag.iter().any(|d| !(*d <= 0.0)) {
            return Err(ConfigError::invalid("sim.drag", "drag entries must be <= 0"));
        }
        Ok(())
    }
}

/// Sensor noise, bias and timing. Angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SensorParams {
    pub sigma_att: f64,
    pub bias_north: f64,
    pub bias_east: f64,
    pub sigma_xy: f64,
    pub sigma_outlier: f64,
    pub p_outlier: f64,
    /// Detection frequency, Hz.
    pub f_v: f64,
    /// Vision latency, s.
    pub delay: f64,
}

impl Default for SensorParams {
    fn default() -> Self {
        Self {
            sigma_att: 0.5f64.to_radians(),
            bias_north: (-2f64).to_radians(),
            bias_east: 1f64.to_radians(),
            sigma_xy: 0.1,
            sigma_outlier: 3.0,
            p_outlier: 0.0,
            f_v: 30.0,
            delay: 0.0,
        }
    }
}

impl SensorParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if [self.sigma_att, self.sigma_xy, self.sigma_outlier].iter().any(|s| !(*s >= 0.0)) {
            return Err(ConfigError::invalid("sensors", "standard deviations must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.p_outlier) {
            return Err(ConfigError::invalid("sensors.p_outlier", "must lie in [0, 1]"));
        }
        if !(self.f_v > 0.0) {
            return Err(ConfigError::invalid("sensors.f_v", "must be > 0"));
        }
        if !(self.delay >= 0.0) {
            return Err(ConfigError::invalid("sensors.delay", "must be >= 0"));
        }
        Ok(())
    }
}

/// Attitude reading from the AHRS.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AhrsSample {
    pub t: f64,
    pub phi_m: f64,
    pub theta_m: f64,
    pub psi_m: f64,
}

impl AhrsSample {
    pub fn level(t: f64) -> Self {
        Self { t, ..Self::default() }
    }
}

/// A gate-relative detection. `gate_truth_id` and `is_outlier` are ground
/// truth for scoring and never reach the filters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateDetection {
    pub t_capture: f64,
    pub t_arrival: f64,
    pub rel_x: f64,
    pub rel_y: f64,
    pub gate_truth_id: u32,
    pub is_outlier: bool,
}
