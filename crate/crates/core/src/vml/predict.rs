use serde::{Deserialize, Serialize};

use super::config::VmlConfig;
use crate::error::VmlError;
use crate::geometry::rotate;
use crate::sim::AhrsSample;

/// Dead-reckoned horizontal state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PredState {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

/// One Euler step of the constant-altitude model: tilt accelerates the
/// drone along the heading frame (`-g tan(theta)` forward, `g tan(phi)`
/// right), rotated into the world by the AHRS heading, minus linear drag.
pub fn predict_step(state: &PredState, ahrs: &AhrsSample, cfg: &VmlConfig, dt: f64) -> Result<PredState, VmlError> {
    for angle in [ahrs.phi_m, ahrs.theta_m] {
        if !(angle.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(VmlError::InvalidAttitude { angle });
        }
    }
    let [ax, ay] = rotate(ahrs.psi_m, [-cfg.g * ahrs.theta_m.tan(), cfg.g * ahrs.phi_m.tan()]);
    Ok(PredState {
        t: state.t + dt,
        x: state.x + state.vx * dt,
        y: state.y + state.vy * dt,
        vx: state.vx + (ax - cfg.drag_c * state.vx) * dt,
        vy: state.vy + (ay - cfg.drag_c * state.vy) * dt,
    })
}
