use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geometry::rotate_inv;

use super::plan::Waypoint;

/// Flight plan and controller tuning. Radii and gains beyond `k_r` are
/// calibration constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NavConfig {
    /// Radius around the active waypoint where the heading starts slewing, m.
    pub d_turn: f64,
    /// Radius at which the next waypoint becomes active, m.
    pub d_switch_wp: f64,
    /// Heading slew gain per flight-plan call.
    pub k_r: f64,
    /// Position loop gains, 1/s.
    pub k_x: f64,
    pub k_y: f64,
    /// Velocity loop gains, rad per m/s.
    pub kv_x: f64,
    pub kv_y: f64,
    /// Roll/pitch command limit, rad.
    pub max_tilt: f64,
    /// Altitude position gain (1/s) and vertical velocity gain (1/s).
    pub k_z: f64,
    pub kv_z: f64,
    /// Distance of each generated waypoint past its gate, m.
    pub waypoint_offset: f64,
    /// Explicit waypoints. Empty means "derive from the gate map".
    pub waypoints: Vec<Waypoint>,
}

impl Default for NavConfig {
    fn default() -> Self {
        Self {
            d_turn: 1.5,
            d_switch_wp: 0.5,
            k_r: 1.0,
            k_x: 0.8,
            k_y: 0.8,
            kv_x: 0.25,
            kv_y: 0.25,
            max_tilt: 30f64.to_radians(),
            k_z: 1.0,
            kv_z: 3.0,
            waypoint_offset: 0.5,
            waypoints: Vec::new(),
        }
    }
}

impl NavConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.d_switch_wp > 0.0 && self.d_switch_wp <= self.d_turn) {
            return Err(ConfigError::invalid("nav.d_switch_wp", "need 0 < d_switch_wp <= d_turn"));
        }
        let gains = [self.k_r, self.k_x, self.k_y, self.kv_x, self.kv_y, self.k_z, self.kv_z];
        if gains.iter().any(|g| !(*g > 0.0)) {
            return Err(ConfigError::invalid("nav gains", "all gains must be > 0"));
        }
        if !(self.max_tilt > 0.0 && self.max_tilt < std::f64::consts::FRAC_PI_2) {
            return Err(ConfigError::invalid("nav.max_tilt", "must lie in (0, pi/2)"));
        }
        Ok(())
    }
}

/// Two-loop cascade P controller. Returns `(phi_c, theta_c)`.
///
/// The world-frame command `K_v (K_x (x_r - x) - v)` is rotated into the
/// heading frame; a forward command maps to negative pitch (nose down in
/// NED), a rightward command to positive roll.
pub fn position_controller(
    reference: (f64, f64),
    estimate: (f64, f64, f64, f64),
    psi: f64,
    cfg: &NavConfig,
) -> (f64, f64) {
    let (x, y, vx, vy) = estimate;
    let cmd_world = [
        cfg.kv_x * (cfg.k_x * (reference.0 - x) - vx),
        cfg.kv_y * (cfg.k_y * (reference.1 - y) - vy),
    ];
    let [fwd, right] = rotate_inv(psi, cmd_world);
    let lim = cfg.max_tilt;
    (right.clamp(-lim, lim), (-fwd).clamp(-lim, lim))
}

/// Altitude hold: cascade P on height and climb rate, mapped to specific
/// thrust (negative is up) through the current tilt.
pub fn altitude_controller(z_ref: f64, z: f64, vz: f64, phi: f64, theta: f64, g: f64, cfg: &NavConfig) -> f64 {
    let vz_des = cfg.k_z * (z_ref - z);
    let az_des = cfg.kv_z * (vz_des - vz);
    let tilt = (phi.cos() * theta.cos()).max(0.5);
    ((az_des - g) / tilt).clamp(-2.0 * g, 0.0)
}
