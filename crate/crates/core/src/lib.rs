//! Visual model-predictive localization for small racing drones.
//!
//! The crate is split into five layers:
//!
//! * [`sim`] integrates a 10-state quadrotor model and produces biased AHRS
//!   readings and noisy, outlier-laden, possibly delayed gate detections.
//! * [`nav`] turns relative gate detections into global fixes, runs the
//!   waypoint flight plan and the cascade position controller.
//! * [`vml`] is the windowed prediction-error estimator: attitude-driven
//!   dead reckoning, a linear error model fitted over a sliding window with
//!   least squares, RANSAC or ridge-penalised RANSAC, and compensation.
//! * [`ekf`] holds the benchmark filters: a plain EKF, an EKF with
//!   chi-square innovation gating, and an EKF that replays a state history
//!   for delayed measurements.
//! * [`bench`] closes the loop, computes the accuracy metric, sweeps
//!   parameters and times the filter cores.
//!
//! Conventions: world frame is north-east-down, angles are radians, time is
//! seconds.

// `!(x > 0.0)` style checks are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod ekf;
pub mod error;
pub mod geometry;
pub mod nav;
pub mod sim;
pub mod vml;

pub use error::{ConfigError, EkfError, SimError, VmlError};

/// A horizontal position fix in the world frame, tagged with the time the
/// underlying image was captured.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PositionFix {
    pub t_capture: f64,
    pub x: f64,
    pub y: f64,
}

/// Horizontal position and velocity estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}
