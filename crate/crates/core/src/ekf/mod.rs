//! Benchmark Kalman filters on the six-state bias-augmented model
//! `[x, y, vx, vy, B_N, B_E]`: a plain EKF, one with chi-square innovation
//! gating, and one that replays a buffered history for delayed fixes.

mod config;
mod delay;
mod filter;
mod model;
mod runtime;

pub use config::EkfConfig;
pub use delay::{DelayHistory, ReplayOutcome};
pub use filter::{ekf_predict, ekf_update, innovation, mahalanobis_gate, EkfBelief, GateDecision};
pub use model::{dynamics, jacobian, Cov6, Vec6};
pub use runtime::{Ekf, EkfCorrection, EkfSnapshot, EkfVariant};
