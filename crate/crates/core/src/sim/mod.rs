//! Ground-truth quadrotor simulation and synthetic sensors.

mod dynamics;
pub mod export;
mod sensors;
mod types;

pub use dynamics::step_dynamics;
pub use sensors::{
    generate_detection_stream, sample_ahrs, visible_gate, DetectionSchedule, DetectionSource, Interval,
    OutlierBurst, VisibilityModel,
};
pub use types::{AhrsSample, ControlInput, GateDetection, SensorParams, SimParams, TrueState};
