//! CSV export of ground-truth trajectories and detection streams.

use std::io::Write;

use serde::Serialize;

use super::types::{GateDetection, TrueState};
use crate::error::ConfigError;

#[derive(Serialize)]
struct TrajectoryRow {
    t: f64,
    x: f64,
    y: f64,
    z: f64,
    vx: f64,
    vy: f64,
    vz: f64,
    phi: f64,
    theta: f64,
    psi: f64,
}

/// Columns: `t,x,y,z,vx,vy,vz,phi,theta,psi`.
pub fn write_trajectory_csv<W: Write>(out: W, rows: impl IntoIterator<Item = (f64, TrueState)>) -> Result<(), ConfigError> {
    let mut w = csv::Writer::from_writer(out);
    for (t, s) in rows {
        w.serialize(TrajectoryRow {
            t,
            x: s.x,
            y: s.y,
            z: s.z,
            vx: s.vx,
            vy: s.vy,
            vz: s.vz,
            phi: s.phi,
            theta: s.theta,
            psi: s.psi,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: `t_capture,t_arrival,rel_x,rel_y,gate_truth_id,is_outlier`.
pub fn write_detections_csv<'a, W: Write>(
    out: W,
    rows: impl IntoIterator<Item = &'a GateDetection>,
) -> Result<(), ConfigError> {
    let mut w = csv::Writer::from_writer(out);
    for d in rows {
        w.serialize(d)?;
    }
    w.flush()?;
    Ok(())
}
