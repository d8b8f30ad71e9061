use serde::{Deserialize, Serialize};

use super::control::NavConfig;
use super::gates::GateMap;
use crate::geometry::wrap_angle;

/// Flight-plan target. `psi` is the heading held while flying toward it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub psi: f64,
}

/// Places one waypoint `offset` metres past each mapped gate along its
/// flight direction. Each waypoint heading points from the previous
/// waypoint to it, so the heading slewed to near waypoint `i` aims at `i + 1`.
pub fn waypoints_from_map(map: &GateMap, offset: f64) -> Vec<Waypoint> {
    let pts: Vec<(f64, f64, f64)> = map
        .gates
        .iter()
        .map(|g| (g.x + offset * g.psi.cos(), g.y + offset * g.psi.sin(), g.z))
        .collect();
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (x, y, z) = pts[i];
            let psi = if n == 1 {
                map.gates[0].psi
            } else {
                let (px, py, _) = pts[(i + n - 1) % n];
                (y - py).atan2(x - px)
            };
            Waypoint { x, y, z, psi }
        })
        .collect()
}

/// State threaded through [`flight_plan_step`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlightPlanState {
    pub waypoint_id: usize,
    pub psi_ref: f64,
    /// Completed laps; incremented whenever the waypoint index wraps.
    pub laps: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub psi: f64,
}

pub fn flight_plan_step(
    estimate: (f64, f64, f64),
    cfg: &NavConfig,
    waypoints: &[Waypoint],
    state: FlightPlanState,
) -> (Reference, FlightPlanState) {
    let n = waypoints.len();
    let mut next = state;
    let wp = &waypoints[next.waypoint_id];
    let d2 = (estimate.0 - wp.x).powi(2) + (estimate.1 - wp.y).powi(2);
    if d2 < cfg.d_switch_wp * cfg.d_switch_wp {
        next.waypoint_id = (next.waypoint_id + 1) % n;
        if next.waypoint_id == 0 {
            next.laps += 1;
        }
    } else if d2 < cfg.d_turn * cfg.d_turn {
        let psi_sp = waypoints[(next.waypoint_id + 1) % n].psi;
        next.psi_ref = wrap_angle(next.psi_ref + cfg.k_r * wrap_angle(psi_sp - next.psi_ref));
    }
    let wp = &waypoints[next.waypoint_id];
    (Reference { x: wp.x, y: wp.y, z: wp.z, psi: next.psi_ref }, next)
}
