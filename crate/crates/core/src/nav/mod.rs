//! Gate map, measurement globalization, flight plan and position control.

mod control;
mod gates;
mod plan;

pub use control::{altitude_controller, position_controller, NavConfig};
pub use gates::{assign_gate, global_to_local, local_to_global, Assignment, GateMap, GatePose};
pub use plan::{flight_plan_step, waypoints_from_map, FlightPlanState, Reference, Waypoint};
