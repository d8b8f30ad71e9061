use nalgebra::{Matrix3, Rotation3, Vector3};

use super::types::{ControlInput, SimParams, TrueState};
use crate::error::SimError;
use crate::geometry::wrap_angle;

/// Advances the 10-state model by one forward-Euler step of `params.dt`.
///
/// Translational dynamics are gravity, body-z thrust and linear body-frame
/// drag rotated into the world; attitude and thrust follow first-order
/// loops toward their setpoints.
pub fn step_dynamics(state: &TrueState, input: &ControlInput, params: &SimParams) -> Result<TrueState, SimError> {
    let dt = params.dt;
    let r = Rotation3::from_euler_angles(state.phi, state.theta, state.psi);
    let v = Vector3::new(state.vx, state.vy, state.vz);
    let drag = Matrix3::from_diagonal(&Vector3::from(params.drag));
    let acc = Vector3::new(0.0, 0.0, params.g)
        + r * Vector3::new(0.0, 0.0, state.thrust)
        + r.matrix() * drag * r.matrix().transpose() * v;

    let next = TrueState {
        x: state.x + state.vx * dt,
        y: state.y + state.vy * dt,
        z: state.z + state.vz * dt,
        vx: state.vx + acc.x * dt,
        vy: state.vy + acc.y * dt,
        vz: state.vz + acc.z * dt,
        phi: wrap_angle(state.phi + params.k_phi * (input.phi_c - state.phi) * dt),
        theta: wrap_angle(state.theta + params.k_theta * (input.theta_c - state.theta) * dt),
        psi: wrap_angle(state.psi + params.k_psi * wrap_angle(input.psi_c - state.psi) * dt),
        thrust: state.thrust + params.k_thrust * (input.thrust_c - state.thrust) * dt,
    };
    check_finite(&next)?;
    Ok(next)
}

fn check_finite(s: &TrueState) -> Result<(), SimError> {
    let fields = [
        ("x", s.x),
        ("y", s.y),
        ("z", s.z),
        ("vx", s.vx),
        ("vy", s.vy),
        ("vz", s.vz),
        ("phi", s.phi),
        ("theta", s.theta),
        ("psi", s.psi),
        ("thrust", s.thrust),
    ];
    match fields.iter().find(|(_, v)| !v.is_finite()) {
        Some((field, _)) => Err(SimError::Divergence { field }),
        None => Ok(()),
    }
}
