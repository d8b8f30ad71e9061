use nalgebra::{SMatrix, SVector};

use super::config::EkfConfig;
use crate::error::EkfError;
use crate::sim::AhrsSample;

pub type Vec6 = SVector<f64, 6>;
pub type Cov6 = SMatrix<f64, 6, 6>;

/// Roll and pitch after removing the heading-rotated bias states.
fn corrected_attitude(x: &Vec6, u: &AhrsSample) -> Result<(f64, f64), EkfError> {
    let (s, c) = u.psi_m.sin_cos();
    let (bn, be) = (x[4], x[5]);
    let phi = u.phi_m - (c * bn + s * be);
    let theta = u.theta_m - (-s * bn + c * be);
    for angle in [phi, theta] {
        if !(angle.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(EkfError::InvalidAttitude { angle });
        }
    }
    Ok((phi, theta))
}

/// `R(psi) diag(kx, ky) R(psi)^T`.
fn drag_world(psi: f64, cfg: &EkfConfig) -> [[f64; 2]; 2] {
    let (s, c) = psi.sin_cos();
    let (kx, ky) = (cfg.drag_kx, cfg.drag_ky);
    let off = (kx - ky) * s * c;
    [[kx * c * c + ky * s * s, off], [off, kx * s * s + ky * c * c]]
}

/// Continuous-time state derivative.
pub fn dynamics(x: &Vec6, u: &AhrsSample, cfg: &EkfConfig) -> Result<Vec6, EkfError> {
    let (phi, theta) = corrected_attitude(x, u)?;
    let (s, c) = u.psi_m.sin_cos();
    let (ahx, ahy) = (-cfg.g * theta.tan(), cfg.g * phi.tan());
    let d = drag_world(u.psi_m, cfg);
    let (vx, vy) = (x[2], x[3]);
    Ok(Vec6::new(
        vx,
        vy,
        c * ahx - s * ahy + d[0][0] * vx + d[0][1] * vy,
        s * ahx + c * ahy + d[1][0] * vx + d[1][1] * vy,
        0.0,
        0.0,
    ))
}

/// Analytic Jacobian of [`dynamics`] with respect to the state.
pub fn jacobian(x: &Vec6, u: &AhrsSample, cfg: &EkfConfig) -> Result<Cov6, EkfError> {
    let (phi, theta) = corrected_attitude(x, u)?;
    let (s, c) = u.psi_m.sin_cos();
    let sec2_theta = 1.0 / theta.cos().powi(2);
    let sec2_phi = 1.0 / phi.cos().powi(2);
    // Heading-frame acceleration sensitivities to (B_N, B_E).
    let dahx = [-cfg.g * sec2_theta * s, cfg.g * sec2_theta * c];
    let dahy = [-cfg.g * sec2_phi * c, -cfg.g * sec2_phi * s];
    let d = drag_world(u.psi_m, cfg);

    let mut f = Cov6::zeros();
    f[(0, 2)] = 1.0;
    f[(1, 3)] = 1.0;
    f[(2, 2)] = d[0][0];
    f[(2, 3)] = d[0][1];
    f[(3, 2)] = d[1][0];
    f[(3, 3)] = d[1][1];
    for j in 0..2 {
        f[(2, 4 + j)] = c * dahx[j] - s * dahy[j];
        f[(3, 4 + j)] = s * dahx[j] + c * dahy[j];
    }
    Ok(f)
}
