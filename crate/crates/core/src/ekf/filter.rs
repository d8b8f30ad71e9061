use nalgebra::{Matrix2, SMatrix, Vector2};

use super::config::EkfConfig;
use super::model::{dynamics, jacobian, Cov6, Vec6};
use crate::error::EkfError;
use crate::sim::AhrsSample;

/// Mean and covariance over `[x, y, vx, vy, B_N, B_E]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EkfBelief {
    pub mean: Vec6,
    pub cov: Cov6,
}

impl EkfBelief {
    pub fn new(mean: Vec6, cov_diag: &[f64; 6]) -> Self {
        Self { mean, cov: Cov6::from_diagonal(&Vec6::from_column_slice(cov_diag)) }
    }

    pub fn position(&self) -> (f64, f64) {
        (self.mean[0], self.mean[1])
    }
}

type H = SMatrix<f64, 2, 6>;

fn selector() -> H {
    let mut h = H::zeros();
    h[(0, 0)] = 1.0;
    h[(1, 1)] = 1.0;
    h
}

fn symmetrize(p: &Cov6) -> Cov6 {
    (p + p.transpose()) * 0.5
}

/// Euler propagation of the mean and `P' = Phi P Phi^T + Q dt` with
/// `Phi = I + F dt`.
pub fn ekf_predict(belief: &EkfBelief, ahrs: &AhrsSample, cfg: &EkfConfig, dt: f64) -> Result<EkfBelief, EkfError> {
    let f = jacobian(&belief.mean, ahrs, cfg)?;
    let xdot = dynamics(&belief.mean, ahrs, cfg)?;
    let phi = Cov6::identity() + f * dt;
    let q = Cov6::from_diagonal(&Vec6::from_column_slice(&cfg.q_diag)) * dt;
    Ok(EkfBelief { mean: belief.mean + xdot * dt, cov: symmetrize(&(phi * belief.cov * phi.transpose() + q)) })
}

/// Innovation `z - Hx` and its covariance `H P H^T + R`.
pub fn innovation(belief: &EkfBelief, z: (f64, f64), cfg: &EkfConfig) -> (Vector2<f64>, Matrix2<f64>) {
    let nu = Vector2::new(z.0 - belief.mean[0], z.1 - belief.mean[1]);
    let s = belief.cov.fixed_view::<2, 2>(0, 0).into_owned() + Matrix2::from_diagonal(&Vector2::from(cfg.r_diag));
    (nu, s)
}

/// Kalman update with the Joseph-form covariance.
pub fn ekf_update(belief: &EkfBelief, z: (f64, f64), cfg: &EkfConfig) -> Result<EkfBelief, EkfError> {
    if !(z.0.is_finite() && z.1.is_finite()) {
        return Err(EkfError::NonFiniteMeasurement);
    }
    let (nu, s) = innovation(belief, z, cfg);
    let s_inv = s.try_inverse().ok_or(EkfError::SingularInnovation)?;
    let h = selector();
    let r = Matrix2::from_diagonal(&Vector2::from(cfg.r_diag));
    let k = belief.cov * h.transpose() * s_inv;
    let ikh = Cov6::identity() - k * h;
    let cov = ikh * belief.cov * ikh.transpose() + k * r * k.transpose();
    Ok(EkfBelief { mean: belief.mean + k * nu, cov: symmetrize(&cov) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateDecision {
    pub accept: bool,
    /// Squared Mahalanobis distance of the innovation.
    pub d2: f64,
}

/// Chi-square gate: accept iff `nu^T S^-1 nu <= chi2_threshold`.
pub fn mahalanobis_gate(belief: &EkfBelief, z: (f64, f64), cfg: &EkfConfig) -> Result<GateDecision, EkfError> {
    let (nu, s) = innovation(belief, z, cfg);
    let s_inv = s.try_inverse().ok_or(EkfError::SingularInnovation)?;
    let d2 = (nu.transpose() * s_inv * nu)[(0, 0)];
    if !d2.is_finite() {
        return Err(EkfError::NonFiniteMeasurement);
    }
    Ok(GateDecision { accept: d2 <= cfg.chi2_threshold, d2 })
}
