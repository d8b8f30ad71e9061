use serde::{Deserialize, Serialize};

use super::window::WindowBuffer;
use super::ErrorModel;
use crate::error::VmlError;

/// Diagonal ridge penalty on (offset, slope).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Prior {
    pub px: f64,
    pub pv: f64,
}

impl Prior {
    pub const NONE: Prior = Prior { px: 0.0, pv: 0.0 };
}

/// `offset + slope * dt`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub offset: f64,
    pub slope: f64,
}

impl LineFit {
    #[inline]
    pub fn eval(&self, dt: f64) -> f64 {
        self.offset + self.slope * dt
    }
}

/// Minimises `|X b - r|^2 + b' P b` with rows `X = [1, dt]`, where `dts` are
/// sample times relative to the window start. Solves the 2x2 system
/// `(X'X + P) b = X'r` in closed form.
pub fn solve_regularized_ls(dts: &[f64], residuals: &[f64], prior: Prior) -> Result<LineFit, VmlError> {
    if dts.len() != residuals.len() {
        return Err(VmlError::LengthMismatch { times: dts.len(), residuals: residuals.len() });
    }
    solve_pairs(dts.iter().copied().zip(residuals.iter().copied()), prior)
}

pub(crate) fn solve_pairs(pairs: impl Iterator<Item = (f64, f64)>, prior: Prior) -> Result<LineFit, VmlError> {
    let (mut n, mut st, mut stt, mut sr, mut str_) = (0usize, 0.0, 0.0, 0.0, 0.0);
    for (t, r) in pairs {
        n += 1;
        st += t;
        stt += t * t;
        sr += r;
        str_ += t * r;
    }
    if n < 2 {
        return Err(VmlError::TooFewSamples(n));
    }
    let a00 = n as f64 + prior.px;
    let a11 = stt + prior.pv;
    let det = a00 * a11 - st * st;
    if !(det > 1e-12 * a00 * a11) {
        return Err(VmlError::DegenerateFit { det });
    }
    Ok(LineFit { offset: (a11 * sr - st * str_) / det, slope: (a00 * str_ - st * sr) / det })
}

/// Sum over entries of `min(|fit(dt) - r|, clamp)`.
pub fn score_axis(fit: &LineFit, dts: &[f64], residuals: &[f64], clamp: f64) -> f64 {
    dts.iter().zip(residuals).map(|(&t, &r)| (fit.eval(t) - r).abs().min(clamp)).sum()
}

/// Clamped total prediction error of a candidate model, per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisScores {
    pub x: f64,
    pub y: f64,
}

impl AxisScores {
    pub fn total(&self) -> f64 {
        self.x + self.y
    }
}

/// Scores `beta` against every window entry. Each axis is bounded by
/// `window.len() * clamp`.
pub fn score_candidate(beta: &ErrorModel, window: &WindowBuffer, clamp: f64) -> AxisScores {
    let mut s = AxisScores { x: 0.0, y: 0.0 };
    for e in window.iter() {
        let dt = e.t - beta.t0;
        let (rx, ry) = e.residual();
        s.x += (beta.dx0 + beta.dvx0 * dt - rx).abs().min(clamp);
        s.y += (beta.dy0 + beta.dvy0 * dt - ry).abs().min(clamp);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vml::WindowEntry;

    #[test]
    fn exact_line_is_interpolated() {
        let ts = [0.0, 0.2, 0.5, 0.9];
        let rs: Vec<f64> = ts.iter().map(|t| 0.3 + 0.1 * t).collect();
        let f = solve_regularized_ls(&ts, &rs, Prior::NONE).unwrap();
        assert!((f.offset - 0.3).abs() < 1e-12);
        assert!((f.slope - 0.1).abs() < 1e-12);
    }

    #[test]
    fn huge_slope_penalty_pins_slope_and_returns_mean() {
        let ts = [0.0, 0.2, 0.5, 0.9];
        let rs: Vec<f64> = ts.iter().map(|t| 0.3 + 0.1 * t).collect();
        let f = solve_regularized_ls(&ts, &rs, Prior { px: 0.0, pv: 1e12 }).unwrap();
        let mean = rs.iter().sum::<f64>() / rs.len() as f64;
        assert!(f.slope.abs() < 1e-9);
        assert!((f.offset - mean).abs() < 1e-9);
    }

    #[test]
    fn identical_times_are_degenerate_without_prior() {
        let err = solve_regularized_ls(&[0.4, 0.4, 0.4], &[1.0, 2.0, 3.0], Prior::NONE).unwrap_err();
        assert!(matches!(err, VmlError::DegenerateFit { .. }));
        // A slope penalty makes the same data solvable.
        assert!(solve_regularized_ls(&[0.4, 0.4, 0.4], &[1.0, 2.0, 3.0], Prior { px: 0.0, pv: 0.3 }).is_ok());
    }

    #[test]
    fn input_errors() {
        assert!(matches!(solve_regularized_ls(&[0.0], &[1.0], Prior::NONE), Err(VmlError::TooFewSamples(1))));
        assert!(matches!(
            solve_regularized_ls(&[0.0, 1.0], &[1.0], Prior::NONE),
            Err(VmlError::LengthMismatch { .. })
        ));
    }

    fn window_on_line(beta: &ErrorModel, ts: &[f64]) -> WindowBuffer {
        ts.iter()
            .map(|&t| WindowEntry {
                t,
                pred_x: 0.0,
                pred_y: 0.0,
                meas_x: beta.dx0 + beta.dvx0 * (t - beta.t0),
                meas_y: beta.dy0 + beta.dvy0 * (t - beta.t0),
            })
            .collect()
    }

    #[test]
    fn perfect_candidate_scores_zero() {
        let beta = ErrorModel { t0: 1.0, dx0: 0.4, dvx0: -0.2, dy0: 0.1, dvy0: 0.3 };
        let w = window_on_line(&beta, &[1.0, 1.1, 1.3, 1.6]);
        assert!(score_candidate(&beta, &w, 0.5).total() < 1e-12);
    }

    #[test]
    fn far_outlier_contributes_exactly_the_clamp() {
        let beta = ErrorModel { t0: 0.0, dx0: 0.4, dvx0: -0.2, dy0: 0.0, dvy0: 0.0 };
        let mut entries: Vec<WindowEntry> = window_on_line(&beta, &[0.0, 0.1, 0.2, 0.3]).iter().copied().collect();
        entries[2].meas_x += 10.0 * 0.5;
        let w: WindowBuffer = entries.into_iter().collect();
        let s = score_candidate(&beta, &w, 0.5);
        assert!((s.x - 0.5).abs() < 1e-12);
        assert!(s.y.abs() < 1e-12);
    }

    #[test]
    fn saturated_window_hits_the_bound() {
        let beta = ErrorModel::default();
        let w: WindowBuffer = (0..7)
            .map(|k| WindowEntry { t: k as f64 * 0.1, pred_x: 0.0, pred_y: 0.0, meas_x: 50.0, meas_y: -50.0 })
            .collect();
        let s = score_candidate(&beta, &w, 0.5);
        assert_eq!(s.x, 7.0 * 0.5);
        assert_eq!(s.y, 7.0 * 0.5);
    }
}
