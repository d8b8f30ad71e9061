//! Visual model-predictive localization.
//!
//! High-rate dead reckoning from AHRS attitude is corrected by a linear
//! model of its own error, `dx(t) = dx0 + dv0 * (t - t0)`, fitted per axis
//! over a sliding window of (prediction, fix) pairs. The AHRS input bias is
//! deliberately not estimated: over a short window it only enters through
//! terms quadratic in the sample period.

mod config;
mod filter;
mod predict;
mod ransac;
mod regression;
mod window;

pub use config::{FitMode, VmlConfig};
pub use filter::{CorrectionReport, VmlFilter, VmlSnapshot};
pub use predict::{predict_step, PredState};
pub use ransac::{fit_least_squares, fit_ransac, sample_size};
pub use regression::{score_axis, score_candidate, solve_regularized_ls, AxisScores, LineFit, Prior};
pub use window::{WindowBuffer, WindowEntry};

use crate::Estimate;

/// Fitted prediction error at the window start `t0`, per horizontal axis.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ErrorModel {
    pub t0: f64,
    pub dx0: f64,
    pub dvx0: f64,
    pub dy0: f64,
    pub dvy0: f64,
}

/// Applies the fitted error model to a prediction.
pub fn compensate(pred: &PredState, beta: &ErrorModel) -> Estimate {
    let dt = pred.t - beta.t0;
    Estimate {
        t: pred.t,
        x: pred.x + beta.dx0 + dt * beta.dvx0,
        y: pred.y + beta.dy0 + dt * beta.dvy0,
        vx: pred.vx + beta.dvx0,
        vy: pred.vy + beta.dvy0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_model_returns_prediction() {
        let p = PredState { t: 3.0, x: 1.0, y: -2.0, vx: 0.5, vy: 0.25 };
        let e = compensate(&p, &ErrorModel::default());
        assert_eq!((e.x, e.y, e.vx, e.vy), (1.0, -2.0, 0.5, 0.25));
    }

    #[test]
    fn offset_and_drift_are_applied() {
        let p = PredState { t: 2.0, x: 0.0, y: 0.0, vx: 0.0, vy: 0.0 };
        let beta = ErrorModel { t0: 1.0, dx0: 0.5, dvx0: 0.2, dy0: 0.0, dvy0: 0.0 };
        let e = compensate(&p, &beta);
        assert!((e.x - 0.7).abs() < 1e-15);
        assert!((e.vx - 0.2).abs() < 1e-15);
    }

    #[test]
    fn correction_grows_linearly_with_time() {
        let beta = ErrorModel { t0: 0.0, dx0: 0.1, dvx0: 0.3, dy0: -0.2, dvy0: 0.05 };
        let at = |t: f64| compensate(&PredState { t, ..Default::default() }, &beta);
        let (a, b, c) = (at(1.0), at(1.5), at(2.0));
        assert!(((b.x - a.x) - (c.x - b.x)).abs() < 1e-12);
        assert!(((b.y - a.y) - (c.y - b.y)).abs() < 1e-12);
    }
}
