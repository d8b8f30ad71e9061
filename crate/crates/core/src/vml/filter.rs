use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{FitMode, VmlConfig};
use super::predict::{predict_step, PredState};
use super::ransac::fit_ransac;
use super::window::{WindowBuffer, WindowEntry};
use super::{compensate, ErrorModel};
use crate::error::{ConfigError, VmlError};
use crate::sim::AhrsSample;
use crate::{Estimate, PositionFix};

/// Outcome of feeding one fix to [`VmlFilter::correct`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CorrectionReport {
    /// A new error model was fitted.
    pub fitted: bool,
    /// The fix predates the prediction archive and was dropped.
    pub stale: bool,
    /// Fix minus the compensated estimate at the capture time.
    pub innovation: (f64, f64),
    /// Change of the current position estimate caused by this fix.
    pub jump: f64,
}

/// Row of the VML snapshot CSV.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct VmlSnapshot {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub dx0: f64,
    pub dvx0: f64,
    pub dy0: f64,
    pub dvy0: f64,
    pub window_size: usize,
}

/// Runtime estimator: one instance per flight, driven in time order by a
/// single owner.
///
/// Every prediction is archived for `archive_horizon` seconds so a delayed
/// fix is paired with the prediction at its capture time. The window is
/// refitted on every fix once it holds `n_fit` entries; until the first
/// successful fit the error model is zero.
#[derive(Debug, Clone)]
pub struct VmlFilter {
    cfg: VmlConfig,
    mode: FitMode,
    pred: PredState,
    archive: VecDeque<PredState>,
    window: WindowBuffer,
    model: ErrorModel,
    rng: ChaCha8Rng,
    fits: u64,
    stale_fixes: u64,
}

impl VmlFilter {
    pub fn new(cfg: VmlConfig, mode: FitMode, initial: PredState, seed: u64) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let window = WindowBuffer::new(cfg.t_window_max, cfg.capacity);
        Ok(Self {
            mode,
            pred: initial,
            archive: VecDeque::from([initial]),
            window,
            model: ErrorModel { t0: initial.t, ..ErrorModel::default() },
            rng: ChaCha8Rng::seed_from_u64(seed),
            fits: 0,
            stale_fixes: 0,
            cfg,
        })
    }

    pub fn predict(&mut self, ahrs: &AhrsSample, dt: f64) -> Result<(), VmlError> {
        self.pred = predict_step(&self.pred, ahrs, &self.cfg, dt)?;
        self.archive.push_back(self.pred);
        let horizon = self.cfg.archive_horizon;
        while self.archive.len() > 1 && self.archive.front().is_some_and(|p| self.pred.t - p.t > horizon) {
            self.archive.pop_front();
        }
        self.window.expire(self.pred.t);
        Ok(())
    }

    fn archived(&self, t: f64) -> Option<&PredState> {
        let i = self.archive.partition_point(|p| p.t <= t + 1e-9);
        if i == 0 {
            None
        } else {
            self.archive.get(i - 1)
        }
    }

    pub fn correct(&mut self, fix: &PositionFix) -> CorrectionReport {
        let Some(pred_at) = self.archived(fix.t_capture).copied() else {
            self.stale_fixes += 1;
            return CorrectionReport { stale: true, ..CorrectionReport::default() };
        };
        let before = self.estimate();
        let est_at = compensate(&pred_at, &self.model);
        self.window.push(WindowEntry {
            t: fix.t_capture,
            pred_x: pred_at.x,
            pred_y: pred_at.y,
            meas_x: fix.x,
            meas_y: fix.y,
        });
        let mut fitted = false;
        if self.window.len() >= self.cfg.n_fit {
            if let Ok(model) = fit_ransac(&self.window, &self.cfg, self.mode, &mut self.rng) {
                self.model = model;
                self.fits += 1;
                fitted = true;
            }
        }
        let after = self.estimate();
        CorrectionReport {
            fitted,
            stale: false,
            innovation: (fix.x - est_at.x, fix.y - est_at.y),
            jump: (after.x - before.x).hypot(after.y - before.y),
        }
    }

    pub fn estimate(&self) -> Estimate {
        compensate(&self.pred, &self.model)
    }

    pub fn prediction(&self) -> &PredState {
        &self.pred
    }

    pub fn model(&self) -> &ErrorModel {
        &self.model
    }

    pub fn window(&self) -> &WindowBuffer {
        &self.window
    }

    pub fn mode(&self) -> FitMode {
        self.mode
    }

    pub fn fits(&self) -> u64 {
        self.fits
    }

    pub fn stale_fixes(&self) -> u64 {
        self.stale_fixes
    }

    pub fn snapshot(&self) -> VmlSnapshot {
        let e = self.estimate();
        VmlSnapshot {
            t: e.t,
            x: e.x,
            y: e.y,
            vx: e.vx,
            vy: e.vy,
            dx0: self.model.dx0,
            dvx0: self.model.dvx0,
            dy0: self.model.dy0,
            dvy0: self.model.dvy0,
            window_size: self.window.len(),
        }
    }
}
