use serde::{Deserialize, Serialize};

use super::config::EkfConfig;
use super::delay::DelayHistory;
use super::filter::{ekf_predict, ekf_update, mahalanobis_gate, EkfBelief};
use super::model::Vec6;
use crate::error::{ConfigError, EkfError};
use crate::sim::AhrsSample;
use crate::{Estimate, PositionFix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EkfVariant {
    /// Every fix is applied at arrival as if it were current.
    Plain,
    /// Fixes failing the chi-square gate are discarded.
    OutlierRejecting,
    /// Gated fixes are applied at their capture time with history replay.
    DelayHandling,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EkfCorrection {
    pub accepted: bool,
    /// Squared Mahalanobis distance; NaN for the plain variant, which never gates.
    pub d2: f64,
    /// Fix minus the predicted position used for the update.
    pub innovation: (f64, f64),
    /// Change of the current position estimate.
    pub jump: f64,
    pub replay_steps: usize,
}

/// Row of the EKF snapshot CSV. The error-model columns are kept for schema
/// compatibility with the VML snapshot and are always zero; `window_size`
/// is the number of buffered history nodes (1 without replay).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct EkfSnapshot {
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
    pub trace_p: f64,
    pub d2_last: f64,
    pub gated_count: u64,
    pub replay_steps: u64,
}

/// Runtime EKF of any variant. Single owner, fed in time order.
#[derive(Debug, Clone)]
pub struct Ekf {
    cfg: EkfConfig,
    variant: EkfVariant,
    t: f64,
    belief: EkfBelief,
    history: Option<DelayHistory>,
    gated_count: u64,
    d2_last: f64,
}

impl Ekf {
    /// Starts at `t0` with the given position/velocity, zero bias and the
    /// configured initial covariance.
    pub fn new(cfg: EkfConfig, variant: EkfVariant, t0: f64, pos_vel: [f64; 4]) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let mean = Vec6::new(pos_vel[0], pos_vel[1], pos_vel[2], pos_vel[3], 0.0, 0.0);
        let belief = EkfBelief::new(mean, &cfg.p0_diag);
        let history =
            (variant == EkfVariant::DelayHandling).then(|| DelayHistory::new(t0, belief, cfg.history_horizon, true));
        Ok(Self { cfg, variant, t: t0, belief, history, gated_count: 0, d2_last: f64::NAN })
    }

    pub fn variant(&self) -> EkfVariant {
        self.variant
    }

    pub fn belief(&self) -> &EkfBelief {
        match &self.history {
            Some(h) => h.current(),
            None => &self.belief,
        }
    }

    pub fn predict(&mut self, ahrs: &AhrsSample, dt: f64) -> Result<(), EkfError> {
        match &mut self.history {
            Some(h) => h.predict(ahrs, dt, &self.cfg)?,
            None => self.belief = ekf_predict(&self.belief, ahrs, &self.cfg, dt)?,
        }
        self.t += dt;
        Ok(())
    }

    pub fn correct(&mut self, fix: &PositionFix) -> Result<EkfCorrection, EkfError> {
        let before = self.belief().position();
        let innovation = (fix.x - before.0, fix.y - before.1);
        let z = (fix.x, fix.y);
        let mut out = EkfCorrection { innovation, ..EkfCorrection::default() };
        match self.variant {
            EkfVariant::Plain => {
                out.d2 = f64::NAN;
                self.belief = ekf_update(&self.belief, z, &self.cfg)?;
                out.accepted = true;
            }
            EkfVariant::OutlierRejecting => {
                let g = mahalanobis_gate(&self.belief, z, &self.cfg)?;
                out.d2 = g.d2;
                out.accepted = g.accept;
                if g.accept {
                    self.belief = ekf_update(&self.belief, z, &self.cfg)?;
                }
            }
            EkfVariant::DelayHandling => {
                let h = self.history.as_mut().expect("delay variant owns a history");
                let r = h.insert_and_replay(fix, &self.cfg)?;
                out.d2 = r.d2;
                out.accepted = r.accepted;
                out.replay_steps = r.replay_steps;
            }
        }
        if !out.accepted {
            self.gated_count += 1;
        }
        self.d2_last = out.d2;
        let after = self.belief().position();
        out.jump = (after.0 - before.0).hypot(after.1 - before.1);
        Ok(out)
    }

    pub fn estimate(&self) -> Estimate {
        let m = &self.belief().mean;
        Estimate { t: self.t, x: m[0], y: m[1], vx: m[2], vy: m[3] }
    }

    pub fn gated_count(&self) -> u64 {
        self.gated_count
    }

    pub fn replay_steps(&self) -> u64 {
        self.history.as_ref().map_or(0, |h| h.replay_steps())
    }

    pub fn snapshot(&self) -> EkfSnapshot {
        let e = self.estimate();
        EkfSnapshot {
            t: e.t,
            x: e.x,
            y: e.y,
            vx: e.vx,
            vy: e.vy,
            window_size: self.history.as_ref().map_or(1, |h| h.len()),
            trace_p: self.belief().cov.trace(),
            d2_last: self.d2_last,
            gated_count: self.gated_count,
            replay_steps: self.replay_steps(),
            ..EkfSnapshot::default()
        }
    }
}
