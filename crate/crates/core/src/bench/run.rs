use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{FilterKind, ScenarioConfig};
use super::metrics::{classify_divergence, trace_gamma, TraceSample};
use crate::ekf::Ekf;
use crate::error::ConfigError;
use crate::nav::{
    altitude_controller, assign_gate, flight_plan_step, position_controller, waypoints_from_map, FlightPlanState,
};
use crate::sim::{sample_ahrs, step_dynamics, AhrsSample, ControlInput, DetectionSource, GateDetection, TrueState};
use crate::vml::{PredState, VmlFilter};
use crate::{Estimate, PositionFix};

/// Either estimator family behind one interface.
#[derive(Debug, Clone)]
pub enum AnyFilter {
    Vml(VmlFilter),
    Ekf(Ekf),
}

/// What a single fix did to the filter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CorrectionEvent {
    pub t_capture: f64,
    pub t_arrival: f64,
    /// Gate the fix was assigned to.
    pub gate_id: u32,
    /// Gate that actually produced the detection.
    pub gate_truth_id: u32,
    pub is_outlier: bool,
    pub fix_x: f64,
    pub fix_y: f64,
    /// Fix minus the estimate at capture time (VML) or the predicted
    /// position (EKF), before the fix is used.
    pub innovation_x: f64,
    pub innovation_y: f64,
    pub jump: f64,
    /// VML: a new error model was fitted. EKF: the fix passed the gate.
    pub applied: bool,
    pub lap: u32,
}

impl CorrectionEvent {
    pub fn innovation_norm(&self) -> f64 {
        self.innovation_x.hypot(self.innovation_y)
    }
}

/// Filter error that ended a run.
#[derive(Debug, Clone, Copy, PartialEq)]
struct FilterFailure;

/// `(innovation, jump, applied)` of one correction.
type Outcome = ((f64, f64), f64, bool);

impl AnyFilter {
    pub fn new(cfg: &ScenarioConfig, start: &TrueState) -> Result<Self, ConfigError> {
        if let Some(mode) = cfg.filter.fit_mode() {
            let init = PredState { t: 0.0, x: start.x, y: start.y, vx: start.vx, vy: start.vy };
            // Decorrelated from the sensor streams, which use the low seeds.
            let seed = cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xF117;
            return Ok(AnyFilter::Vml(VmlFilter::new(cfg.vml.clone(), mode, init, seed)?));
        }
        let variant = cfg.filter.ekf_variant().expect("non-VML kinds are EKF variants");
        Ok(AnyFilter::Ekf(Ekf::new(cfg.ekf.clone(), variant, 0.0, [start.x, start.y, start.vx, start.vy])?))
    }

    pub fn predict(&mut self, ahrs: &AhrsSample, dt: f64) -> bool {
        match self {
            AnyFilter::Vml(f) => f.predict(ahrs, dt).is_ok(),
            AnyFilter::Ekf(f) => f.predict(ahrs, dt).is_ok(),
        }
    }

    /// Returns `None` when the fix was dropped as too old.
    fn correct(&mut self, fix: &PositionFix) -> Result<Option<Outcome>, FilterFailure> {
        match self {
            AnyFilter::Vml(f) => {
                let r = f.correct(fix);
                Ok((!r.stale).then_some((r.innovation, r.jump, r.fitted)))
            }
            AnyFilter::Ekf(f) => match f.correct(fix) {
                Ok(c) => Ok(Some((c.innovation, c.jump, c.accepted))),
                Err(crate::EkfError::MeasurementTooOld { .. }) => Ok(None),
                Err(_) => Err(FilterFailure),
            },
        }
    }

    pub fn estimate(&self) -> Estimate {
        match self {
            AnyFilter::Vml(f) => f.estimate(),
            AnyFilter::Ekf(f) => f.estimate(),
        }
    }
}

/// Wall time spent inside the filter cores.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CoreTimes {
    pub predict: f64,
    pub correct: f64,
    pub predict_calls: u64,
    pub correct_calls: u64,
}

impl CoreTimes {
    pub fn total(&self) -> f64 {
        self.predict + self.correct
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub filter: FilterKind,
    pub seed: u64,
    /// RMS horizontal error over the whole run, m.
    pub gamma: f64,
    pub diverged: bool,
    /// Why the run ended early, if it did.
    pub failure: Option<String>,
    pub laps_completed: u32,
    pub duration: f64,
    pub core: CoreTimes,
    pub detections: usize,
    #[serde(skip)]
    pub trace: Vec<TraceSample>,
    #[serde(skip)]
    pub corrections: Vec<CorrectionEvent>,
}

impl RunResult {
    pub fn estimates(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.trace.iter().map(|s| (s.x_est, s.y_est))
    }
}

/// Start pose from the scenario, else the origin facing the first waypoint
/// at the first gate's height.
pub fn start_state(cfg: &ScenarioConfig, waypoints: &[crate::nav::Waypoint]) -> TrueState {
    match cfg.start {
        Some(p) => TrueState::hover(p.x, p.y, p.z, p.psi, cfg.sim.g),
        None => {
            let wp = &waypoints[0];
            TrueState::hover(0.0, 0.0, wp.z, wp.y.atan2(wp.x), cfg.sim.g)
        }
    }
}

/// Flies the scenario in closed loop: the controller follows the flight
/// plan using the filter estimate, detections are captured from the true
/// state and delivered to the filter at their arrival time.
///
/// Every step runs, in order: capture, delivery of arrived fixes, trace
/// recording, guidance and control from the current estimate, AHRS
/// sampling and filter prediction, truth integration.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunResult, ConfigError> {
    cfg.validate()?;
    let map = cfg.map.resolve();
    let waypoints =
        if cfg.nav.waypoints.is_empty() { waypoints_from_map(&map, cfg.nav.waypoint_offset) } else { cfg.nav.waypoints.clone() };
    let dt = cfg.sim.dt;
    let mut state = start_state(cfg, &waypoints);
    let mut filter = AnyFilter::new(cfg, &state)?;
    let source = DetectionSource::new(&map, cfg.sensors.clone(), cfg.visibility.clone(), cfg.schedule.clone(), dt);

    let mut ahrs_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut det_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xD37E_C710);
    let mut plan = FlightPlanState { waypoint_id: 0, psi_ref: state.psi, laps: 0 };
    let mut pending: Vec<GateDetection> = Vec::new();
    let mut trace = Vec::with_capacity((cfg.duration_max / dt) as usize + 1);
    let mut corrections = Vec::new();
    let mut core = CoreTimes::default();
    let (mut t_predict, mut t_correct) = (Duration::ZERO, Duration::ZERO);
    let mut failure = None;
    let mut detections = 0;

    let steps = (cfg.duration_max / dt).round() as u64;
    for k in 0..steps {
        let t = k as f64 * dt;

        if let Some(det) = source.poll(t, &state, &mut det_rng) {
            let at = pending.partition_point(|d| d.t_arrival <= det.t_arrival);
            pending.insert(at, det);
            detections += 1;
        }
        let due = pending.partition_point(|d| d.t_arrival <= t + 1e-9);
        for det in pending.drain(..due).collect::<Vec<_>>() {
            let est = filter.estimate();
            let a = assign_gate((det.rel_x, det.rel_y), &map, (est.x, est.y));
            let fix = PositionFix { t_capture: det.t_capture, x: a.x, y: a.y };
            let t0 = Instant::now();
            let outcome = filter.correct(&fix);
            t_correct += t0.elapsed();
            core.correct_calls += 1;
            match outcome {
                Ok(Some((innovation, jump, applied))) => corrections.push(CorrectionEvent {
                    t_capture: det.t_capture,
                    t_arrival: det.t_arrival,
                    gate_id: a.gate_id,
                    gate_truth_id: det.gate_truth_id,
                    is_outlier: det.is_outlier,
                    fix_x: a.x,
                    fix_y: a.y,
                    innovation_x: innovation.0,
                    innovation_y: innovation.1,
                    jump,
                    applied,
                    lap: plan.laps,
                }),
                Ok(None) => {}
                Err(FilterFailure) => failure = Some(format!("filter update failed at t = {t:.3} s")),
            }
        }
        if failure.is_some() {
            break;
        }

        let est = filter.estimate();
        trace.push(TraceSample {
            t,
            x: state.x,
            y: state.y,
            z: state.z,
            vx: state.vx,
            vy: state.vy,
            psi: state.psi,
            x_est: est.x,
            y_est: est.y,
            vx_est: est.vx,
            vy_est: est.vy,
            lap: plan.laps,
            waypoint: plan.waypoint_id,
        });
        if ![est.x, est.y, est.vx, est.vy].iter().all(|v| v.is_finite()) {
            failure = Some(format!("estimate became non-finite at t = {t:.3} s"));
            break;
        }

        let (reference, next_plan) = flight_plan_step((est.x, est.y, state.z), &cfg.nav, &waypoints, plan);
        plan = next_plan;
        if plan.laps >= cfg.laps {
            break;
        }
        let ahrs = sample_ahrs(&state, t, &cfg.sensors, &mut ahrs_rng);
        let (phi_c, theta_c) =
            position_controller((reference.x, reference.y), (est.x, est.y, est.vx, est.vy), ahrs.psi_m, &cfg.nav);
        let thrust_c = altitude_controller(reference.z, state.z, state.vz, ahrs.phi_m, ahrs.theta_m, cfg.sim.g, &cfg.nav);
        let input = ControlInput { phi_c, theta_c, psi_c: reference.psi, thrust_c };

        let t0 = Instant::now();
        let ok = filter.predict(&ahrs, dt);
        t_predict += t0.elapsed();
        core.predict_calls += 1;
        if !ok {
            failure = Some(format!("filter prediction failed at t = {t:.3} s"));
            break;
        }
        match step_dynamics(&state, &input, &cfg.sim) {
            Ok(next) => state = next,
            Err(e) => {
                failure = Some(format!("{e} at t = {t:.3} s"));
                break;
            }
        }
    }

    core.predict = t_predict.as_secs_f64();
    core.correct = t_correct.as_secs_f64();
    let gamma = trace_gamma(&trace).unwrap_or(f64::INFINITY);
    let diverged = failure.is_some() || classify_divergence(&trace);
    Ok(RunResult {
        filter: cfg.filter,
        seed: cfg.seed,
        gamma,
        diverged,
        failure,
        laps_completed: plan.laps,
        duration: trace.last().map_or(0.0, |s| s.t),
        core,
        detections,
        trace,
        corrections,
    })
}
