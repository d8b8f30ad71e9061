use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::types::{AhrsSample, GateDetection, SensorParams, TrueState};
use crate::geometry::{heading_bias, wrap_angle};
use crate::nav::{global_to_local, GateMap, GatePose};

/// Biased, noisy attitude reading. Heading is passed through unbiased.
pub fn sample_ahrs<R: Rng + ?Sized>(state: &TrueState, t: f64, sensors: &SensorParams, rng: &mut R) -> AhrsSample {
    let (phi_b, theta_b) = heading_bias(state.psi, sensors.bias_north, sensors.bias_east);
    let n_phi: f64 = rng.sample(StandardNormal);
    let n_theta: f64 = rng.sample(StandardNormal);
    AhrsSample {
        t,
        phi_m: state.phi + phi_b + sensors.sigma_att * n_phi,
        theta_m: state.theta + theta_b + sensors.sigma_att * n_theta,
        psi_m: state.psi,
    }
}

/// Forward-camera visibility of a gate.
///
/// A gate is visible when it lies within `[min_range, max_range]`, within
/// `half_fov` of the drone heading, and the drone is outside `turn_radius`
/// of the waypoint placed `waypoint_offset` past the gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VisibilityModel {
    pub min_range: f64,
    pub max_range: f64,
    pub half_fov: f64,
    pub turn_radius: f64,
    pub waypoint_offset: f64,
}

impl Default for VisibilityModel {
    fn default() -> Self {
        Self { min_range: 0.5, max_range: 5.0, half_fov: 60f64.to_radians(), turn_radius: 1.5, waypoint_offset: 0.5 }
    }
}

impl VisibilityModel {
    fn sees(&self, state: &TrueState, gate: &GatePose) -> Option<f64> {
        let (dx, dy) = (gate.x - state.x, gate.y - state.y);
        let range = dx.hypot(dy);
        if range < self.min_range || range > self.max_range {
            return None;
        }
        if wrap_angle(dy.atan2(dx) - state.psi).abs() >= self.half_fov {
            return None;
        }
        let wx = gate.x + self.waypoint_offset * gate.psi.cos();
        let wy = gate.y + self.waypoint_offset * gate.psi.sin();
        if (state.x - wx).hypot(state.y - wy) < self.turn_radius {
            return None;
        }
        Some(range)
    }
}

/// Nearest visible gate among `gates`, if any.
pub fn visible_gate<'a>(state: &TrueState, gates: &'a [GatePose], vis: &VisibilityModel) -> Option<&'a GatePose> {
    gates
        .iter()
        .filter_map(|g| vis.sees(state, g).map(|r| (r, g)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, g)| g)
}

fn detect<R: Rng + ?Sized>(
    state: &TrueState,
    gate: &GatePose,
    t_capture: f64,
    sensors: &SensorParams,
    p_outlier: f64,
    rng: &mut R,
) -> GateDetection {
    let (rx, ry) = global_to_local((state.x, state.y), gate);
    let is_outlier = p_outlier > 0.0 && rng.random::<f64>() < p_outlier;
    let sigma = if is_outlier { sensors.sigma_outlier } else { sensors.sigma_xy };
    let nx: f64 = rng.sample(StandardNormal);
    let ny: f64 = rng.sample(StandardNormal);
    GateDetection {
        t_capture,
        t_arrival: t_capture + sensors.delay,
        rel_x: rx + sigma * nx,
        rel_y: ry + sigma * ny,
        gate_truth_id: gate.id,
        is_outlier,
    }
}

/// Offline detection generation over a recorded trajectory.
///
/// Each maximal run of samples in which the same gate is visible forms a
/// segment `[t_u, t_v]`; `round((t_v - t_u) * f_v)` capture instants are
/// drawn uniformly inside it and snapped to the nearest trajectory sample.
/// The result is ordered by arrival time.
pub fn generate_detection_stream<R: Rng + ?Sized>(
    trajectory: &[(f64, TrueState)],
    map: &GateMap,
    vis: &VisibilityModel,
    sensors: &SensorParams,
    rng: &mut R,
) -> Vec<GateDetection> {
    let gates = map.truth();
    let ids: Vec<Option<u32>> = trajectory.iter().map(|(_, s)| visible_gate(s, gates, vis).map(|g| g.id)).collect();
    let mut out = Vec::new();
    let mut start = 0;
    while start < trajectory.len() {
        let mut end = start;
        while end + 1 < trajectory.len() && ids[end + 1] == ids[start] {
            end += 1;
        }
        if let Some(id) = ids[start] {
            let gate = gates.iter().find(|g| g.id == id).expect("id came from this list");
            let seg = &trajectory[start..=end];
            let (t_u, t_v) = (seg[0].0, seg[seg.len() - 1].0);
            let n_v = ((t_v - t_u) * sensors.f_v).round() as usize;
            for _ in 0..n_v {
                let tc = rng.random_range(t_u..=t_v);
                let i = seg.partition_point(|(t, _)| *t < tc);
                let i = match i {
                    0 => 0,
                    i if i >= seg.len() => seg.len() - 1,
                    i if (seg[i].0 - tc) < (tc - seg[i - 1].0) => i,
                    i => i - 1,
                };
                let (t, s) = &seg[i];
                out.push(detect(s, gate, *t, sensors, sensors.p_outlier, rng));
            }
        }
        start = end + 1;
    }
    out.sort_by(|a, b| a.t_arrival.total_cmp(&b.t_arrival).then(a.t_capture.total_cmp(&b.t_capture)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t < self.end
    }
}

/// A stretch of time with a raised outlier probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutlierBurst {
    pub start: f64,
    pub end: f64,
    pub p_outlier: f64,
}

/// Scripted detection outages and outlier bursts layered over the
/// stationary sensor model.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectionSchedule {
    pub blackouts: Vec<Interval>,
    pub bursts: Vec<OutlierBurst>,
}

impl DetectionSchedule {
    fn blacked_out(&self, t: f64) -> bool {
        self.blackouts.iter().any(|b| b.contains(t))
    }

    fn p_outlier(&self, t: f64, base: f64) -> f64 {
        self.bursts
            .iter()
            .filter(|b| t >= b.start && t < b.end)
            .map(|b| b.p_outlier)
            .fold(base, f64::max)
    }
}

/// Online detection generator for closed-loop runs, where the trajectory is
/// not known in advance. Each step inside a visibility segment captures an
/// image with probability `min(1, f_v * dt)`, so capture instants are
/// uniform within the segment and their expected count is `(t_v - t_u) * f_v`.
#[derive(Debug, Clone)]
pub struct DetectionSource {
    sensors: SensorParams,
    vis: VisibilityModel,
    schedule: DetectionSchedule,
    gates: Vec<GatePose>,
    p_capture: f64,
}

impl DetectionSource {
    pub fn new(map: &GateMap, sensors: SensorParams, vis: VisibilityModel, schedule: DetectionSchedule, dt: f64) -> Self {
        let p_capture = (sensors.f_v * dt).min(1.0);
        Self { sensors, vis, schedule, gates: map.truth().to_vec(), p_capture }
    }

    pub fn poll<R: Rng + ?Sized>(&self, t: f64, state: &TrueState, rng: &mut R) -> Option<GateDetection> {
        let gate = visible_gate(state, &self.gates, &self.vis)?;
        if self.schedule.blacked_out(t) {
            return None;
        }
        if self.p_capture < 1.0 && rng.random::<f64>() >= self.p_capture {
            return None;
        }
        let p_out = self.schedule.p_outlier(t, self.sensors.p_outlier);
        Some(detect(state, gate, t, &self.sensors, p_out, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nav::local_to_global;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quiet() -> SensorParams {
        SensorParams { sigma_att: 0.0, ..SensorParams::default() }
    }

    #[test]
    fn bias_applies_directly_at_zero_heading() {
        let s = TrueState { phi: 0.1, theta: -0.05, ..Default::default() };
        let sens = quiet();
        let a = sample_ahrs(&s, 0.0, &sens, &mut ChaCha8Rng::seed_from_u64(1));
        assert!((a.phi_m - (0.1 + sens.bias_north)).abs() < 1e-15);
        assert!((a.theta_m - (-0.05 + sens.bias_east)).abs() < 1e-15);
        assert_eq!(a.psi_m, 0.0);
    }

    #[test]
    fn bias_rotates_with_heading() {
        let s = TrueState { psi: 90f64.to_radians(), ..Default::default() };
        let a = sample_ahrs(&s, 0.0, &quiet(), &mut ChaCha8Rng::seed_from_u64(1));
        assert!((a.phi_m - 1f64.to_radians()).abs() < 1e-12);
        assert!((a.theta_m - 2f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn attitude_noise_has_configured_std() {
        let sens = SensorParams::default();
        let s = TrueState::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000;
        let errs: Vec<f64> = (0..n).map(|_| sample_ahrs(&s, 0.0, &sens, &mut rng).phi_m - sens.bias_north).collect();
        let mean = errs.iter().sum::<f64>() / n as f64;
        let std = (errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!((std / sens.sigma_att - 1.0).abs() < 0.1, "std {std}");
    }

    fn straight_line(duration: f64, dt: f64) -> Vec<(f64, TrueState)> {
        // Flying north at 1 m/s toward gate 1 from 4.5 m out.
        let n = (duration / dt).round() as usize;
        (0..=n)
            .map(|k| {
                let t = k as f64 * dt;
                (t, TrueState { x: -0.5 + t, vx: 1.0, z: -1.5, thrust: -9.81, ..Default::default() })
            })
            .collect()
    }

    #[test]
    fn one_second_segment_yields_about_f_v_detections() {
        let map = GateMap { gates: vec![GatePose::new(1, 4.0, 0.0, -1.5, 0.0)], true_gates: None };
        // Visible from x = -0.5 (range 4.5) until 1.5 m from the waypoint at x = 4.5, i.e. x < 3.0.
        // Truncate the trajectory to exactly 1 s of visibility.
        let traj = straight_line(1.0, 0.002);
        let sens = SensorParams::default();
        let det = generate_detection_stream(&traj, &map, &VisibilityModel::default(), &sens, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(det.len(), 30);
        assert!(det.windows(2).all(|w| w[0].t_arrival <= w[1].t_arrival));
    }

    #[test]
    fn inlier_detections_stay_near_truth_and_delay_is_exact() {
        let map = GateMap::simulated_track();
        let traj = straight_line(3.0, 0.002);
        let sens = SensorParams { delay: 0.1, ..SensorParams::default() };
        let det = generate_detection_stream(&traj, &map, &VisibilityModel::default(), &sens, &mut ChaCha8Rng::seed_from_u64(4));
        assert!(!det.is_empty());
        for d in &det {
            assert!((d.t_arrival - d.t_capture - 0.1).abs() < 1e-12);
            let k = (d.t_capture / 0.002).round() as usize;
            let truth = traj[k].1;
            let gate = map.gates.iter().find(|g| g.id == d.gate_truth_id).unwrap();
            let (x, y) = local_to_global((d.rel_x, d.rel_y), gate);
            assert!((x - truth.x).hypot(y - truth.y) < 6.0 * sens.sigma_xy);
        }
    }

    #[test]
    fn gates_behind_or_inside_turn_radius_are_invisible() {
        let gates = GateMap::simulated_track().gates;
        let vis = VisibilityModel::default();
        let ahead = TrueState { x: 1.0, ..Default::default() };
        assert_eq!(visible_gate(&ahead, &gates, &vis).map(|g| g.id), Some(1));
        let turned = TrueState { x: 1.0, psi: std::f64::consts::PI, ..Default::default() };
        assert!(visible_gate(&turned, &gates, &vis).is_none());
        let close = TrueState { x: 3.5, ..Default::default() };
        assert!(visible_gate(&close, &gates, &vis).is_none());
    }

    #[test]
    fn blackout_suppresses_and_burst_raises_outliers() {
        let map = GateMap::simulated_track();
        let sched = DetectionSchedule {
            blackouts: vec![Interval { start: 0.0, end: 1.0 }],
            bursts: vec![OutlierBurst { start: 1.0, end: 2.0, p_outlier: 1.0 }],
        };
        let sens = SensorParams { f_v: 500.0, ..SensorParams::default() };
        let src = DetectionSource::new(&map, sens, VisibilityModel::default(), sched, 0.002);
        let s = TrueState { x: 1.0, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(src.poll(0.5, &s, &mut rng).is_none());
        let d = src.poll(1.5, &s, &mut rng).unwrap();
        assert!(d.is_outlier);
        let d = src.poll(2.5, &s, &mut rng).unwrap();
        assert!(!d.is_outlier);
    }
}
