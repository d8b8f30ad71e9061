use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Pose of a race gate. `psi` is the direction a drone flies through it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GatePose {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub psi: f64,
}

impl GatePose {
    pub fn new(id: u32, x: f64, y: f64, z: f64, psi_deg: f64) -> Self {
        Self { id, x, y, z, psi: psi_deg.to_radians() }
    }
}

/// The map the drone believes in, plus optionally where the gates really are.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateMap {
    pub gates: Vec<GatePose>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_gates: Option<Vec<GatePose>>,
}

impl GateMap {
    /// Four-gate square with varied heights used throughout the simulation study.
    pub fn simulated_track() -> Self {
        Self {
            gates: vec![
                GatePose::new(1, 4.0, 0.0, -1.5, 0.0),
                GatePose::new(2, 4.0, 4.0, -2.5, 90.0),
                GatePose::new(3, 0.0, 4.0, -1.0, 180.0),
                GatePose::new(4, 0.0, 0.0, -1.5, 270.0),
            ],
            true_gates: None,
        }
    }

    /// The simulated track with the real gates shifted by up to 1.5 m from
    /// their mapped poses, following the offsets of the displaced real-world track.
    pub fn displaced_track() -> Self {
        let believed = Self::simulated_track().gates;
        let offsets = [(1.0, 0.0), (1.5, 0.0), (0.0, 1.0), (0.0, 0.0)];
        let true_gates = believed
            .iter()
            .zip(offsets)
            .map(|(g, (dx, dy))| GatePose { x: g.x + dx, y: g.y + dy, ..*g })
            .collect();
        Self { gates: believed, true_gates: Some(true_gates) }
    }

    /// Poses used to generate detections: the true gates when given, else the map.
    pub fn truth(&self) -> &[GatePose] {
        self.true_gates.as_deref().unwrap_or(&self.gates)
    }

    pub fn is_displaced(&self, id: u32) -> bool {
        let Some(truth) = &self.true_gates else { return false };
        match (self.gates.iter().find(|g| g.id == id), truth.iter().find(|g| g.id == id)) {
            (Some(a), Some(b)) => (a.x - b.x).hypot(a.y - b.y) > 1e-9,
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        check_gate_list("map.gates", &self.gates)?;
        if let Some(truth) = &self.true_gates {
            check_gate_list("map.true_gates", truth)?;
            let same_ids = truth.len() == self.gates.len()
                && truth.iter().zip(&self.gates).all(|(a, b)| a.id == b.id);
            if !same_ids {
                return Err(ConfigError::invalid(
                    "map.true_gates",
                    "must list the same gate ids as map.gates",
                ));
            }
        }
        Ok(())
    }
}

fn check_gate_list(name: &'static str, gates: &[GatePose]) -> Result<(), ConfigError> {
    if gates.is_empty() {
        return Err(ConfigError::invalid(name, "map needs at least one gate"));
    }
    for w in gates.windows(2) {
        if w[1].id != w[0].id + 1 {
            return Err(ConfigError::invalid(name, "gate ids must be consecutive"));
        }
    }
    if gates.iter().any(|g| ![g.x, g.y, g.z, g.psi].iter().all(|v| v.is_finite())) {
        return Err(ConfigError::invalid(name, "gate poses must be finite"));
    }
    Ok(())
}

/// Drone position implied by a gate-relative detection of `gate`.
pub fn local_to_global(rel: (f64, f64), gate: &GatePose) -> (f64, f64) {
    let (s, c) = gate.psi.sin_cos();
    (gate.x + c * rel.0 + s * rel.1, gate.y - s * rel.0 + c * rel.1)
}

/// Inverse of [`local_to_global`]: the relative detection a drone at `pos` would report.
pub fn global_to_local(pos: (f64, f64), gate: &GatePose) -> (f64, f64) {
    let (s, c) = gate.psi.sin_cos();
    let (dx, dy) = (pos.0 - gate.x, pos.1 - gate.y);
    (c * dx - s * dy, s * dx + c * dy)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assignment {
    pub x: f64,
    pub y: f64,
    pub gate_id: u32,
}

/// Globalizes `rel` against every mapped gate and keeps the candidate closest
/// to the current estimate. Exact ties go to the lowest gate id.
pub fn assign_gate(rel: (f64, f64), map: &GateMap, estimate: (f64, f64)) -> Assignment {
    let mut best: Option<(f64, Assignment)> = None;
    for gate in &map.gates {
        let (x, y) = local_to_global(rel, gate);
        let d2 = (x - estimate.0).powi(2) + (y - estimate.1).powi(2);
        let better = match &best {
            None => true,
            Some((bd, b)) => d2 < *bd || (d2 == *bd && gate.id < b.gate_id),
        };
        if better {
            best = Some((d2, Assignment { x, y, gate_id: gate.id }));
        }
    }
    best.expect("gate map is non-empty").1
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zero_heading_is_pure_translation() {
        let g = GatePose { id: 1, x: 2.0, y: -3.0, z: 0.0, psi: 0.0 };
        assert_eq!(local_to_global((0.5, 0.25), &g), (2.5, -2.75));
    }

    #[test]
    fn first_track_gate() {
        let map = GateMap::simulated_track();
        let (x, y) = local_to_global((1.0, 0.0), &map.gates[0]);
        assert!((x - 5.0).abs() < 1e-12 && y.abs() < 1e-12);
    }

    #[test]
    fn quarter_turn_gate() {
        let g = GatePose { id: 1, x: 1.0, y: 2.0, z: 0.0, psi: FRAC_PI_2 };
        let (x, y) = local_to_global((1.0, 0.0), &g);
        assert!((x - 1.0).abs() < 1e-12);
        assert!((y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_gate_always_selected() {
        let map = GateMap { gates: vec![GatePose::new(7, 1.0, 1.0, 0.0, 45.0)], true_gates: None };
        let a = assign_gate((0.3, -0.2), &map, (100.0, -50.0));
        assert_eq!(a.gate_id, 7);
    }

    #[test]
    fn square_track_picks_nearest_implied_position() {
        let map = GateMap::simulated_track();
        let rel = (-2.0, 0.3);
        // Brute force over every candidate.
        let implied: Vec<_> = map.gates.iter().map(|g| local_to_global(rel, g)).collect();
        let estimate = (implied[1].0 + 0.4, implied[1].1 - 0.3);
        let a = assign_gate(rel, &map, estimate);
        let brute = implied
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let da = (a.1 .0 - estimate.0).hypot(a.1 .1 - estimate.1);
                let db = (b.1 .0 - estimate.0).hypot(b.1 .1 - estimate.1);
                da.partial_cmp(&db).unwrap()
            })
            .unwrap()
            .0;
        assert_eq!(brute, 1);
        assert_eq!(a.gate_id, 2);
    }

    #[test]
    fn exact_tie_goes_to_lowest_id() {
        let map = GateMap {
            gates: vec![GatePose::new(1, 1.0, 0.0, 0.0, 0.0), GatePose::new(2, -1.0, 0.0, 0.0, 0.0)],
            true_gates: None,
        };
        let a = assign_gate((0.0, 0.0), &map, (0.0, 0.0));
        assert_eq!(a.gate_id, 1);
        let swapped = GateMap { gates: map.gates.iter().rev().copied().collect(), true_gates: None };
        assert_eq!(assign_gate((0.0, 0.0), &swapped, (0.0, 0.0)).gate_id, 1);
    }

    #[test]
    fn validation_rejects_gaps_in_ids() {
        let mut map = GateMap::simulated_track();
        map.gates[2].id = 9;
        assert!(map.validate().is_err());
        assert!(GateMap { gates: vec![], true_gates: None }.validate().is_err());
        assert!(GateMap::displaced_track().validate().is_ok());
    }
}
