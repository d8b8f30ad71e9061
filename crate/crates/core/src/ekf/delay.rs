use std::collections::VecDeque;

use super::config::EkfConfig;
use super::filter::{ekf_predict, ekf_update, mahalanobis_gate, EkfBelief, GateDecision};
use crate::error::EkfError;
use crate::sim::AhrsSample;
use crate::PositionFix;

#[derive(Debug, Clone)]
struct Node {
    t: f64,
    /// Input and step that produced this node from its predecessor.
    input: Option<(AhrsSample, f64)>,
    prior: EkfBelief,
    posterior: EkfBelief,
    /// Fixes captured at this node, in capture order.
    fixes: Vec<PositionFix>,
}

/// Result of inserting one fix into a [`DelayHistory`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplayOutcome {
    pub accepted: bool,
    pub d2: f64,
    /// Propagation steps re-run to bring the belief back to the present.
    pub replay_steps: usize,
}

/// Timeline of inputs, beliefs and fixes covering the last `horizon`
/// seconds. A late fix is applied at the node of its capture time and every
/// later node is re-propagated, covariance included, re-applying the fixes
/// stored there. The present belief therefore equals what an offline run
/// processing all fixes in capture order would produce.
#[derive(Debug, Clone)]
pub struct DelayHistory {
    nodes: VecDeque<Node>,
    horizon: f64,
    gating: bool,
    replay_steps: u64,
    too_old: u64,
}

fn apply(belief: &EkfBelief, fix: &PositionFix, cfg: &EkfConfig, gating: bool) -> Result<(EkfBelief, GateDecision), EkfError> {
    let z = (fix.x, fix.y);
    if gating {
        let g = mahalanobis_gate(belief, z, cfg)?;
        if !g.accept {
            return Ok((*belief, g));
        }
        return Ok((ekf_update(belief, z, cfg)?, g));
    }
    // The distance is still reported when gating is off.
    let d2 = mahalanobis_gate(belief, z, cfg).map(|g| g.d2).unwrap_or(f64::NAN);
    Ok((ekf_update(belief, z, cfg)?, GateDecision { accept: true, d2 }))
}

impl DelayHistory {
    pub fn new(t0: f64, belief: EkfBelief, horizon: f64, gating: bool) -> Self {
        let root = Node { t: t0, input: None, prior: belief, posterior: belief, fixes: Vec::new() };
        Self { nodes: VecDeque::from([root]), horizon, gating, replay_steps: 0, too_old: 0 }
    }

    pub fn current(&self) -> &EkfBelief {
        &self.newest().posterior
    }

    pub fn time(&self) -> f64 {
        self.newest().t
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total propagation steps re-run by replays so far.
    pub fn replay_steps(&self) -> u64 {
        self.replay_steps
    }

    /// Fixes dropped because they predate the buffered history.
    pub fn too_old(&self) -> u64 {
        self.too_old
    }

    fn newest(&self) -> &Node {
        self.nodes.back().expect("history always holds a node")
    }

    pub fn predict(&mut self, ahrs: &AhrsSample, dt: f64, cfg: &EkfConfig) -> Result<(), EkfError> {
        let last = self.newest();
        let prior = ekf_predict(&last.posterior, ahrs, cfg, dt)?;
        let t = last.t + dt;
        self.nodes.push_back(Node { t, input: Some((*ahrs, dt)), prior, posterior: prior, fixes: Vec::new() });
        while self.nodes.len() > 1 && self.nodes.front().is_some_and(|n| t - n.t > self.horizon + 1e-9) {
            self.nodes.pop_front();
        }
        Ok(())
    }

    /// Applies `fix` at its capture time and replays forward to the present.
    pub fn insert_and_replay(&mut self, fix: &PositionFix, cfg: &EkfConfig) -> Result<ReplayOutcome, EkfError> {
        let oldest = self.nodes.front().expect("non-empty").t;
        if fix.t_capture < oldest - 1e-9 {
            self.too_old += 1;
            return Err(EkfError::MeasurementTooOld { t_capture: fix.t_capture, oldest });
        }
        let j = self.nodes.partition_point(|n| n.t <= fix.t_capture + 1e-9).max(1) - 1;
        let gating = self.gating;

        let node = &mut self.nodes[j];
        let pos = node.fixes.partition_point(|f| f.t_capture <= fix.t_capture);
        let decision = if pos == node.fixes.len() {
            let (post, dec) = apply(&node.posterior, fix, cfg, gating)?;
            node.posterior = post;
            node.fixes.push(*fix);
            dec
        } else {
            node.fixes.insert(pos, *fix);
            let mut b = node.prior;
            let mut dec = None;
            for (i, f) in node.fixes.iter().enumerate() {
                let (nb, d) = apply(&b, f, cfg, gating)?;
                b = nb;
                if i == pos {
                    dec = Some(d);
                }
            }
            node.posterior = b;
            dec.expect("inserted fix was visited")
        };

        let steps = self.nodes.len() - 1 - j;
        for k in j + 1..self.nodes.len() {
            let prev = self.nodes[k - 1].posterior;
            let node = &mut self.nodes[k];
            let (ahrs, dt) = node.input.expect("non-root nodes carry an input");
            node.prior = ekf_predict(&prev, &ahrs, cfg, dt)?;
            let mut b = node.prior;
            for f in &node.fixes {
                b = apply(&b, f, cfg, gating)?.0;
            }
            node.posterior = b;
        }
        self.replay_steps += steps as u64;
        Ok(ReplayOutcome { accepted: decision.accept, d2: decision.d2, replay_steps: steps })
    }
}
