use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

/// A fix paired with the prediction archived at its capture time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowEntry {
    pub t: f64,
    pub pred_x: f64,
    pub pred_y: f64,
    pub meas_x: f64,
    pub meas_y: f64,
}

impl WindowEntry {
    /// Prediction error `measurement - prediction`.
    pub fn residual(&self) -> (f64, f64) {
        (self.meas_x - self.pred_x, self.meas_y - self.pred_y)
    }
}

/// Time-ordered sliding window of fixes. After every insertion the span
/// `newest.t - oldest.t` is below `t_window_max` and the length is at most
/// `capacity`.
#[derive(Debug, Clone)]
pub struct WindowBuffer {
    entries: VecDeque<WindowEntry>,
    t_window_max: f64,
    capacity: usize,
    dropped: u64,
}

impl WindowBuffer {
    pub fn new(t_window_max: f64, capacity: usize) -> Self {
        Self { entries: VecDeque::new(), t_window_max, capacity: capacity.max(1), dropped: 0 }
    }

    /// Inserts `entry` in time order, then trims the oldest entries until the
    /// span is below the limit. Overflowing the capacity drops the oldest
    /// entry and bumps [`Self::dropped`]; insertion never fails.
    pub fn push(&mut self, entry: WindowEntry) {
        match self.entries.back() {
            Some(last) if entry.t < last.t => {
                let at = self.entries.partition_point(|e| e.t <= entry.t);
                self.entries.insert(at, entry);
            }
            _ => self.entries.push_back(entry),
        }
        let newest = self.entries.back().map_or(entry.t, |e| e.t);
        while self.entries.front().is_some_and(|e| newest - e.t >= self.t_window_max) {
            self.entries.pop_front();
        }
        while self.entries.len() > self.capacity {
            self.entries.pop_front();
            self.dropped += 1;
        }
    }

    /// Drops entries that are `t_window_max` or more older than `now`.
    pub fn expire(&mut self, now: f64) {
        while self.entries.front().is_some_and(|e| now - e.t >= self.t_window_max) {
            self.entries.pop_front();
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &WindowEntry> + '_ {
        self.entries.iter()
    }

    pub fn oldest(&self) -> Option<&WindowEntry> {
        self.entries.front()
    }

    pub fn newest(&self) -> Option<&WindowEntry> {
        self.entries.back()
    }

    /// Entries discarded because the capacity was exceeded.
    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    pub fn span(&self) -> f64 {
        match (self.entries.front(), self.entries.back()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0.0,
        }
    }
}

impl FromIterator<WindowEntry> for WindowBuffer {
    /// Builds an untrimmed buffer; handy for tests and offline fits.
    fn from_iter<I: IntoIterator<Item = WindowEntry>>(iter: I) -> Self {
        let entries: VecDeque<_> = iter.into_iter().collect();
        let capacity = entries.len().max(1);
        Self { entries, t_window_max: f64::INFINITY, capacity, dropped: 0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(t: f64) -> WindowEntry {
        WindowEntry { t, pred_x: 0.0, pred_y: 0.0, meas_x: t, meas_y: -t }
    }

    #[test]
    fn first_entry_is_kept() {
        let mut w = WindowBuffer::new(1.0, 16);
        w.push(at(0.0));
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn span_over_limit_drops_oldest() {
        let mut w = WindowBuffer::new(1.0, 16);
        w.push(at(0.0));
        w.push(at(1.2));
        assert_eq!(w.len(), 1);
        assert_eq!(w.oldest().unwrap().t, 1.2);
    }

    #[test]
    fn short_span_is_retained() {
        let mut w = WindowBuffer::new(1.0, 16);
        for t in [0.0, 0.25, 0.5] {
            w.push(at(t));
        }
        assert_eq!(w.len(), 3);
        assert!(w.span() < 1.0);
    }

    #[test]
    fn capacity_overflow_counts_drops() {
        let mut w = WindowBuffer::new(10.0, 3);
        for k in 0..5 {
            w.push(at(k as f64 * 0.1));
        }
        assert_eq!(w.len(), 3);
        assert_eq!(w.dropped(), 2);
        assert!((w.oldest().unwrap().t - 0.2).abs() < 1e-12);
    }

    #[test]
    fn late_entry_is_inserted_in_order() {
        let mut w = WindowBuffer::new(1.0, 16);
        w.push(at(0.1));
        w.push(at(0.3));
        w.push(at(0.2));
        let ts: Vec<f64> = w.iter().map(|e| e.t).collect();
        assert_eq!(ts, vec![0.1, 0.2, 0.3]);
    }

    #[test]
    fn expiry_is_relative_to_now() {
        let mut w = WindowBuffer::new(1.0, 16);
        w.push(at(0.0));
        w.push(at(0.5));
        w.expire(1.2);
        assert_eq!(w.len(), 1);
        w.expire(1.5);
        assert!(w.is_empty());
    }
}
