use rand::seq::index;
use rand::Rng;

use super::config::{FitMode, VmlConfig};
use super::regression::{score_axis, solve_pairs, LineFit, Prior};
use super::window::WindowBuffer;
use super::ErrorModel;
use crate::error::VmlError;

/// Subset size per RANSAC iteration: `round(q * ratio)`, at least 2 and at most `q`.
pub fn sample_size(q: usize, ratio: f64) -> usize {
    ((q as f64 * ratio).round() as usize).clamp(2, q.max(2))
}

struct Columns {
    t0: f64,
    dts: Vec<f64>,
    rx: Vec<f64>,
    ry: Vec<f64>,
}

impl Columns {
    fn new(window: &WindowBuffer) -> Self {
        let t0 = window.oldest().map_or(0.0, |e| e.t);
        let n = window.len();
        let mut c = Columns { t0, dts: Vec::with_capacity(n), rx: Vec::with_capacity(n), ry: Vec::with_capacity(n) };
        for e in window.iter() {
            let (rx, ry) = e.residual();
            c.dts.push(e.t - t0);
            c.rx.push(rx);
            c.ry.push(ry);
        }
        c
    }

    fn fit(&self, idx: &[usize], r: &[f64], prior: Prior) -> Result<LineFit, VmlError> {
        solve_pairs(idx.iter().map(|&i| (self.dts[i], r[i])), prior)
    }

    fn model(&self, x: LineFit, y: LineFit) -> ErrorModel {
        ErrorModel { t0: self.t0, dx0: x.offset, dvx0: x.slope, dy0: y.offset, dvy0: y.slope }
    }
}

fn check_size(window: &WindowBuffer, n_fit: usize) -> Result<(), VmlError> {
    let required = n_fit.max(2);
    if window.len() < required {
        return Err(VmlError::NoFit { size: window.len(), required });
    }
    Ok(())
}

/// Least squares (optionally ridge-penalised) over the whole window, per axis.
pub fn fit_least_squares(window: &WindowBuffer, prior: Prior) -> Result<ErrorModel, VmlError> {
    check_size(window, 2)?;
    let c = Columns::new(window);
    let all: Vec<usize> = (0..c.dts.len()).collect();
    Ok(c.model(c.fit(&all, &c.rx, prior)?, c.fit(&all, &c.ry, prior)?))
}

/// Fits the error model over `window` according to `mode`.
///
/// For the RANSAC modes each iteration draws one subset (shared by both
/// axes) without replacement, fits a line per axis on it, and scores that
/// line against the full window with clamped residuals. Each axis keeps its
/// lowest-scoring candidate; earlier candidates win ties. Returns
/// [`VmlError::NoFit`] below `cfg.n_fit` entries.
pub fn fit_ransac<R: Rng + ?Sized>(
    window: &WindowBuffer,
    cfg: &VmlConfig,
    mode: FitMode,
    rng: &mut R,
) -> Result<ErrorModel, VmlError> {
    check_size(window, cfg.n_fit)?;
    let prior = match mode {
        FitMode::Prior => Prior { px: cfg.prior_px, pv: cfg.prior_pv },
        FitMode::Basic | FitMode::LeastSquares => Prior::NONE,
    };
    if mode == FitMode::LeastSquares {
        return fit_least_squares(window, prior);
    }
    let c = Columns::new(window);
    let q = c.dts.len();
    let n_s = sample_size(q, cfg.sample_ratio);
    let clamp = cfg.residual_clamp;

    let mut best_x: Option<(f64, LineFit)> = None;
    let mut best_y: Option<(f64, LineFit)> = None;
    let mut last_err = None;
    for _ in 0..cfg.ransac_iterations {
        let mut idx = index::sample(rng, q, n_s).into_vec();
        idx.sort_unstable();
        for (r, best) in [(&c.rx, &mut best_x), (&c.ry, &mut best_y)] {
            match c.fit(&idx, r, prior) {
                Ok(f) => {
                    let s = score_axis(&f, &c.dts, r, clamp);
                    if best.as_ref().is_none_or(|(bs, _)| s < *bs) {
                        *best = Some((s, f));
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
    }
    match (best_x, best_y) {
        (Some((_, x)), Some((_, y))) => Ok(c.model(x, y)),
        _ => Err(last_err.unwrap_or(VmlError::DegenerateFit { det: 0.0 })),
    }
}
