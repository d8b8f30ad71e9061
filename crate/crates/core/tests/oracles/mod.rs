//! Independent reference implementations shared by the integration tests.
//! None of these call into the code under test except for the function
//! being differentiated.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use vml_core::ekf::{dynamics, EkfConfig, Vec6};
use vml_core::sim::AhrsSample;

/// Ridge line fit by a dense solve of `(X'X + P) b = X'y`.
pub fn dense_ridge(ts: &[f64], ys: &[f64], px: f64, pv: f64) -> Option<(f64, f64)> {
    let n = ts.len();
    let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { ts[i] });
    let y = DVector::from_column_slice(ys);
    let p = DMatrix::from_diagonal(&DVector::from_vec(vec![px, pv]));
    let a = x.transpose() * &x + p;
    let b = x.transpose() * y;
    let sol = a.lu().solve(&b)?;
    Some((sol[0], sol[1]))
}

/// Every `k`-element index subset of `0..n`, in bitmask order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(n < 32);
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Sum of `min(|a + b t - y|, clamp)` written out longhand.
pub fn clamped_error(line: (f64, f64), ts: &[f64], ys: &[f64], clamp: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..ts.len() {
        let e = (line.0 + line.1 * ts[i] - ys[i]).abs();
        total += if e < clamp { e } else { clamp };
    }
    total
}

/// Every subset line together with its score over the full data set.
pub fn exhaustive_candidates(ts: &[f64], ys: &[f64], k: usize, prior: (f64, f64), clamp: f64) -> Vec<((f64, f64), f64)> {
    subsets(ts.len(), k)
        .into_iter()
        .filter_map(|idx| {
            let st: Vec<f64> = idx.iter().map(|&i| ts[i]).collect();
            let sy: Vec<f64> = idx.iter().map(|&i| ys[i]).collect();
            let line = dense_ridge(&st, &sy, prior.0, prior.1)?;
            Some((line, clamped_error(line, ts, ys, clamp)))
        })
        .collect()
}

/// Central finite-difference Jacobian of the continuous EKF dynamics.
pub fn fd_jacobian(x: &Vec6, u: &AhrsSample, cfg: &EkfConfig, h: f64) -> [[f64; 6]; 6] {
    let mut out = [[0.0; 6]; 6];
    for j in 0..6 {
        let mut xp = *x;
        let mut xm = *x;
        xp[j] += h;
        xm[j] -= h;
        let fp = dynamics(&xp, u, cfg).unwrap();
        let fm = dynamics(&xm, u, cfg).unwrap();
        for i in 0..6 {
            out[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    out
}

/// RMS horizontal error accumulated one sample at a time with a running mean.
pub fn streaming_rms(est: &[(f64, f64)], truth: &[(f64, f64)]) -> f64 {
    let mut mean = 0.0;
    for (k, (e, t)) in est.iter().zip(truth).enumerate() {
        let sq = (e.0 - t.0).powi(2) + (e.1 - t.1).powi(2);
        mean += (sq - mean) / (k + 1) as f64;
    }
    mean.sqrt()
}
