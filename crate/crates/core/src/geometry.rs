//! Planar rotation helpers shared by the simulator, filters and controller.

use std::f64::consts::PI;

/// Wraps an angle to (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Rotates a heading-frame vector into the world frame: `R(psi) * v`.
#[inline]
pub fn rotate(psi: f64, v: [f64; 2]) -> [f64; 2] {
    let (s, c) = psi.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

/// Rotates a world-frame vector into the heading frame: `R(psi)^T * v`.
#[inline]
pub fn rotate_inv(psi: f64, v: [f64; 2]) -> [f64; 2] {
    let (s, c) = psi.sin_cos();
    [c * v[0] + s * v[1], -s * v[0] + c * v[1]]
}

/// Attitude offsets (roll, pitch) produced by north/east tilt biases at heading `psi`.
#[inline]
pub fn heading_bias(psi: f64, bias_north: f64, bias_east: f64) -> (f64, f64) {
    let (s, c) = psi.sin_cos();
    (c * bias_north + s * bias_east, -s * bias_north + c * bias_east)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_stays_in_half_open_interval() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((wrap_angle(0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rotate_round_trip() {
        let v = [0.3, -1.7];
        let w = rotate_inv(0.8, rotate(0.8, v));
        assert!((w[0] - v[0]).abs() < 1e-15 && (w[1] - v[1]).abs() < 1e-15);
    }
}
