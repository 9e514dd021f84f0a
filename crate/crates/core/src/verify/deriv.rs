use super::VerifyError;
use crate::geom::Point;
use serde::{Deserialize, Serialize};

pub const DEFAULT_STEPS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];
/// Disagreement of the last two Richardson values allowed, relative to
/// `1 + |value|`. The first two may disagree 100 times more.
const RICHARDSON_AGREE: f64 = 1e-9;
/// Rounding allowance in units of `ε (1 + |f(x)|) / h_min`.
const ROUNDING_ULPS: f64 = 64.0;
/// Number of times the schedule is shrunk by 10 before giving up.
const REFINEMENTS: usize = 3;
/// Smallest step relative to `1 + |x|` that refinement may reach.
const MIN_STEP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivEstimate {
    pub point: Point,
    pub direction: Point,
    pub value: f64,
    pub steps: Vec<f64>,
    pub residual: f64,
}

/// One-sided derivative of `f` at `x` in direction `dir` (sign only) with
/// steps `h · {1, 10⁻¹, 10⁻², 10⁻³}`, starting from `h = h_max`. Returns
/// `(value, residual)`.
///
/// Consecutive forward differences give three Richardson values, which must
/// settle at the rate of a smooth function. Otherwise (a kink or strong
/// curvature inside the step range) the schedule is shrunk by 10 and
/// retried; after the last refinement the smallest forward difference is
/// used.
pub fn onesided_1d(f: &dyn Fn(f64) -> f64, x: f64, dir: f64, h_max: f64) -> Option<(f64, f64)> {
    let f0 = f(x);
    if !f0.is_finite() {
        return None;
    }
    let quotient = |h: f64| {
        let v = f(x + dir * h);
        v.is_finite().then(|| (v - f0) / h)
    };
    let mut d = [0.0; 4];
    for (k, s) in [1.0, 1e1, 1e2, 1e3].into_iter().enumerate() {
        d[k] = quotient(h_max / s)?;
    }
    let mut h = h_max;
    for level in 0..=REFINEMENTS {
        let r: Vec<f64> = d.windows(2).map(|w| (10.0 * w[1] - w[0]) / 9.0).collect();
        let (near, far) = ((r[2] - r[1]).abs(), (r[1] - r[0]).abs());
        let noise = ROUNDING_ULPS * f64::EPSILON * (1.0 + f0.abs()) / (h / 1e3);
        let tol = RICHARDSON_AGREE * (1.0 + r[2].abs());
        if near <= tol + noise && far <= 100.0 * tol + noise {
            return Some((r[2], near));
        }
        if level < REFINEMENTS && h / 1e4 >= MIN_STEP * (1.0 + x.abs()) {
            h /= 10.0;
            d = [d[1], d[2], d[3], quotient(h / 1e3)?];
        } else {
            break;
        }
    }
    Some((d[3], (d[3] - d[2]).abs()))
}

pub fn estimate_dir_deriv(f: &dyn Fn(Point) -> f64, x: Point, v: Point) -> Result<DerivEstimate, VerifyError> {
    estimate_dir_deriv_scaled(f, x, v, DEFAULT_STEPS[0])
}

/// As [`estimate_dir_deriv`] with the step schedule scaled to start at `h_max`.
pub fn estimate_dir_deriv_scaled(
    f: &dyn Fn(Point) -> f64,
    x: Point,
    v: Point,
    h_max: f64,
) -> Result<DerivEstimate, VerifyError> {
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(VerifyError::NotUnit(v));
    }
    let line = |t: f64| f(x + v * t);
    let (value, residual) = onesided_1d(&line, 0.0, 1.0, h_max).ok_or(VerifyError::NonFinite(x))?;
    Ok(DerivEstimate {
        point: x,
        direction: v,
        value,
        steps: vec![h_max, h_max / 1e1, h_max / 1e2, h_max / 1e3],
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_y_slope() {
        let f = |z: Point| z.y.abs();
        let e = estimate_dir_deriv(&f, Point::ORIGIN, Point::new(0.0, 1.0)).unwrap();
        assert!((e.value - 1.0).abs() < 1e-8);
        assert_eq!(e.steps, DEFAULT_STEPS.to_vec());
    }

    #[test]
    fn kink_inside_step_range_falls_back() {
        // concave kink at t = 5e-3
        let f = |t: f64| t.min(5e-3);
        let (v, _) = onesided_1d(&f, 0.0, 1.0, 1e-2).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_function_extrapolates() {
        let f = |t: f64| t.sin();
        let (v, r) = onesided_1d(&f, 0.3, -1.0, 1e-2).unwrap();
        assert!((v + 0.3f64.cos()).abs() < 1e-7, "{v} {r}");
    }

    #[test]
    fn rejects_non_unit_and_non_finite() {
        let f = |z: Point| 1.0 / z.x;
        assert!(matches!(
            estimate_dir_deriv(&f, Point::ORIGIN, Point::new(1.0, 0.0)),
            Err(VerifyError::NonFinite(_))
        ));
        assert!(matches!(
            estimate_dir_deriv(&f, Point::new(1.0, 0.0), Point::new(2.0, 0.0)),
            Err(VerifyError::NotUnit(_))
        ));
    }
}
