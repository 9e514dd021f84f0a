//! Convex and DC functions of one real variable.
//!
//! A DC function is carried as an explicit pair `(g, h)` of convex functions
//! with `f = g - h`. Convex pieces expose values and one-sided derivatives;
//! nothing here differentiates symbolically.

mod builtin;
mod pieced;
mod pl;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Isometry, Point};

pub use builtin::{
    poly5cos, poly5cos_curvature, poly5cos_d1, poly5cos_d2, Affine, FnSpec, Poly5Cos, PosPow5, Quadratic, ScaledAbs,
};
pub use pieced::pieced;
pub use pl::{
    canonical_pl_split, interpolate_convex, interpolate_on_partition, partition_nodes,
    slopes_and_turning, ConvexPL, PiecewiseLinear1D, Turning, CONVEXITY_SLACK,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DcError {
    #[error("{x} lies outside the domain [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },
    #[error("non-finite value at x = {x}{}", index.map(|i| format!(" (node {i})")).unwrap_or_default())]
    NonFinite { x: f64, index: Option<usize> },
    #[error("slopes decrease at breakpoint {index}")]
    NotConvex { index: usize },
    #[error("malformed function data: {0}")]
    Malformed(String),
}

/// Side of a one-sided derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// A convex function of one variable on a closed (possibly unbounded) interval.
///
/// `eval` and `derivative` do not check the domain; callers go through
/// [`DCFunction1D::dc_eval`] or check [`Convex1D::domain`] themselves.
pub trait Convex1D: Send + Sync + fmt::Debug {
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn eval(&self, x: f64) -> f64;

    fn derivative(&self, x: f64, side: Side) -> f64;

    /// Points of non-differentiability inside `(a, b)`.
    fn kinks(&self, _a: f64, _b: f64) -> Vec<f64> {
        Vec::new()
    }
}

/// Upper bound on `max |f - I f|` over `[a, b]` for the chord interpolant `I f`
/// of a convex function: the gap never exceeds `(b - a)(φ'₋(b) - φ'₊(a)) / 4`.
pub fn convex_chord_gap(phi: &dyn Convex1D, a: f64, b: f64) -> f64 {
    let jump = phi.derivative(b, Side::Minus) - phi.derivative(a, Side::Plus);
    (b - a) * jump.max(0.0) / 4.0
}

/// Bound on `|f''|` over an interval, used to tighten interpolation error.
pub type CurvatureBound = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `f = g - h` with `g`, `h` convex.
#[derive(Clone)]
pub struct DCFunction1D {
    pub g: Arc<dyn Convex1D>,
    pub h: Arc<dyn Convex1D>,
    curvature: Option<CurvatureBound>,
    label: String,
}

impl fmt::Debug for DCFunction1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DCFunction1D")
            .field("label", &self.label)
            .field("g", &self.g)
            .field("h", &self.h)
            .finish()
    }
}

impl DCFunction1D {
    pub fn new(g: Arc<dyn Convex1D>, h: Arc<dyn Convex1D>) -> Self {
        Self { g, h, curvature: None, label: "f".into() }
    }

    pub fn from_convex(g: impl Convex1D + 'static, h: impl Convex1D + 'static) -> Self {
        Self::new(Arc::new(g), Arc::new(h))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_curvature_bound(mut self, bound: CurvatureBound) -> Self {
        self.curvature = Some(bound);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The zero function with `g = h = 0`.
    pub fn zero() -> Self {
        Self::from_convex(Affine::ZERO, Affine::ZERO).with_label("0")
    }

    /// Convex `g` with `h = 0`.
    pub fn convex(g: impl Convex1D + 'static) -> Self {
        Self::from_convex(g, Affine::ZERO)
    }

    pub fn domain(&self) -> (f64, f64) {
        let (a1, b1) = self.g.domain();
        let (a2, b2) = self.h.domain();
        (a1.max(a2), b1.min(b2))
    }

    /// `g(x) - h(x)` without a domain check.
    pub fn value(&self, x: f64) -> f64 {
        self.g.eval(x) - self.h.eval(x)
    }

    /// `g'_±(x) - h'_±(x)` without a domain check.
    pub fn derivative(&self, x: f64, side: Side) -> f64 {
        self.g.derivative(x, side) - self.h.derivative(x, side)
    }

    /// Value and one-sided derivative, checking the domain.
    ///
    /// At the left endpoint only `Side::Plus` is defined and at the right
    /// endpoint only `Side::Minus`.
    pub fn dc_eval(&self, x: f64, side: Side) -> Result<(f64, f64), DcError> {
        let (a, b) = self.domain();
        let inside = match side {
            Side::Plus => a <= x && x < b,
            Side::Minus => a < x && x <= b,
        };
        if !inside || !x.is_finite() {
            return Err(DcError::OutOfDomain { x, a, b });
        }
        let v = self.value(x);
        let d = self.derivative(x, side);
        if !v.is_finite() || !d.is_finite() {
            return Err(DcError::NonFinite { x, index: None });
        }
        Ok((v, d))
    }

    pub fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        let mut k = self.g.kinks(a, b);
        k.extend(self.h.kinks(a, b));
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// Bound on the chord-interpolation error of `f` over `[a, b]`.
    ///
    /// Both convex gaps are nonnegative, so `|gap_g - gap_h| <= max(gap_g, gap_h)`.
    pub fn interp_error_bound(&self, a: f64, b: f64) -> f64 {
        let split = convex_chord_gap(&*self.g, a, b).max(convex_chord_gap(&*self.h, a, b));
        match &self.curvature {
            Some(c) => split.min((b - a) * (b - a) / 8.0 * c(a, b)),
            None => split,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let g = Sum(vec![self.g.clone(), other.g.clone()]);
        let h = Sum(vec![self.h.clone(), other.h.clone()]);
        let curvature = match (&self.curvature, &other.curvature) {
            (Some(c1), Some(c2)) => {
                let (c1, c2) = (c1.clone(), c2.clone());
                Some(Arc::new(move |a, b| c1(a, b) + c2(a, b)) as CurvatureBound)
            }
            _ => None,
        };
        Self {
            g: Arc::new(g),
            h: Arc::new(h),
            curvature,
            label: format!("({} + {})", self.label, other.label),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let (g, h) = if c >= 0.0 { (&self.g, &self.h) } else { (&self.h, &self.g) };
        let k = c.abs();
        let curvature = self.curvature.clone().map(|b| Arc::new(move |x0, x1| k * b(x0, x1)) as CurvatureBound);
        Self {
            g: Arc::new(Scaled(k, g.clone())),
            h: Arc::new(Scaled(k, h.clone())),
            curvature,
            label: format!("{c}·{}", self.label),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `max(f1, f2) = max(g1 + h2, g2 + h1) - (h1 + h2)`.
    pub fn max(&self, other: &Self) -> Self {
        let a: Arc<dyn Convex1D> = Arc::new(Sum(vec![self.g.clone(), other.h.clone()]));
        let b: Arc<dyn Convex1D> = Arc::new(Sum(vec![other.g.clone(), self.h.clone()]));
        Self {
            g: Arc::new(Max(a, b)),
            h: Arc::new(Sum(vec![self.h.clone(), other.h.clone()])),
            curvature: None,
            label: format!("max({}, {})", self.label, other.label),
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        self.neg().max(&other.neg()).neg()
    }

    /// `|f| = max(2g, 2h) - (g + h)`.
    pub fn abs(&self) -> Self {
        self.max(&self.neg())
    }

    /// Pointwise check that `g` and `h` pass the midpoint-convexity test on
    /// `samples` equally spaced triples in `[a, b]`.
    pub fn midpoint_convex_on(&self, a: f64, b: f64, samples: usize, tol: f64) -> bool {
        let test = |phi: &dyn Convex1D| {
            (0..samples).all(|i| {
                let x = a + (b - a) * (i as f64 + 0.5) / samples as f64;
                let r = (b - a) / samples as f64 * 0.5;
                let (l, m, u) = ((x - r).max(a), x, (x + r).min(b));
                phi.eval(m) <= 0.5 * (phi.eval(l) + phi.eval(u)) + tol
            })
        };
        test(&*self.g) && test(&*self.h)
    }
}

/// `L = max(2 · max |endpoint one-sided slopes of g, h|, 1)`.
///
/// Convex slopes are monotone, so the endpoint slopes bound every slope in
/// between; `g` and `h` are then `(L/2)`-Lipschitz on `[a, b]`. The floor of 1
/// keeps `2√2 L² / arctan L` finite when `f` is affine.
pub fn lipschitz_const(g: &dyn Convex1D, h: &dyn Convex1D, a: f64, b: f64) -> Result<f64, DcError> {
    let mut worst: f64 = 0.0;
    for phi in [g, h] {
        let (lo, hi) = phi.domain();
        if a < lo || b > hi {
            return Err(DcError::OutOfDomain { x: if a < lo { a } else { b }, a: lo, b: hi });
        }
        for (x, side) in [(a, Side::Plus), (b, Side::Minus)] {
            let d = phi.derivative(x, side);
            if !d.is_finite() {
                return Err(DcError::NonFinite { x, index: None });
            }
            worst = worst.max(d.abs());
        }
    }
    Ok((2.0 * worst).max(1.0))
}

/// `f̂(t) = f(x₀ + t) - f(x₀)` together with the translation carrying
/// `graph f̂` onto `graph f`.
pub fn recenter(f: &DCFunction1D, x0: f64) -> (DCFunction1D, Isometry) {
    let y0 = f.value(x0);
    let g = Shifted { inner: f.g.clone(), dx: x0, dy: -y0 };
    let h = Shifted { inner: f.h.clone(), dx: x0, dy: 0.0 };
    let curvature = f
        .curvature
        .clone()
        .map(|c| Arc::new(move |a: f64, b: f64| c(a + x0, b + x0)) as CurvatureBound);
    let shifted = DCFunction1D {
        g: Arc::new(g),
        h: Arc::new(h),
        curvature,
        label: format!("{}(· + {x0}) - {y0}", f.label),
    };
    (shifted, Isometry::translation(Point::new(x0, y0)))
}

/// `x ↦ inner(x + dx) + dy`.
#[derive(Debug, Clone)]
pub struct Shifted {
    pub inner: Arc<dyn Convex1D>,
    pub dx: f64,
    pub dy: f64,
}

impl Convex1D for Shifted {
    fn domain(&self) -> (f64, f64) {
        let (a, b) = self.inner.domain();
        (a - self.dx, b - self.dx)
    }
    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(x + self.dx) + self.dy
    }
    fn derivative(&self, x: f64, side: Side) -> f64 {
        self.inner.derivative(x + self.dx, side)
    }
    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        self.inner.kinks(a + self.dx, b + self.dx).into_iter().map(|k| k - self.dx).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Sum(pub Vec<Arc<dyn Convex1D>>);

impl Convex1D for Sum {
    fn domain(&self) -> (f64, f64) {
        self.0.iter().fold((f64::NEG_INFINITY, f64::INFINITY), |(a, b), p| {
            let (c, d) = p.domain();
            (a.max(c), b.min(d))
        })
    }
    fn eval(&self, x: f64) -> f64 {
        self.0.iter().map(|p| p.eval(x)).sum()
    }
    fn derivative(&self, x: f64, side: Side) -> f64 {
        self.0.iter().map(|p| p.derivative(x, side)).sum()
    }
    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        self.0.iter().flat_map(|p| p.kinks(a, b)).collect()
    }
}

/// `c · φ` for `c >= 0`.
#[derive(Debug, Clone)]
pub struct Scaled(pub f64, pub Arc<dyn Convex1D>);

impl Convex1D for Scaled {
    fn domain(&self) -> (f64, f64) {
        self.1.domain()
    }
    fn eval(&self, x: f64) -> f64 {
        self.0 * self.1.eval(x)
    }
    fn derivative(&self, x: f64, side: Side) -> f64 {
        self.0 * self.1.derivative(x, side)
    }
    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        if self.0 == 0.0 {
            Vec::new()
        } else {
            self.1.kinks(a, b)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Max(pub Arc<dyn Convex1D>, pub Arc<dyn Convex1D>);

impl Convex1D for Max {
    fn domain(&self) -> (f64, f64) {
        let (a, b) = self.0.domain();
        let (c, d) = self.1.domain();
        (a.max(c), b.min(d))
    }
    fn eval(&self, x: f64) -> f64 {
        self.0.eval(x).max(self.1.eval(x))
    }
    fn derivative(&self, x: f64, side: Side) -> f64 {
        let (u, v) = (self.0.eval(x), self.1.eval(x));
        let (du, dv) = (self.0.derivative(x, side), self.1.derivative(x, side));
        if u > v {
            du
        } else if v > u {
            dv
        } else {
            match side {
                Side::Plus => du.max(dv),
                Side::Minus => du.min(dv),
            }
        }
    }
    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        // crossing points are not located; refinement falls back on the gap bound
        let mut k = self.0.kinks(a, b);
        k.extend(self.1.kinks(a, b));
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs() -> DCFunction1D {
        DCFunction1D::convex(ScaledAbs::new(1.0, 0.0))
    }

    fn square() -> DCFunction1D {
        DCFunction1D::convex(Quadratic::new(1.0, 0.0, 0.0))
    }

    #[test]
    fn dc_eval_of_abs_at_kink() {
        let f = abs();
        assert_eq!(f.dc_eval(0.0, Side::Plus).unwrap(), (0.0, 1.0));
        assert_eq!(f.dc_eval(0.0, Side::Minus).unwrap(), (0.0, -1.0));
    }

    #[test]
    fn dc_eval_square_minus_abs() {
        let f = square().sub(&abs());
        assert_eq!(f.dc_eval(0.0, Side::Plus).unwrap(), (0.0, -1.0));
        assert_eq!(f.dc_eval(0.0, Side::Minus).unwrap(), (0.0, 1.0));
    }

    #[test]
    fn dc_eval_outside_domain() {
        let p = ConvexPL::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0]).unwrap();
        let f = DCFunction1D::convex(p);
        assert!(f.dc_eval(1.5, Side::Plus).is_err());
        assert!(f.dc_eval(1.0, Side::Plus).is_err());
        assert_eq!(f.dc_eval(1.0, Side::Minus).unwrap(), (1.0, 1.0));
        assert_eq!(f.dc_eval(-1.0, Side::Plus).unwrap(), (1.0, -1.0));
    }

    #[test]
    fn lipschitz_constants() {
        let l = lipschitz_const(&Quadratic::new(1.0, 0.0, 0.0), &Affine::ZERO, -1.0, 1.0).unwrap();
        assert_eq!(l, 4.0);
        let l = lipschitz_const(&ScaledAbs::new(1.0, 0.0), &Affine::ZERO, -1.0, 1.0).unwrap();
        assert_eq!(l, 2.0);
        let l = lipschitz_const(&Affine::ZERO, &Affine::ZERO, -1.0, 1.0).unwrap();
        assert_eq!(l, 1.0);
    }

    #[test]
    fn lipschitz_rejects_unbounded_slope() {
        #[derive(Debug)]
        struct Steep;
        impl Convex1D for Steep {
            fn eval(&self, x: f64) -> f64 {
                -(1.0 - x * x).sqrt()
            }
            fn derivative(&self, x: f64, _side: Side) -> f64 {
                x / (1.0 - x * x).sqrt()
            }
        }
        assert!(lipschitz_const(&Steep, &Affine::ZERO, -1.0, 1.0).is_err());
    }

    #[test]
    fn recenter_square_at_one() {
        let (fh, iso) = recenter(&square(), 1.0);
        for t in [-0.7, 0.0, 0.3, 2.0] {
            assert!((fh.value(t) - (t * t + 2.0 * t)).abs() < 1e-14);
        }
        assert_eq!(iso.apply(Point::new(0.0, 0.0)), Point::new(1.0, 1.0));
    }

    #[test]
    fn recenter_identity_case() {
        let (fh, iso) = recenter(&square(), 0.0);
        assert_eq!(fh.value(0.4), square().value(0.4));
        let z = Point::new(0.3, -0.2);
        assert_eq!(iso.apply(z), z);
    }

    #[test]
    fn recenter_abs() {
        let (fh, _) = recenter(&abs(), -1.0);
        for t in [-1.0, 0.0, 0.5, 1.0, 3.0] {
            assert_eq!(fh.value(t), (t - 1.0).abs() - 1.0);
        }
        assert_eq!(fh.derivative(1.0, Side::Plus), 1.0);
        assert_eq!(fh.derivative(1.0, Side::Minus), -1.0);
    }

    #[test]
    fn max_and_abs_algebra() {
        let f = square().sub(&abs());
        let m = f.max(&DCFunction1D::zero());
        let a = f.abs();
        for k in -20..=20 {
            let x = k as f64 / 10.0;
            let fx = x * x - x.abs();
            assert!((m.value(x) - fx.max(0.0)).abs() < 1e-14);
            assert!((a.value(x) - fx.abs()).abs() < 1e-14);
            assert!((f.min(&DCFunction1D::zero()).value(x) - fx.min(0.0)).abs() < 1e-14);
        }
        assert!(a.midpoint_convex_on(-2.0, 2.0, 400, 1e-12));
    }

    #[test]
    fn one_sided_derivative_monotone_when_h_affine() {
        let f = square().add(&abs()).sub(&DCFunction1D::convex(Affine::new(3.0, 1.0)));
        for k in -10..=10 {
            let x = k as f64 / 7.0;
            assert!(f.derivative(x, Side::Plus) >= f.derivative(x, Side::Minus));
        }
    }

    #[test]
    fn chord_gap_bounds_square() {
        let q = Quadratic::new(1.0, 0.0, 0.0);
        // true gap of x² on [0, h] is h²/4
        let h = 0.5;
        assert_eq!(convex_chord_gap(&q, 0.0, h), 0.125);
        assert!(convex_chord_gap(&q, 0.0, h) >= h * h / 4.0);
    }
}
