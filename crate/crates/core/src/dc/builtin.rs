//! Closed-form convex pieces and the declarative function format.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{canonical_pl_split, Convex1D, DCFunction1D, DcError, PiecewiseLinear1D, Side};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub slope: f64,
    pub intercept: f64,
}

impl Affine {
    pub const ZERO: Affine = Affine { slope: 0.0, intercept: 0.0 };

    pub fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }
}

impl Convex1D for Affine {
    fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
    fn derivative(&self, _x: f64, _side: Side) -> f64 {
        self.slope
    }
}

/// `a x² + b x + c` with `a >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    a: f64,
    b: f64,
    c: f64,
}

impl Quadratic {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        assert!(a >= 0.0, "quadratic convex piece needs a >= 0");
        Self { a, b, c }
    }
}

impl Convex1D for Quadratic {
    fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }
    fn derivative(&self, x: f64, _side: Side) -> f64 {
        2.0 * self.a * x + self.b
    }
}

/// `s |x - x₀|` with `s >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAbs {
    scale: f64,
    center: f64,
}

impl ScaledAbs {
    pub fn new(scale: f64, center: f64) -> Self {
        assert!(scale >= 0.0, "abs convex piece needs scale >= 0");
        Self { scale, center }
    }
}

impl Convex1D for ScaledAbs {
    fn eval(&self, x: f64) -> f64 {
        self.scale * (x - self.center).abs()
    }
    fn derivative(&self, x: f64, side: Side) -> f64 {
        let d = x - self.center;
        let s = if d > 0.0 {
            1.0
        } else if d < 0.0 {
            -1.0
        } else {
            side.sign()
        };
        self.scale * s
    }
    fn kinks(&self, a: f64, b: f64) -> Vec<f64> {
        if self.scale > 0.0 && self.center > a && self.center < b {
            vec![self.center]
        } else {
            Vec::new()
        }
    }
}

/// `x⁵ cos(π/x)` (0 at the origin), which is C² with
/// `q''(x) = x (8πx sin(π/x) - (π² - 20x²) cos(π/x))`.
pub fn poly5cos(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powi(5) * (PI / x).cos()
    }
}

pub fn poly5cos_d1(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        let (s, c) = (PI / x).sin_cos();
        5.0 * x.powi(4) * c + PI * x.powi(3) * s
    }
}

pub fn poly5cos_d2(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        let (s, c) = (PI / x).sin_cos();
        x * (8.0 * PI * x * s - (PI * PI - 20.0 * x * x) * c)
    }
}

/// `sup |q''|` over `|x| <= m` from the closed form of `q''`.
pub fn poly5cos_curvature(m: f64) -> f64 {
    m * (8.0 * PI * m + PI * PI + 20.0 * m * m)
}

/// Convex part `s q(x) + (C/2) x²` on `[-R, R]`, with `C` large enough to
/// dominate `|s q''|` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly5Cos {
    scale: f64,
    window: f64,
    c: f64,
}

impl Poly5Cos {
    pub fn new(scale: f64, window: f64) -> Self {
        Self { scale, window, c: scale.abs() * poly5cos_curvature(window) }
    }

    /// Coefficient `C` of the compensating quadratic `(C/2) x²`.
    pub fn compensation(&self) -> f64 {
        self.c
    }
}

impl Convex1D for Poly5Cos {
    fn domain(&self) -> (f64, f64) {
        (-self.window, self.window)
    }
    fn eval(&self, x: f64) -> f64 {
        self.scale * poly5cos(x) + 0.5 * self.c * x * x
    }
    fn derivative(&self, x: f64, _side: Side) -> f64 {
        self.scale * poly5cos_d1(x) + self.c * x
    }
}

/// `a · max(x, 0)⁵` with `a >= 0`; convex since its slope `5a x⁴` is
/// nondecreasing on `x >= 0` and zero before.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosPow5 {
    a: f64,
}

impl PosPow5 {
    pub fn new(a: f64) -> Self {
        assert!(a >= 0.0, "positive-part power needs a >= 0");
        Self { a }
    }
}

impl Convex1D for PosPow5 {
    fn eval(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.a * x.powi(5)
        } else {
            0.0
        }
    }
    fn derivative(&self, x: f64, _side: Side) -> f64 {
        if x > 0.0 {
            5.0 * self.a * x.powi(4)
        } else {
            0.0
        }
    }
}

/// Declarative description of a builtin DC function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FnSpec {
    /// `a x² + b x + c`.
    Quadratic {
        #[serde(default = "one")]
        a: f64,
        #[serde(default)]
        b: f64,
        #[serde(default)]
        c: f64,
    },
    /// `a |x - center|`.
    Abs {
        #[serde(default = "one")]
        a: f64,
        #[serde(default)]
        center: f64,
    },
    /// `scale · x⁵ cos(π/x)` on `[-window, window]`.
    Poly5cos {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default = "one")]
        window: f64,
    },
    Constant {
        #[serde(default)]
        c: f64,
    },
    /// `a · max(x, 0)⁵`.
    PosPow5 {
        #[serde(default = "one")]
        a: f64,
    },
    /// Piecewise linear through explicit breakpoints.
    Pl { xs: Vec<f64>, ys: Vec<f64> },
    /// Sum of terms.
    Sum { terms: Vec<FnSpec> },
}

fn one() -> f64 {
    1.0
}

impl FnSpec {
    /// Default-parameter spec for a builtin name.
    pub fn builtin(name: &str) -> Option<FnSpec> {
        Some(match name {
            "quadratic" => FnSpec::Quadratic { a: 1.0, b: 0.0, c: 0.0 },
            "abs" => FnSpec::Abs { a: 1.0, center: 0.0 },
            "poly5cos" => FnSpec::Poly5cos { scale: 1.0, window: 1.0 },
            "constant" | "zero" => FnSpec::Constant { c: 0.0 },
            "pospow5" => FnSpec::PosPow5 { a: 1.0 },
            "quadratic-minus-abs" => FnSpec::Sum {
                terms: vec![
                    FnSpec::Quadratic { a: 1.0, b: 0.0, c: 0.0 },
                    FnSpec::Abs { a: -1.0, center: 0.0 },
                ],
            },
            _ => return None,
        })
    }

    pub const BUILTIN_NAMES: [&'static str; 6] =
        ["quadratic", "abs", "poly5cos", "constant", "quadratic-minus-abs", "pospow5"];

    pub fn build(&self) -> Result<DCFunction1D, DcError> {
        let f = match self {
            FnSpec::Quadratic { a, b, c } => {
                finite(&[*a, *b, *c])?;
                let curv = 2.0 * a.abs();
                let f = if *a >= 0.0 {
                    DCFunction1D::from_convex(Quadratic::new(*a, *b, *c), super::Affine::ZERO)
                } else {
                    DCFunction1D::from_convex(super::Affine::new(*b, *c), Quadratic::new(-a, 0.0, 0.0))
                };
                f.with_curvature_bound(Arc::new(move |_, _| curv))
                    .with_label(format!("{a}x² + {b}x + {c}"))
            }
            FnSpec::Abs { a, center } => {
                finite(&[*a, *center])?;
                let piece = ScaledAbs::new(a.abs(), *center);
                let f = if *a >= 0.0 {
                    DCFunction1D::from_convex(piece, Affine::ZERO)
                } else {
                    DCFunction1D::from_convex(Affine::ZERO, piece)
                };
                f.with_label(format!("{a}|x - {center}|"))
            }
            FnSpec::Poly5cos { scale, window } => {
                finite(&[*scale, *window])?;
                if !(*window > 0.0) {
                    return Err(DcError::Malformed("poly5cos window must be positive".into()));
                }
                let g = Poly5Cos::new(*scale, *window);
                let h = BoundedQuadratic { half_c: 0.5 * g.compensation(), window: *window };
                let s = scale.abs();
                DCFunction1D::from_convex(g, h)
                    .with_curvature_bound(Arc::new(move |a: f64, b: f64| s * poly5cos_curvature(a.abs().max(b.abs()))))
                    .with_label(format!("{scale}·x⁵cos(π/x)"))
            }
            FnSpec::Constant { c } => {
                finite(&[*c])?;
                DCFunction1D::from_convex(Affine::new(0.0, *c), Affine::ZERO)
                    .with_curvature_bound(Arc::new(|_, _| 0.0))
                    .with_label(format!("{c}"))
            }
            FnSpec::PosPow5 { a } => {
                finite(&[*a])?;
                let piece = PosPow5::new(a.abs());
                let f = if *a >= 0.0 {
                    DCFunction1D::from_convex(piece, Affine::ZERO)
                } else {
                    DCFunction1D::from_convex(Affine::ZERO, piece)
                };
                let k = 20.0 * a.abs();
                f.with_curvature_bound(Arc::new(move |x0: f64, x1: f64| k * x0.abs().max(x1.abs()).powi(3)))
                    .with_label(format!("{a}·max(x, 0)⁵"))
            }
            FnSpec::Pl { xs, ys } => {
                let p = PiecewiseLinear1D::new(xs.clone(), ys.clone())?;
                let (u, v) = canonical_pl_split(&p);
                DCFunction1D::from_convex(u, v).with_label("pl")
            }
            FnSpec::Sum { terms } => {
                let mut it = terms.iter();
                let first = it
                    .next()
                    .ok_or_else(|| DcError::Malformed("empty sum".into()))?
                    .build()?;
                let mut acc = first;
                for t in it {
                    acc = acc.add(&t.build()?);
                }
                acc
            }
        };
        Ok(f)
    }
}

fn finite(vals: &[f64]) -> Result<(), DcError> {
    match vals.iter().find(|v| !v.is_finite()) {
        Some(&x) => Err(DcError::NonFinite { x, index: None }),
        None => Ok(()),
    }
}

/// `(C/2) x²` restricted to a window, so the split of `poly5cos` does not
/// claim a domain where its convex part stops being convex.
#[derive(Debug, Clone, Copy)]
struct BoundedQuadratic {
    half_c: f64,
    window: f64,
}

impl Convex1D for BoundedQuadratic {
    fn domain(&self) -> (f64, f64) {
        (-self.window, self.window)
    }
    fn eval(&self, x: f64) -> f64 {
        self.half_c * x * x
    }
    fn derivative(&self, x: f64, _side: Side) -> f64 {
        2.0 * self.half_c * x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly5cos_value_at_half() {
        assert_eq!(poly5cos(0.5), 1.0 / 32.0);
        assert_eq!(poly5cos(0.0), 0.0);
    }

    #[test]
    fn poly5cos_second_derivative_matches_central_differences() {
        assert_eq!(poly5cos_d2(0.0), 0.0);
        for x in [0.3, 0.5] {
            let h = 1e-4;
            let fd = (poly5cos(x + h) - 2.0 * poly5cos(x) + poly5cos(x - h)) / (h * h);
            assert!((fd - poly5cos_d2(x)).abs() < 1e-5, "x={x}: {fd} vs {}", poly5cos_d2(x));
            let fd1 = (poly5cos(x + h) - poly5cos(x - h)) / (2.0 * h);
            assert!((fd1 - poly5cos_d1(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn poly5cos_split_parts_are_convex() {
        let f = FnSpec::Poly5cos { scale: 1.0, window: 1.0 }.build().unwrap();
        assert!(f.midpoint_convex_on(-1.0, 1.0, 20_000, 1e-13));
        for k in -50..=50 {
            let x = k as f64 / 50.0;
            assert!((f.value(x) - poly5cos(x)).abs() < 1e-12);
        }
        assert_eq!(f.domain(), (-1.0, 1.0));
    }

    #[test]
    fn spec_parses_with_defaults() {
        let f: FnSpec = serde_json::from_str(r#"{"name":"quadratic"}"#).unwrap();
        assert_eq!(f, FnSpec::Quadratic { a: 1.0, b: 0.0, c: 0.0 });
        let f: FnSpec = serde_json::from_str(r#"{"name":"pl","xs":[0,1,2],"ys":[0,1,0]}"#).unwrap();
        let f = f.build().unwrap();
        assert_eq!(f.value(1.0), 1.0);
        assert_eq!(f.value(1.5), 0.5);
        assert!(serde_json::from_str::<FnSpec>(r#"{"name":"cubic"}"#).is_err());
    }

    #[test]
    fn negative_coefficients_move_to_h() {
        let f = FnSpec::Quadratic { a: -2.0, b: 1.0, c: 0.5 }.build().unwrap();
        assert_eq!(f.value(1.0), -0.5);
        let f = FnSpec::builtin("quadratic-minus-abs").unwrap().build().unwrap();
        assert_eq!(f.value(0.5), -0.25);
        assert_eq!(f.derivative(0.0, Side::Plus), -1.0);
    }
}
