//! Named example sets built from `g(x) = x⁵ cos(π/x)` and `f(x) = max(x, 0)⁵`.
//!
//! Infinite families are truncated; the truncation keeps the accumulation
//! point and the detector sequence of gap midpoints converging to it.

use super::interval::Interval1DSet;
use super::primitive::{Primitive, PrimitiveSpec, RegionSet};
use super::scene::{Item, Scene};
use super::SetError;
use crate::dc::{pieced, poly5cos_curvature, DCFunction1D, FnSpec};
use crate::geom::{Isometry, Point};
use std::sync::Arc;

pub const GALLERY: &[(&str, &str)] = &[
    ("osc-intersection-A", "closed upper half-plane {y >= 0}"),
    ("osc-intersection-B", "hypograph {y <= x^5 cos(pi/x)} over the window"),
    ("osc-M", "intersection {0 <= y <= x^5 cos(pi/x)}: components over {g >= 0} plus the origin"),
    ("osc-K", "union {y <= 0} with {y >= x^5 cos(pi/x)}, closure of the complement of osc-M"),
    ("nowhere-dense-A", "graphs of +-max(x,0)^5 and of g on [1/(2k+1), 1/(2k)], k <= kmax"),
    ("d1-counterexample", "points 1/k for k <= K together with their limit 0, on the x-axis"),
    ("d1-locally-finite", "[0,1], {2} and [3,4] on the x-axis"),
    ("semiconcave-graph", "hypograph {y <= -x^2} over [-1, 1]"),
];

pub fn gallery_names() -> Vec<&'static str> {
    GALLERY.iter().map(|(n, _)| *n).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalleryParams {
    /// Truncation depth of the nowhere-dense family.
    pub kmax: usize,
    /// Number of points of the one-dimensional counterexample.
    pub count: usize,
    /// Number of components of `{g >= 0}` kept on each side.
    pub components: usize,
    /// Half-width of the window `[-W, W]` on which `g` is used.
    pub window: f64,
}

impl Default for GalleryParams {
    fn default() -> Self {
        GalleryParams { kmax: 8, count: 100, components: 60, window: 1.0 }
    }
}

/// Continuous envelopes `U`, `Ũ`, `L`, `L̃` of the nowhere-dense set.
#[derive(Debug, Clone)]
pub struct Envelopes {
    pub u: DCFunction1D,
    pub u_tilde: DCFunction1D,
    pub l: DCFunction1D,
    pub l_tilde: DCFunction1D,
}

#[derive(Debug, Clone)]
pub struct GalleryScene {
    pub name: String,
    pub description: String,
    pub scene: Scene,
    pub envelopes: Option<Envelopes>,
    /// The set on the x-axis, for the one-dimensional examples.
    pub line_set: Option<Interval1DSet>,
    /// Accumulation point on the x-axis and a sequence converging to it,
    /// ordered from far to near.
    pub accumulation: f64,
    pub sequence: Vec<f64>,
    /// Whether the distance function is DC.
    pub expect_dc: bool,
}

fn g_fn(w: f64) -> Result<DCFunction1D, SetError> {
    Ok(FnSpec::Poly5cos { scale: 1.0, window: w }.build()?)
}

fn f_fn(a: f64) -> Result<DCFunction1D, SetError> {
    Ok(FnSpec::PosPow5 { a }.build()?)
}

fn graph(f: &DCFunction1D, a: f64, b: f64) -> Primitive {
    Primitive::Graph(super::curve::GraphCurve::new(f.clone(), [a, b], Isometry::IDENTITY, super::curve::GRAPH_TOL))
}

fn region(lower: Option<&DCFunction1D>, upper: Option<&DCFunction1D>, a: f64, b: f64) -> Result<Primitive, SetError> {
    Ok(Primitive::Region(Arc::new(RegionSet::new(lower.cloned(), upper.cloned(), [a, b], super::curve::GRAPH_TOL)?)))
}

fn point(x: f64) -> Primitive {
    Primitive::Point(Point::new(x, 0.0))
}

/// Components of `{x ∈ [-W, W]: g(x) >= 0}` other than `{0}`, `n` per
/// side, and the gap midpoints between consecutive kept components.
fn nonnegative_set(n: usize, w: f64) -> (Vec<[f64; 2]>, Vec<f64>) {
    let mut comps = Vec::new();
    let mut seq = Vec::new();
    for k in 1..=n {
        let kf = k as f64;
        // cos(π/x) >= 0 for x ∈ [1/(2k+½), 1/(2k-½)]
        let (a, b) = (1.0 / (2.0 * kf + 0.5), (1.0 / (2.0 * kf - 0.5)).min(w));
        if a < b {
            comps.push([a, b]);
        }
        // for x < 0, cos(π/|x|) <= 0 on |x| ∈ [1/(2k+3/2), 1/(2k+½)], k >= 0
        let k0 = kf - 1.0;
        let (a, b) = (1.0 / (2.0 * k0 + 1.5), (1.0 / (2.0 * k0 + 0.5)).min(w));
        if a < b {
            comps.push([-b, -a]);
        }
        if k < n {
            seq.push(0.5 * (1.0 / (2.0 * kf + 1.5) + 1.0 / (2.0 * kf + 0.5)));
            seq.push(-0.5 * (1.0 / (2.0 * k0 + 2.5) + 1.0 / (2.0 * k0 + 1.5)));
        }
    }
    comps.sort_by(|p, q| p[0].total_cmp(&q[0]));
    (comps, seq)
}

/// Gap midpoints of the osc-M section, used as the detector sequence for
/// every set built from `g`.
fn osc_sequence(p: &GalleryParams) -> Vec<f64> {
    nonnegative_set(p.components, p.window).1
}

/// Pieces of one envelope, as sorted `(a, b, function)`, `g` elsewhere.
fn envelope(upper: bool, parity: usize, kmax: usize, w: f64) -> Result<DCFunction1D, SetError> {
    let g = g_fn(w)?;
    let f = f_fn(1.0)?;
    let mf = f_fn(-1.0)?;
    let inv = |k: usize| 1.0 / k as f64;
    let mut special: Vec<(f64, f64, DCFunction1D)> = Vec::new();
    if parity == 0 {
        if upper {
            special.push((1.0 / 3.0, 0.5, g.clone()));
            special.push((0.5, w, f.clone()));
        } else {
            special.push((1.0 / 3.0, w, mf.clone()));
        }
    }
    for k in (1..kmax).filter(|k| k % 2 == parity) {
        if upper {
            special.push((inv(2 * k + 3), inv(2 * k + 2), g.clone()));
            special.push((inv(2 * k + 2), inv(2 * k), f.clone()));
        } else {
            special.push((inv(2 * k + 3), inv(2 * k + 1), mf.clone()));
            special.push((inv(2 * k + 1), inv(2 * k), g.clone()));
        }
    }
    if kmax % 2 == parity {
        // component between A_kmax and the origin
        if upper {
            special.push((0.0, inv(2 * kmax), f.clone()));
        } else {
            special.push((0.0, inv(2 * kmax + 1), mf.clone()));
            special.push((inv(2 * kmax + 1), inv(2 * kmax), g.clone()));
        }
    }
    special.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut breaks = vec![-w];
    let mut pieces = Vec::new();
    for (a, b, fun) in special {
        let last = *breaks.last().unwrap();
        if a > last {
            breaks.push(a);
            pieces.push(g.clone());
        }
        breaks.push(b);
        pieces.push(fun);
    }
    if *breaks.last().unwrap() < w {
        breaks.push(w);
        pieces.push(g.clone());
    }
    let c = poly5cos_curvature(w).max(20.0 * w.powi(3));
    let label = match (upper, parity) {
        (true, 0) => "U",
        (true, _) => "U~",
        (false, 0) => "L",
        (false, _) => "L~",
    };
    Ok(pieced(breaks, pieces, c)?.with_label(label))
}

pub fn nowhere_dense_envelopes(kmax: usize, w: f64) -> Result<Envelopes, SetError> {
    Ok(Envelopes {
        u: envelope(true, 0, kmax, w)?,
        u_tilde: envelope(true, 1, kmax, w)?,
        l: envelope(false, 0, kmax, w)?,
        l_tilde: envelope(false, 1, kmax, w)?,
    })
}

pub fn gallery(name: &str, p: &GalleryParams) -> Result<GalleryScene, SetError> {
    let description = GALLERY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| d.to_string())
        .ok_or_else(|| SetError::UnknownScene(name.to_string()))?;
    let w = p.window;
    if !(w > 0.0 && w <= 1.0) {
        return Err(SetError::Malformed(format!("window {w} must lie in (0, 1]")));
    }
    let mut out = GalleryScene {
        name: name.to_string(),
        description,
        scene: Scene::default(),
        envelopes: None,
        line_set: None,
        accumulation: 0.0,
        sequence: osc_sequence(p),
        expect_dc: true,
    };
    let items: Vec<Item> = match name {
        "osc-intersection-A" => vec![Item::new(Primitive::HalfPlane { normal: Point::new(0.0, -1.0), offset: 0.0 })],
        "osc-intersection-B" => vec![Item::new(region(None, Some(&g_fn(w)?), -w, w)?)],
        "osc-M" => {
            let g = g_fn(w)?;
            let zero = FnSpec::Constant { c: 0.0 }.build()?;
            let (comps, _) = nonnegative_set(p.components, w);
            let mut items = vec![Item::new(point(0.0))];
            for [a, b] in comps {
                items.push(Item::new(region(Some(&zero), Some(&g), a, b)?));
            }
            out.expect_dc = false;
            items
        }
        "osc-K" => vec![
            Item::new(Primitive::HalfPlane { normal: Point::new(0.0, 1.0), offset: 0.0 }),
            Item::new(region(Some(&g_fn(w)?), None, -w, w)?),
        ],
        "nowhere-dense-A" => {
            if p.kmax < 1 {
                return Err(SetError::Malformed("kmax must be >= 1".into()));
            }
            let g = g_fn(w)?;
            let mut items = vec![Item::new(graph(&f_fn(1.0)?, -w, w)), Item::new(graph(&f_fn(-1.0)?, -w, w))];
            for k in 1..=p.kmax {
                let a = 1.0 / (2 * k + 1) as f64;
                let b = (1.0 / (2 * k) as f64).min(w);
                items.push(Item::new(graph(&g, a, b)));
            }
            out.envelopes = Some(nowhere_dense_envelopes(p.kmax, w)?);
            items
        }
        "d1-counterexample" => {
            if p.count < 2 {
                return Err(SetError::Malformed("count must be >= 2".into()));
            }
            let xs: Vec<f64> = (1..=p.count).map(|k| 1.0 / k as f64).collect();
            out.line_set = Some(Interval1DSet::points(xs.iter().copied().chain([0.0]), vec![0.0])?);
            out.sequence = xs.windows(2).map(|q| 0.5 * (q[0] + q[1])).collect();
            out.expect_dc = false;
            xs.iter().map(|&x| Item::new(point(x))).chain([Item::new(point(0.0))]).collect()
        }
        "d1-locally-finite" => {
            out.line_set = Some(Interval1DSet::new(vec![[0.0, 1.0], [2.0, 2.0], [3.0, 4.0]], vec![])?);
            out.accumulation = 2.0;
            out.sequence = (1..=24).flat_map(|j| [2.0 + 0.5f64.powi(j), 2.0 - 0.5f64.powi(j)]).collect();
            vec![
                Item::new(Primitive::Segment(Point::new(0.0, 0.0), Point::new(1.0, 0.0))),
                Item::new(point(2.0)),
                Item::new(Primitive::Segment(Point::new(3.0, 0.0), Point::new(4.0, 0.0))),
            ]
        }
        "semiconcave-graph" => {
            let spec = PrimitiveSpec::Hypograph { f: FnSpec::Quadratic { a: -1.0, b: 0.0, c: 0.0 }, interval: [-1.0, 1.0], tol: None };
            vec![Item::new(spec.build()?).with_reach(f64::INFINITY)]
        }
        _ => unreachable!("listed name without a builder"),
    };
    out.scene = Scene::new(name, items);
    Ok(out)
}
