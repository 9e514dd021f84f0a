use super::curve::{ray_distance, GraphCurve, GRAPH_TOL};
use super::SetError;
use crate::dc::DCFunction1D;
use crate::geom::{Isometry, Point};
use serde::{Deserialize, Serialize};

/// Slack of the region tests.
const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TruncatedRegion {
    /// On the extended graph, `u >= 0`.
    M0,
    /// Above the extended graph.
    M1,
    /// Below the extended graph.
    M2,
    /// The cone `u/L < v < -u/L`.
    M3,
}

/// Distance to `graph f|[0, p]` near the endpoint `(0, 0)`, assembled from
/// the distances to the two extended graphs `f_±`.
///
/// `f_±` equal `f` on `[0, p]`, `f(p)` beyond `p`, and `±2L x` for `x < 0`.
/// The left rays are orthogonal to the lines `v = ∓u/(2L)` bounding the
/// regions, so inside `M_1` and `M_2` their nearest point is the origin.
#[derive(Debug, Clone)]
pub struct TruncatedGraph {
    curve: GraphCurve,
    p: f64,
    lipschitz: f64,
    fp: f64,
    /// Unit directions of the left rays of `f_+` and `f_-`.
    left: [Point; 2],
}

impl TruncatedGraph {
    pub fn new(f: DCFunction1D, p: f64, lipschitz: f64) -> Result<Self, SetError> {
        if !(p > 0.0 && p.is_finite()) || !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(SetError::Malformed(format!("need p > 0 and L > 0, got p = {p}, L = {lipschitz}")));
        }
        let f0 = f.value(0.0);
        if f0.abs() > CLASSIFY_TOL {
            return Err(SetError::Malformed(format!("f(0) = {f0}, expected 0")));
        }
        let (lo, hi) = f.domain();
        if lo > 0.0 || hi < p {
            return Err(SetError::Malformed(format!("[0, {p}] outside the domain [{lo}, {hi}]")));
        }
        let curve = GraphCurve::new(f, [0.0, p], Isometry::IDENTITY, GRAPH_TOL);
        for w in curve.nodes().windows(2) {
            let s = (w[1].y - w[0].y) / (w[1].x - w[0].x);
            if s.abs() > lipschitz * (1.0 + 1e-9) {
                return Err(SetError::Malformed(format!("chord slope {s} exceeds L = {lipschitz} near x = {}", w[0].x)));
            }
        }
        let fp = curve.f.value(p);
        let k = 2.0 * lipschitz;
        let n = k.hypot(1.0);
        Ok(TruncatedGraph { curve, p, lipschitz, fp, left: [Point::new(-1.0 / n, -k / n), Point::new(-1.0 / n, k / n)] })
    }

    fn f_plus(&self, u: f64) -> f64 {
        if u <= self.p {
            self.curve.f.value(u)
        } else {
            self.fp
        }
    }

    fn extended(&self, z: Point, sign: usize) -> f64 {
        let end = Point::new(self.p, self.fp);
        self.curve
            .distance(z)
            .distance
            .min(ray_distance(z, Point::ORIGIN, self.left[sign]).distance)
            .min(ray_distance(z, end, Point::new(1.0, 0.0)).distance)
    }

    /// `dist(z, graph f_+)`.
    pub fn d1(&self, z: Point) -> f64 {
        self.extended(z, 0)
    }

    /// `dist(z, graph f_-)`.
    pub fn d2(&self, z: Point) -> f64 {
        self.extended(z, 1)
    }

    /// Every region containing `z`, allowing `CLASSIFY_TOL` of slack.
    pub fn classify(&self, z: Point) -> Vec<TruncatedRegion> {
        let (u, v) = (z.x, z.y);
        let l = self.lipschitz;
        let t = CLASSIFY_TOL;
        let mut out = Vec::new();
        if u >= -t {
            let fu = self.f_plus(u.max(0.0));
            if (v - fu).abs() <= t {
                out.push(TruncatedRegion::M0);
            }
        }
        if (u >= -t && v > self.f_plus(u.max(0.0)) - t) || (u < t && v > -u / (2.0 * l) - t) {
            out.push(TruncatedRegion::M1);
        }
        if (u >= -t && v < self.f_plus(u.max(0.0)) + t) || (u < t && v < u / (2.0 * l) + t) {
            out.push(TruncatedRegion::M2);
        }
        if u / l - t < v && v < -u / l + t {
            out.push(TruncatedRegion::M3);
        }
        out
    }

    pub fn region_value(&self, z: Point, region: TruncatedRegion) -> f64 {
        match region {
            TruncatedRegion::M0 => 0.0,
            TruncatedRegion::M1 => self.d1(z),
            TruncatedRegion::M2 => self.d2(z),
            TruncatedRegion::M3 => z.norm(),
        }
    }

    /// `d̃(z) = d_i(z)` for `z ∈ M_i`. All matching regions are evaluated and
    /// must agree to the graph refinement accuracy.
    pub fn distance(&self, z: Point) -> Result<f64, SetError> {
        let regions = self.classify(z);
        let agree = 4.0 * self.curve.tol + CLASSIFY_TOL;
        let mut value: Option<f64> = None;
        for r in regions {
            let d = self.region_value(z, r);
            match value {
                None => value = Some(d),
                Some(a) if (a - d).abs() > agree => return Err(SetError::Inconsistent { at: z, a, b: d }),
                Some(a) => value = Some(a.min(d)),
            }
        }
        value.ok_or(SetError::Inconsistent { at: z, a: f64::NAN, b: f64::NAN })
    }

    /// Plain distance to `graph f|[0, p]`.
    pub fn graph_distance(&self, z: Point) -> f64 {
        self.curve.distance(z).distance
    }
}

pub fn truncated_graph_distance(z: Point, f: &DCFunction1D, p: f64, lipschitz: f64) -> Result<f64, SetError> {
    TruncatedGraph::new(f.clone(), p, lipschitz)?.distance(z)
}
