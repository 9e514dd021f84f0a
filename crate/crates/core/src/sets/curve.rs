//! Planar curve pieces with exact or polyline-refined distances.

use crate::dc::{DCFunction1D, Side};
use crate::geom::{segment_distance, segment_parameter, Isometry, Point, ProjectionResult};
use std::f64::consts::TAU;
use std::sync::Arc;

/// Default vertical accuracy of refined graph polylines.
pub const GRAPH_TOL: f64 = 1e-8;
const LEAF: usize = 8;
const MAX_DEPTH: u32 = 48;

/// Breakpoints in `[a, b]` on which the chord interpolant of `f` is within
/// `tol` of `f`, using [`DCFunction1D::interp_error_bound`]. Kinks of `g`
/// and `h` are always breakpoints.
pub fn refine_breakpoints(f: &DCFunction1D, a: f64, b: f64, tol: f64) -> Vec<f64> {
    let mut anchors = vec![a];
    anchors.extend(f.kinks(a, b));
    anchors.push(b);
    anchors.dedup();
    let mut xs = vec![a];
    for w in anchors.windows(2) {
        let mut stack = vec![(w[1], 0u32)];
        let mut lo = w[0];
        while let Some((hi, depth)) = stack.pop() {
            if depth >= MAX_DEPTH || f.interp_error_bound(lo, hi) <= tol {
                xs.push(hi);
                lo = hi;
            } else {
                stack.push((hi, depth + 1));
                stack.push((0.5 * (lo + hi), depth + 1));
            }
        }
    }
    xs
}

/// Polyline with a bounding-box tree over contiguous segment ranges for
/// pruned nearest-point queries.
#[derive(Debug, Clone)]
pub struct ChunkedPolyline {
    pts: Vec<Point>,
    nodes: Vec<BoxNode>,
}

#[derive(Debug, Clone)]
struct BoxNode {
    lo: Point,
    hi: Point,
    /// Segment range `[start, end)`.
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

impl BoxNode {
    fn lower_bound(&self, z: Point) -> f64 {
        let dx = (self.lo.x - z.x).max(z.x - self.hi.x).max(0.0);
        let dy = (self.lo.y - z.y).max(z.y - self.hi.y).max(0.0);
        dx.hypot(dy)
    }
}

impl ChunkedPolyline {
    pub fn new(pts: Vec<Point>) -> Self {
        let mut out = ChunkedPolyline { pts, nodes: Vec::new() };
        let segs = out.pts.len().saturating_sub(1);
        if segs > 0 {
            out.build(0, segs);
        }
        out
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let mut lo = self.pts[start];
        let mut hi = lo;
        for p in &self.pts[start..=end] {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let id = self.nodes.len();
        self.nodes.push(BoxNode { lo, hi, start, end, children: None });
        if end - start > LEAF {
            let mid = start + (end - start) / 2;
            let l = self.build(start, mid);
            let r = self.build(mid, end);
            self.nodes[id].children = Some((l, r));
        }
        id
    }

    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    pub fn distance(&self, z: Point) -> ProjectionResult {
        if self.pts.len() == 1 {
            return ProjectionResult::single(z.dist(self.pts[0]), self.pts[0]);
        }
        let mut best = f64::INFINITY;
        let mut at: Vec<usize> = Vec::new();
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i];
            if node.lower_bound(z) > best {
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    let (dl, dr) = (self.nodes[l].lower_bound(z), self.nodes[r].lower_bound(z));
                    if dl <= dr {
                        stack.extend([r, l]);
                    } else {
                        stack.extend([l, r]);
                    }
                }
                None => {
                    for k in node.start..node.end {
                        let (a, b) = (self.pts[k], self.pts[k + 1]);
                        let t = segment_parameter(z, a, b);
                        let q = if t == 0.0 {
                            a
                        } else if t == 1.0 {
                            b
                        } else {
                            a.lerp(b, t)
                        };
                        let d = z.dist(q);
                        if d < best {
                            best = d;
                            at.clear();
                            at.push(k);
                        } else if d == best {
                            at.push(k);
                        }
                    }
                }
            }
        }
        at.sort_unstable();
        at.into_iter()
            .map(|k| segment_distance(z, self.pts[k], self.pts[k + 1]))
            .reduce(ProjectionResult::merge)
            .expect("nonempty polyline")
    }
}

/// Refined polyline of `graph f|[a, b]`, placed by an isometry.
#[derive(Debug, Clone)]
pub struct GraphCurve {
    pub f: DCFunction1D,
    pub interval: [f64; 2],
    pub isometry: Isometry,
    pub tol: f64,
    local: Arc<ChunkedPolyline>,
}

impl GraphCurve {
    pub fn new(f: DCFunction1D, interval: [f64; 2], isometry: Isometry, tol: f64) -> Self {
        let [a, b] = interval;
        let pts = if a == b {
            vec![Point::new(a, f.value(a))]
        } else {
            refine_breakpoints(&f, a, b, tol).into_iter().map(|x| Point::new(x, f.value(x))).collect()
        };
        GraphCurve { f, interval, isometry, tol, local: Arc::new(ChunkedPolyline::new(pts)) }
    }

    pub fn nodes(&self) -> &[Point] {
        self.local.points()
    }

    pub fn distance(&self, z: Point) -> ProjectionResult {
        let mut r = self.local.distance(self.isometry.apply_inverse(z));
        if !self.isometry.is_identity() {
            for p in &mut r.points {
                *p = self.isometry.apply(*p);
            }
        }
        r
    }

    /// Point of the graph over `x`, in local coordinates.
    pub fn local_point(&self, x: f64) -> Point {
        Point::new(x, self.f.value(x))
    }

    /// Upward unit normal in local coordinates.
    pub fn local_normal(&self, x: f64, side: Side) -> Point {
        let s = self.f.derivative(x, side);
        Point::new(-s, 1.0) * (1.0 / s.hypot(1.0))
    }
}

/// Circular arc from angle `start` counterclockwise through `sweep`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPiece {
    pub center: Point,
    pub radius: f64,
    pub start: f64,
    pub sweep: f64,
}

impl ArcPiece {
    pub fn point_at(&self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        self.center + Point::new(c, s) * self.radius
    }

    pub fn distance(&self, z: Point) -> ProjectionResult {
        let w = z - self.center;
        let r = w.norm();
        if r > 0.0 {
            let rel = (w.y.atan2(w.x) - self.start).rem_euclid(TAU);
            if rel <= self.sweep {
                let p = self.center + w * (self.radius / r);
                return ProjectionResult::single((r - self.radius).abs(), p);
            }
        } else if self.sweep >= TAU {
            return ProjectionResult::single(self.radius, self.point_at(self.start));
        }
        let a = self.point_at(self.start);
        let b = self.point_at(self.start + self.sweep);
        ProjectionResult::single(z.dist(a), a).merge(ProjectionResult::single(z.dist(b), b))
    }
}

pub fn ray_distance(z: Point, origin: Point, dir: Point) -> ProjectionResult {
    let t = (z - origin).dot(dir).max(0.0);
    let p = origin + dir * t;
    ProjectionResult::single(z.dist(p), p)
}

pub fn line_projection(z: Point, a: Point, dir: Point) -> ProjectionResult {
    let p = a + dir * (z - a).dot(dir);
    ProjectionResult::single(z.dist(p), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dc::FnSpec;

    #[test]
    fn refinement_meets_tolerance() {
        let f = FnSpec::builtin("poly5cos").unwrap().build().unwrap();
        let c = GraphCurve::new(f.clone(), [-1.0, 1.0], Isometry::IDENTITY, 1e-8);
        let nodes = c.nodes();
        for w in nodes.windows(2) {
            for k in 1..8 {
                let x = w[0].x + (w[1].x - w[0].x) * k as f64 / 8.0;
                let t = (x - w[0].x) / (w[1].x - w[0].x);
                let chord = w[0].y + t * (w[1].y - w[0].y);
                assert!((chord - f.value(x)).abs() <= 1e-8, "x={x}");
            }
        }
    }

    #[test]
    fn kinks_are_nodes() {
        let f = FnSpec::builtin("abs").unwrap().build().unwrap();
        let c = GraphCurve::new(f, [-1.0, 1.0], Isometry::IDENTITY, 1e-8);
        assert_eq!(c.nodes().len(), 3);
        assert!((c.distance(Point::new(0.0, 1.0)).distance - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn chunked_matches_plain_scan() {
        let pts: Vec<Point> = (0..1000).map(|i| {
            let t = i as f64 / 999.0 * 6.0;
            Point::new(t.cos() * (1.0 + 0.1 * t), t.sin())
        }).collect();
        let c = ChunkedPolyline::new(pts.clone());
        for k in 0..200 {
            let z = Point::new((k as f64 * 0.37).sin() * 2.0, (k as f64 * 0.91).cos() * 2.0);
            let brute = pts
                .windows(2)
                .map(|w| segment_distance(z, w[0], w[1]).distance)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(c.distance(z).distance, brute);
        }
    }

    #[test]
    fn arc_distance() {
        let a = ArcPiece { center: Point::ORIGIN, radius: 1.0, start: 0.0, sweep: std::f64::consts::PI };
        assert!((a.distance(Point::new(0.0, 3.0)).distance - 2.0).abs() < 1e-15);
        assert!((a.distance(Point::new(0.0, -1.0)).distance - 2f64.sqrt()).abs() < 1e-15);
    }
}
