//! Planar distance, metric projection and vertex wedges for polylines.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Projection points closer than this are reported once.
pub const PROJECTION_DEDUP: f64 = 1e-10;
/// Slope differences at or below this make a vertex collinear.
pub const COLLINEAR_SLOPE_TOL: f64 = 1e-14;
/// Slack on normalized inner products in wedge membership.
pub const WEDGE_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("line through coincident points {0:?}")]
    DegenerateLine(Point),
    #[error("polyline needs at least two vertices")]
    TooFewVertices,
    #[error("consecutive polyline vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("polyline is not a graph: abscissae not increasing at vertex {0}")]
    NotAGraph(usize),
    #[error("wedge half-angle {0} outside (0, π/2)")]
    BadHalfAngle(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the direction of `self`, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Rigid motion `z ↦ R(θ) z + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    #[serde(default)]
    pub rotation: f64,
    #[serde(default)]
    pub translation: Point,
}

impl Default for Isometry {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { rotation: 0.0, translation: Point::ORIGIN };

    pub fn translation(t: Point) -> Self {
        Isometry { rotation: 0.0, translation: t }
    }

    pub fn apply(&self, z: Point) -> Point {
        if self.rotation == 0.0 {
            z + self.translation
        } else {
            z.rotate(self.rotation) + self.translation
        }
    }

    pub fn apply_inverse(&self, z: Point) -> Point {
        let w = z - self.translation;
        if self.rotation == 0.0 {
            w
        } else {
            w.rotate(-self.rotation)
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// Distance from a point to a closed set and the nearest points realizing it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub distance: f64,
    pub points: Vec<Point>,
}

impl ProjectionResult {
    pub fn single(distance: f64, p: Point) -> Self {
        ProjectionResult { distance, points: vec![p] }
    }

    pub fn nearest(&self) -> Point {
        self.points[0]
    }

    /// Minimum of two results; ties merge their point sets.
    pub fn merge(mut self, other: ProjectionResult) -> ProjectionResult {
        if other.distance < self.distance {
            return other;
        }
        if other.distance == self.distance {
            for p in other.points {
                push_dedup(&mut self.points, p);
            }
        }
        self
    }
}

fn push_dedup(points: &mut Vec<Point>, p: Point) {
    if !points.iter().any(|q| q.dist(p) <= PROJECTION_DEDUP) {
        points.push(p);
    }
}

/// Parameter of the nearest point of `[a, b]` to `z`, in `[0, 1]`.
pub fn segment_parameter(z: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return 0.0;
    }
    ((z - a).dot(ab) / len2).clamp(0.0, 1.0)
}

/// Distance to the closed segment `[a, b]` (a point when `a = b`).
pub fn segment_distance(z: Point, a: Point, b: Point) -> ProjectionResult {
    let t = segment_parameter(z, a, b);
    let p = if t == 0.0 {
        a
    } else if t == 1.0 {
        b
    } else {
        a.lerp(b, t)
    };
    ProjectionResult::single(z.dist(p), p)
}

/// Signed distance to the line through `a`, `b`; positive to the left of `a → b`.
pub fn signed_line_distance(z: Point, a: Point, b: Point) -> Result<f64, GeomError> {
    let d = (b - a).normalized().ok_or(GeomError::DegenerateLine(a))?;
    Ok(d.cross(z - a))
}

pub fn line_distance(z: Point, a: Point, b: Point) -> Result<f64, GeomError> {
    signed_line_distance(z, a, b).map(f64::abs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for Polyline {
    type Error = GeomError;
    fn try_from(v: Vec<Point>) -> Result<Self, GeomError> {
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Point> {
    fn from(p: Polyline) -> Self {
        p.vertices
    }
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        if vertices.len() < 2 {
            return Err(GeomError::TooFewVertices);
        }
        if let Some(i) = vertices.windows(2).position(|w| w[0] == w[1]) {
            return Err(GeomError::RepeatedVertex(i, i + 1));
        }
        Ok(Polyline { vertices })
    }

    /// Graph polyline through `(x_i, y_i)`.
    pub fn from_graph(xs: &[f64], ys: &[f64]) -> Result<Self, GeomError> {
        Polyline::new(xs.iter().zip(ys).map(|(&x, &y)| Point::new(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn segment(&self, i: usize) -> (Point, Point) {
        (self.vertices[i], self.vertices[i + 1])
    }

    pub fn is_graph(&self) -> bool {
        self.vertices.windows(2).all(|w| w[0].x < w[1].x)
    }

    /// Slopes of a graph polyline.
    pub fn slopes(&self) -> Result<Vec<f64>, GeomError> {
        if let Some(i) = self.vertices.windows(2).position(|w| w[0].x >= w[1].x) {
            return Err(GeomError::NotAGraph(i + 1));
        }
        Ok(self
            .vertices
            .windows(2)
            .map(|w| (w[1].y - w[0].y) / (w[1].x - w[0].x))
            .collect())
    }
}

/// Distance to a polyline: the minimum of the segment distances, with every
/// segment-nearest point attaining it.
pub fn polyline_distance(z: Point, p: &Polyline) -> ProjectionResult {
    let mut best = f64::INFINITY;
    let mut points = Vec::new();
    for i in 0..p.segments() {
        let (a, b) = p.segment(i);
        let r = segment_distance(z, a, b);
        if r.distance < best {
            best = r.distance;
            points.clear();
            points.push(r.points[0]);
        } else if r.distance == best {
            push_dedup(&mut points, r.points[0]);
        }
    }
    ProjectionResult { distance: best, points }
}

/// Indices of segments whose distance to `z` equals the polyline distance.
pub fn nearest_segments(z: Point, p: &Polyline) -> (f64, Vec<usize>) {
    let d: Vec<f64> = (0..p.segments())
        .map(|i| {
            let (a, b) = p.segment(i);
            segment_distance(z, a, b).distance
        })
        .collect();
    let best = d.iter().copied().fold(f64::INFINITY, f64::min);
    (best, (0..d.len()).filter(|&i| d[i] == best).collect())
}

/// `β_i = arctan s_i`, `α_i = |β_i - β_{i-1}|` and `Σ α_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexAngles {
    pub slopes: Vec<f64>,
    /// One per segment.
    pub betas: Vec<f64>,
    /// `alphas[i - 1]` belongs to interior vertex `i`.
    pub alphas: Vec<f64>,
    pub total: f64,
}

pub fn vertex_angles(p: &Polyline) -> Result<VertexAngles, GeomError> {
    let slopes = p.slopes()?;
    let betas: Vec<f64> = slopes.iter().map(|s| s.atan()).collect();
    let alphas: Vec<f64> = betas.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let total = alphas.iter().sum();
    Ok(VertexAngles { slopes, betas, alphas, total })
}

/// Closed planar angle with a vertex, unit bisector and half-angle in `(0, π/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wedge {
    vertex: Point,
    bisector: Point,
    half_angle: f64,
}

impl Wedge {
    pub fn new(vertex: Point, bisector: Point, half_angle: f64) -> Result<Self, GeomError> {
        if !(half_angle > 0.0 && half_angle < FRAC_PI_2) {
            return Err(GeomError::BadHalfAngle(half_angle));
        }
        let bisector = bisector.normalized().ok_or(GeomError::DegenerateLine(vertex))?;
        Ok(Wedge { vertex, bisector, half_angle })
    }

    pub fn vertex(&self) -> Point {
        self.vertex
    }

    pub fn bisector(&self) -> Point {
        self.bisector
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    /// Measure `α = 2β`.
    pub fn angle(&self) -> f64 {
        2.0 * self.half_angle
    }

    /// Coordinates in the wedge frame: vertex at the origin, bisector along +x.
    pub fn to_frame(&self, z: Point) -> Point {
        let w = z - self.vertex;
        Point::new(w.dot(self.bisector), self.bisector.cross(w))
    }

    pub fn from_frame(&self, w: Point) -> Point {
        self.vertex + self.bisector * w.x + self.bisector.perp() * w.y
    }

    /// The two unit edge directions `e` with `V = {⟨z - v, e⟩ <= 0}`.
    pub fn edge_directions(&self) -> [Point; 2] {
        let t = FRAC_PI_2 + self.half_angle;
        [self.bisector.rotate(t), self.bisector.rotate(-t)]
    }

    pub fn contains(&self, z: Point) -> bool {
        let w = z - self.vertex;
        let r = w.norm();
        if r == 0.0 {
            return true;
        }
        self.edge_directions().iter().all(|e| w.dot(*e) <= WEDGE_SLACK * r)
    }
}

/// Normal wedge at `mid` between the edges to `prev` and `next`, or `None`
/// when the three points are collinear (zero turning angle).
pub fn wedge_at_vertex(prev: Point, mid: Point, next: Point) -> Option<Wedge> {
    let e1 = (next - mid).normalized()?;
    let e2 = (prev - mid).normalized()?;
    // turning angle between the incoming and outgoing directions
    let d_in = -e2;
    let alpha = d_in.cross(e1).abs().atan2(d_in.dot(e1));
    if alpha <= COLLINEAR_SLOPE_TOL {
        return None;
    }
    let bisector = -(e1 + e2);
    Wedge::new(mid, bisector, 0.5 * alpha).ok()
}

/// Wedges at the interior vertices of a graph polyline.
///
/// Vertex `i` is flat when `|s_i - s_{i-1}| <= COLLINEAR_SLOPE_TOL`; otherwise
/// its half-angle is `|β_i - β_{i-1}| / 2`.
pub fn graph_vertex_wedges(p: &Polyline) -> Result<Vec<Option<Wedge>>, GeomError> {
    let ang = vertex_angles(p)?;
    let v = p.vertices();
    Ok((1..p.segments())
        .map(|i| {
            if (ang.slopes[i] - ang.slopes[i - 1]).abs() <= COLLINEAR_SLOPE_TOL {
                return None;
            }
            let e1 = (v[i + 1] - v[i]).normalized()?;
            let e2 = (v[i - 1] - v[i]).normalized()?;
            Wedge::new(v[i], -(e1 + e2), 0.5 * ang.alphas[i - 1]).ok()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn abs_polyline() -> Polyline {
        Polyline::new(vec![Point::new(-1.0, 1.0), Point::ORIGIN, Point::new(1.0, 1.0)]).unwrap()
    }

    #[test]
    fn segment_distances() {
        let (a, b) = (Point::new(-1.0, 0.0), Point::new(1.0, 0.0));
        let r = segment_distance(Point::new(0.0, 1.0), a, b);
        assert_eq!((r.distance, r.nearest()), (1.0, Point::ORIGIN));
        let r = segment_distance(Point::new(2.0, 0.0), a, b);
        assert_eq!((r.distance, r.nearest()), (1.0, b));
        let r = segment_distance(Point::new(2.0, 1.0), a, b);
        assert_eq!((r.distance, r.nearest()), (SQRT_2, b));
        let r = segment_distance(Point::new(3.0, 4.0), a, a);
        assert_eq!(r.distance, (16.0f64 + 16.0).sqrt());
    }

    #[test]
    fn line_distances() {
        let (a, b) = (Point::new(-1.0, 0.0), Point::new(1.0, 0.0));
        assert_eq!(line_distance(Point::new(0.0, 1.0), a, b).unwrap(), 1.0);
        assert_eq!(line_distance(Point::new(5.0, 1.0), a, b).unwrap(), 1.0);
        assert_eq!(line_distance(Point::new(7.5, 0.0), a, b).unwrap(), 0.0);
        assert_eq!(signed_line_distance(Point::new(0.0, -2.0), a, b).unwrap(), -2.0);
        assert!(matches!(line_distance(Point::ORIGIN, a, a), Err(GeomError::DegenerateLine(_))));
    }

    #[test]
    fn polyline_distance_two_projections() {
        let r = polyline_distance(Point::new(0.0, 0.5), &abs_polyline());
        assert!((r.distance - 0.353_553_390_593_273_7).abs() < 1e-15);
        assert_eq!(r.points.len(), 2);
        for p in &r.points {
            assert!((p.x.abs() - 0.25).abs() < 1e-15 && (p.y - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn polyline_distance_brute_force_oracle() {
        // 10⁶ samples on the parameterization of the graph of |x|.
        let z = Point::new(0.0, 0.5);
        let n = 1_000_000;
        let best = (0..=n)
            .map(|k| {
                let x = -1.0 + 2.0 * k as f64 / n as f64;
                z.dist(Point::new(x, x.abs()))
            })
            .fold(f64::INFINITY, f64::min);
        let r = polyline_distance(z, &abs_polyline());
        assert!((r.distance - best).abs() < 1e-11);
        assert!(r.distance <= best);
    }

    #[test]
    fn polyline_distance_vertex_and_on_curve() {
        let r = polyline_distance(Point::new(0.0, -1.0), &abs_polyline());
        assert_eq!((r.distance, r.points.clone()), (1.0, vec![Point::ORIGIN]));
        let r = polyline_distance(Point::new(0.3, 0.3), &abs_polyline());
        assert_eq!(r.distance, 0.0);
    }

    #[test]
    fn polyline_rejects_repeats() {
        assert!(Polyline::new(vec![Point::ORIGIN]).is_err());
        assert!(Polyline::new(vec![Point::ORIGIN, Point::ORIGIN]).is_err());
    }

    #[test]
    fn angles_from_slopes() {
        let p = abs_polyline();
        let a = vertex_angles(&p).unwrap();
        assert_eq!(a.betas, vec![-FRAC_PI_4, FRAC_PI_4]);
        assert_eq!(a.alphas, vec![std::f64::consts::FRAC_PI_2]);
        let q = Polyline::from_graph(&[-1.0, 0.0, 1.0], &[0.5, 0.0, 0.5]).unwrap();
        let a = vertex_angles(&q).unwrap();
        assert!((a.alphas[0] - 0.927_295_218_001_612_2).abs() < 1e-15);
        let not_graph = Polyline::new(vec![Point::ORIGIN, Point::new(1.0, 0.0), Point::new(0.5, 1.0)]).unwrap();
        assert!(matches!(vertex_angles(&not_graph), Err(GeomError::NotAGraph(2))));
    }

    #[test]
    fn square_interpolant_angle_sum_below_turning() {
        let xs = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let a = vertex_angles(&Polyline::from_graph(&xs, &ys).unwrap()).unwrap();
        // exact arctan arithmetic: Σ|atan s_i - atan s_{i-1}| with s = ±1.5, ±0.5
        let expect = 2.0 * (1.5f64.atan() - 0.5f64.atan()) + 2.0 * 0.5f64.atan();
        assert!((a.total - expect).abs() < 1e-15);
        assert!(a.total <= 3.0);
        for (i, al) in a.alphas.iter().enumerate() {
            assert!(*al <= (a.slopes[i + 1] - a.slopes[i]).abs());
        }
    }

    #[test]
    fn wedge_of_abs_vertex() {
        let w = wedge_at_vertex(Point::new(-1.0, 1.0), Point::ORIGIN, Point::new(1.0, 1.0)).unwrap();
        assert_eq!(w.vertex(), Point::ORIGIN);
        assert!((w.bisector() - Point::new(0.0, -1.0)).norm() < 1e-15);
        assert!((w.half_angle() - FRAC_PI_4).abs() < 1e-15);
        assert!(w.contains(Point::new(0.0, -1.0)));
        assert!(w.contains(Point::new(1.0, -1.0)));
        assert!(!w.contains(Point::new(1.0, -0.9)));
        assert!(!w.contains(Point::new(0.0, 1.0)));
    }

    #[test]
    fn collinear_has_no_wedge() {
        assert!(wedge_at_vertex(Point::ORIGIN, Point::new(1.0, 0.0), Point::new(2.0, 0.0)).is_none());
        let p = Polyline::from_graph(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(graph_vertex_wedges(&p).unwrap(), vec![None]);
    }

    #[test]
    fn shallow_wedge_matches_membership_sampling() {
        let w = wedge_at_vertex(Point::new(-1.0, 0.5), Point::ORIGIN, Point::new(1.0, 0.5)).unwrap();
        assert!((w.bisector() - Point::new(0.0, -1.0)).norm() < 1e-15);
        assert!((w.half_angle() - 0.5f64.atan()).abs() < 1e-15);
        // membership by the defining inequalities against the edges
        let (e1, e2) = (Point::new(1.0, 0.5), Point::new(-1.0, 0.5));
        for k in 0..720 {
            let t = k as f64 * std::f64::consts::PI / 360.0 + 1e-3;
            let z = Point::new(t.cos(), t.sin());
            let direct = z.dot(e1) <= 0.0 && z.dot(e2) <= 0.0;
            assert_eq!(w.contains(z), direct, "angle {t}");
        }
        let g = graph_vertex_wedges(&Polyline::from_graph(&[-1.0, 0.0, 1.0], &[0.5, 0.0, 0.5]).unwrap()).unwrap();
        assert!((g[0].unwrap().half_angle() - w.half_angle()).abs() < 1e-15);
    }

    #[test]
    fn frame_round_trip() {
        let w = Wedge::new(Point::new(1.0, 2.0), Point::new(1.0, 1.0), 0.3).unwrap();
        let z = Point::new(-0.4, 3.3);
        let back = w.from_frame(w.to_frame(z));
        assert!((back - z).norm() < 1e-14);
        assert!(Wedge::new(Point::ORIGIN, Point::new(1.0, 0.0), FRAC_PI_2).is_err());
    }
}
