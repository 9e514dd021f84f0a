use super::curve::{line_projection, ray_distance, ArcPiece, ChunkedPolyline, GraphCurve, GRAPH_TOL};
use super::SetError;
use crate::dc::{DCFunction1D, FnSpec, Side};
use crate::geom::{segment_distance, Isometry, Point, ProjectionResult};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

/// Closed set `{(x, y): x ∈ [a, b], lower(x) <= y <= upper(x)}`; a missing
/// side is unbounded.
#[derive(Debug, Clone)]
pub struct RegionSet {
    pub lower: Option<GraphCurve>,
    pub upper: Option<GraphCurve>,
    pub interval: [f64; 2],
    boundary: Vec<Primitive>,
}

impl RegionSet {
    pub fn new(
        lower: Option<DCFunction1D>,
        upper: Option<DCFunction1D>,
        interval: [f64; 2],
        tol: f64,
    ) -> Result<Self, SetError> {
        let [a, b] = interval;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(SetError::Malformed(format!("region interval [{a}, {b}] must be compact")));
        }
        if lower.is_none() && upper.is_none() {
            return Err(SetError::Malformed("region needs a lower or an upper function".into()));
        }
        for f in lower.iter().chain(upper.iter()) {
            let (lo, hi) = f.domain();
            if a < lo || b > hi {
                return Err(SetError::Malformed(format!("region interval exceeds domain [{lo}, {hi}]")));
            }
        }
        let lower = lower.map(|f| GraphCurve::new(f, interval, Isometry::IDENTITY, tol));
        let upper = upper.map(|f| GraphCurve::new(f, interval, Isometry::IDENTITY, tol));
        let mut boundary = Vec::new();
        for g in lower.iter().chain(upper.iter()) {
            boundary.push(Primitive::Graph(g.clone()));
        }
        for x in [a, b] {
            match (&lower, &upper) {
                (Some(l), Some(u)) => {
                    let (p, q) = (l.local_point(x), u.local_point(x));
                    if p.y < q.y {
                        boundary.push(Primitive::Segment(p, q));
                    }
                }
                (Some(l), None) => boundary.push(Primitive::Ray { origin: l.local_point(x), dir: Point::new(0.0, 1.0) }),
                (None, Some(u)) => boundary.push(Primitive::Ray { origin: u.local_point(x), dir: Point::new(0.0, -1.0) }),
                (None, None) => unreachable!(),
            }
        }
        Ok(RegionSet { lower, upper, interval, boundary })
    }

    pub fn contains(&self, z: Point) -> bool {
        let [a, b] = self.interval;
        a <= z.x
            && z.x <= b
            && self.lower.as_ref().is_none_or(|l| l.f.value(z.x) <= z.y)
            && self.upper.as_ref().is_none_or(|u| z.y <= u.f.value(z.x))
    }

    /// Graph pieces and vertical sides.
    pub fn boundary(&self) -> &[Primitive] {
        &self.boundary
    }

    pub fn distance(&self, z: Point) -> ProjectionResult {
        if self.contains(z) {
            return ProjectionResult::single(0.0, z);
        }
        min_distance(z, &self.boundary)
    }
}

fn min_distance(z: Point, parts: &[Primitive]) -> ProjectionResult {
    parts
        .iter()
        .map(|p| p.distance(z))
        .reduce(ProjectionResult::merge)
        .expect("at least one part")
}

/// A resolved closed set of the plane.
#[derive(Debug, Clone)]
pub enum Primitive {
    Point(Point),
    Segment(Point, Point),
    /// `{origin + t dir: t >= 0}`, `dir` a unit vector.
    Ray { origin: Point, dir: Point },
    /// Line through `a` with unit direction `dir`.
    Line { a: Point, dir: Point },
    Polyline(Arc<ChunkedPolyline>),
    Graph(GraphCurve),
    Region(Arc<RegionSet>),
    /// `{z: ⟨normal, z⟩ <= offset}`, `normal` a unit vector.
    HalfPlane { normal: Point, offset: f64 },
    Disk { center: Point, radius: f64 },
    /// `{z: |z - center| >= radius}`.
    DiskExterior { center: Point, radius: f64 },
    Circle { center: Point, radius: f64 },
    Arc(ArcPiece),
    /// Level set `{dist(·, base) = r}`, resolved into pieces.
    Tube { base: Box<Primitive>, r: f64, pieces: Vec<Primitive> },
}

impl Primitive {
    pub fn distance(&self, z: Point) -> ProjectionResult {
        match self {
            Primitive::Point(p) => ProjectionResult::single(z.dist(*p), *p),
            Primitive::Segment(a, b) => segment_distance(z, *a, *b),
            Primitive::Ray { origin, dir } => ray_distance(z, *origin, *dir),
            Primitive::Line { a, dir } => line_projection(z, *a, *dir),
            Primitive::Polyline(p) => p.distance(z),
            Primitive::Graph(g) => g.distance(z),
            Primitive::Region(r) => r.distance(z),
            Primitive::HalfPlane { normal, offset } => {
                let s = normal.dot(z) - offset;
                if s <= 0.0 {
                    ProjectionResult::single(0.0, z)
                } else {
                    ProjectionResult::single(s, z - *normal * s)
                }
            }
            Primitive::Disk { center, radius } => {
                let w = z - *center;
                let r = w.norm();
                if r <= *radius {
                    ProjectionResult::single(0.0, z)
                } else {
                    ProjectionResult::single(r - radius, *center + w * (radius / r))
                }
            }
            Primitive::DiskExterior { center, radius } => {
                let w = z - *center;
                let r = w.norm();
                if r >= *radius {
                    ProjectionResult::single(0.0, z)
                } else if r == 0.0 {
                    ProjectionResult::single(*radius, *center + Point::new(*radius, 0.0))
                } else {
                    ProjectionResult::single(radius - r, *center + w * (radius / r))
                }
            }
            Primitive::Circle { center, radius } => {
                let arc = ArcPiece { center: *center, radius: *radius, start: 0.0, sweep: 2.0 * PI };
                arc.distance(z)
            }
            Primitive::Arc(a) => a.distance(z),
            Primitive::Tube { pieces, .. } => min_distance(z, pieces),
        }
    }

    /// Reach every instance of the primitive has: `+∞` for convex sets and
    /// the radius for circles. `None` when not known in closed form.
    pub fn default_reach(&self) -> Option<f64> {
        match self {
            Primitive::Point(_)
            | Primitive::Segment(..)
            | Primitive::Ray { .. }
            | Primitive::Line { .. }
            | Primitive::HalfPlane { .. }
            | Primitive::Disk { .. } => Some(f64::INFINITY),
            Primitive::Circle { radius, .. } | Primitive::DiskExterior { radius, .. } => Some(*radius),
            _ => None,
        }
    }

    /// `∂M` for the primitives whose boundary is known analytically.
    pub fn boundary(&self) -> Option<Vec<Primitive>> {
        match self {
            Primitive::HalfPlane { normal, offset } => {
                Some(vec![Primitive::Line { a: *normal * *offset, dir: normal.perp() }])
            }
            Primitive::Disk { center, radius } | Primitive::DiskExterior { center, radius } => {
                Some(vec![Primitive::Circle { center: *center, radius: *radius }])
            }
            Primitive::Region(r) => Some(r.boundary().to_vec()),
            _ => None,
        }
    }

    /// Closure of the complement, for the same primitives as [`Self::boundary`].
    pub fn complement_closure(&self) -> Option<Vec<Primitive>> {
        match self {
            Primitive::HalfPlane { normal, offset } => Some(vec![Primitive::HalfPlane { normal: -*normal, offset: -offset }]),
            Primitive::Disk { center, radius } => {
                Some(vec![Primitive::DiskExterior { center: *center, radius: *radius }])
            }
            Primitive::DiskExterior { center, radius } => Some(vec![Primitive::Disk { center: *center, radius: *radius }]),
            Primitive::Region(r) => {
                let [a, b] = r.interval;
                let mut out = vec![
                    Primitive::HalfPlane { normal: Point::new(1.0, 0.0), offset: a },
                    Primitive::HalfPlane { normal: Point::new(-1.0, 0.0), offset: -b },
                ];
                if let Some(u) = &r.upper {
                    let above = RegionSet::new(Some(u.f.clone()), None, r.interval, u.tol).ok()?;
                    out.push(Primitive::Region(Arc::new(above)));
                }
                if let Some(l) = &r.lower {
                    let below = RegionSet::new(None, Some(l.f.clone()), r.interval, l.tol).ok()?;
                    out.push(Primitive::Region(Arc::new(below)));
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// The level set `{dist(·, self) = r}` as curve pieces.
    pub fn tube(&self, r: f64) -> Result<Primitive, SetError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(SetError::Malformed(format!("tube radius {r} must be positive")));
        }
        let pieces = match self {
            Primitive::Point(p) => vec![Primitive::Circle { center: *p, radius: r }],
            Primitive::Disk { center, radius } => vec![Primitive::Circle { center: *center, radius: radius + r }],
            Primitive::HalfPlane { normal, offset } => {
                vec![Primitive::Line { a: *normal * (offset + r), dir: normal.perp() }]
            }
            Primitive::Segment(a, b) => {
                let d = (*b - *a).normalized().ok_or_else(|| SetError::Malformed("degenerate segment".into()))?;
                let n = d.perp();
                let ang = |v: Point| v.y.atan2(v.x);
                vec![
                    Primitive::Segment(*a + n * r, *b + n * r),
                    Primitive::Segment(*a - n * r, *b - n * r),
                    Primitive::Arc(ArcPiece { center: *b, radius: r, start: ang(-n), sweep: PI }),
                    Primitive::Arc(ArcPiece { center: *a, radius: r, start: ang(n), sweep: PI }),
                ]
            }
            Primitive::Region(reg) => region_tube(reg, r)?,
            other => return Err(SetError::Unsupported(format!("tube around {}", other.kind()))),
        };
        Ok(Primitive::Tube { base: Box::new(self.clone()), r, pieces })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Primitive::Point(_) => "point",
            Primitive::Segment(..) => "segment",
            Primitive::Ray { .. } => "ray",
            Primitive::Line { .. } => "line",
            Primitive::Polyline(_) => "polyline",
            Primitive::Graph(_) => "graph",
            Primitive::Region(_) => "region",
            Primitive::HalfPlane { .. } => "half-plane",
            Primitive::Disk { .. } => "disk",
            Primitive::DiskExterior { .. } => "disk-exterior",
            Primitive::Circle { .. } => "circle",
            Primitive::Arc(_) => "arc",
            Primitive::Tube { .. } => "tube",
        }
    }
}

/// Outer parallel curve of a one-sided region: offset graph, arcs at the
/// corners and at concave kinks, and offset vertical rays.
fn region_tube(reg: &RegionSet, r: f64) -> Result<Vec<Primitive>, SetError> {
    let (curve, flip) = match (&reg.lower, &reg.upper) {
        (None, Some(u)) => (u.clone(), false),
        (Some(l), None) => (GraphCurve::new(l.f.scale(-1.0), reg.interval, Isometry::IDENTITY, l.tol), true),
        _ => return Err(SetError::Unsupported("tube around a two-sided region".into())),
    };
    let [a, b] = reg.interval;
    let ang = |v: Point| v.y.atan2(v.x);
    let mut pieces = Vec::new();
    let mut run: Vec<Point> = Vec::new();
    let nodes = curve.nodes();
    for (i, p) in nodes.iter().enumerate() {
        let left = if i == 0 { None } else { Some(curve.local_normal(p.x, Side::Minus)) };
        let right = if i + 1 == nodes.len() { None } else { Some(curve.local_normal(p.x, Side::Plus)) };
        match (left, right) {
            (Some(nl), Some(nr)) if ang(nl) - ang(nr) > 1e-15 => {
                // concave kink: normals turn clockwise, the corner gets an arc
                run.push(*p + nl * r);
                pieces.push(Primitive::Polyline(Arc::new(ChunkedPolyline::new(std::mem::take(&mut run)))));
                pieces.push(Primitive::Arc(ArcPiece { center: *p, radius: r, start: ang(nr), sweep: ang(nl) - ang(nr) }));
                run.push(*p + nr * r);
            }
            (Some(nl), Some(nr)) if ang(nr) - ang(nl) > 1e-12 => {
                return Err(SetError::ReachViolated(format!("convex kink at x = {} has zero reach", p.x)));
            }
            (Some(n), _) | (None, Some(n)) => run.push(*p + n * r),
            (None, None) => unreachable!(),
        }
    }
    if run.len() >= 2 {
        pieces.push(Primitive::Polyline(Arc::new(ChunkedPolyline::new(run))));
    }
    let pa = curve.local_point(a);
    let pb = curve.local_point(b);
    let na = ang(curve.local_normal(a, Side::Plus));
    let nb = ang(curve.local_normal(b, Side::Minus));
    pieces.push(Primitive::Arc(ArcPiece { center: pa, radius: r, start: na, sweep: PI - na }));
    pieces.push(Primitive::Arc(ArcPiece { center: pb, radius: r, start: 0.0, sweep: nb }));
    pieces.push(Primitive::Ray { origin: pa - Point::new(r, 0.0), dir: Point::new(0.0, -1.0) });
    pieces.push(Primitive::Ray { origin: pb + Point::new(r, 0.0), dir: Point::new(0.0, -1.0) });
    debug_assert!(na > 0.0 && na < PI && nb > 0.0 && nb < PI && (na - FRAC_PI_2).abs() < FRAC_PI_2);
    if flip {
        pieces = pieces.into_iter().map(reflect_y).collect();
    }
    Ok(pieces)
}

fn reflect_y(p: Primitive) -> Primitive {
    let m = |q: Point| Point::new(q.x, -q.y);
    match p {
        Primitive::Polyline(c) => Primitive::Polyline(Arc::new(ChunkedPolyline::new(c.points().iter().map(|&q| m(q)).collect()))),
        Primitive::Arc(a) => Primitive::Arc(ArcPiece { center: m(a.center), radius: a.radius, start: -(a.start + a.sweep), sweep: a.sweep }),
        Primitive::Ray { origin, dir } => Primitive::Ray { origin: m(origin), dir: m(dir) },
        other => other,
    }
}

/// Declarative primitive, as read from scene files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PrimitiveSpec {
    Point { at: Point },
    Segment { a: Point, b: Point },
    Ray { origin: Point, direction: Point },
    Line { a: Point, b: Point },
    Polyline { vertices: Vec<Point> },
    Graph {
        f: FnSpec,
        interval: [f64; 2],
        #[serde(default)]
        isometry: Isometry,
        #[serde(default)]
        tol: Option<f64>,
    },
    Region {
        #[serde(default)]
        lower: Option<FnSpec>,
        #[serde(default)]
        upper: Option<FnSpec>,
        interval: [f64; 2],
        #[serde(default)]
        tol: Option<f64>,
    },
    /// `{y >= f(x)}` over the interval.
    Epigraph {
        f: FnSpec,
        interval: [f64; 2],
        #[serde(default)]
        tol: Option<f64>,
    },
    /// `{y <= f(x)}` over the interval.
    Hypograph {
        f: FnSpec,
        interval: [f64; 2],
        #[serde(default)]
        tol: Option<f64>,
    },
    HalfPlane { normal: Point, offset: f64 },
    Disk { center: Point, radius: f64 },
    DiskExterior { center: Point, radius: f64 },
    Circle { center: Point, radius: f64 },
    Tube { base: Box<PrimitiveSpec>, r: f64 },
}

fn unit(v: Point, what: &str) -> Result<Point, SetError> {
    v.normalized().filter(|u| u.is_finite()).ok_or_else(|| SetError::Malformed(format!("{what} must be nonzero")))
}

fn positive(r: f64, what: &str) -> Result<f64, SetError> {
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(SetError::Malformed(format!("{what} must be positive, got {r}")))
    }
}

impl PrimitiveSpec {
    /// Sets the refinement tolerance of graph-based primitives that have none.
    pub fn set_default_tol(&mut self, t: f64) {
        match self {
            PrimitiveSpec::Graph { tol, .. }
            | PrimitiveSpec::Region { tol, .. }
            | PrimitiveSpec::Epigraph { tol, .. }
            | PrimitiveSpec::Hypograph { tol, .. } => {
                tol.get_or_insert(t);
            }
            PrimitiveSpec::Tube { base, .. } => base.set_default_tol(t),
            _ => {}
        }
    }

    pub fn build(&self) -> Result<Primitive, SetError> {
        Ok(match self {
            PrimitiveSpec::Point { at } => Primitive::Point(*at),
            PrimitiveSpec::Segment { a, b } => Primitive::Segment(*a, *b),
            PrimitiveSpec::Ray { origin, direction } => Primitive::Ray { origin: *origin, dir: unit(*direction, "ray direction")? },
            PrimitiveSpec::Line { a, b } => Primitive::Line { a: *a, dir: unit(*b - *a, "line direction")? },
            PrimitiveSpec::Polyline { vertices } => {
                if vertices.is_empty() {
                    return Err(SetError::Malformed("empty polyline".into()));
                }
                Primitive::Polyline(Arc::new(ChunkedPolyline::new(vertices.clone())))
            }
            PrimitiveSpec::Graph { f, interval, isometry, tol } => {
                let f = f.build()?;
                let [a, b] = *interval;
                let (lo, hi) = f.domain();
                if !(a < b) || a < lo || b > hi || !a.is_finite() || !b.is_finite() {
                    return Err(SetError::Malformed(format!("graph interval [{a}, {b}] not compact in the domain")));
                }
                Primitive::Graph(GraphCurve::new(f, *interval, *isometry, tol.unwrap_or(GRAPH_TOL)))
            }
            PrimitiveSpec::Region { lower, upper, interval, tol } => Primitive::Region(Arc::new(RegionSet::new(
                lower.as_ref().map(FnSpec::build).transpose()?,
                upper.as_ref().map(FnSpec::build).transpose()?,
                *interval,
                tol.unwrap_or(GRAPH_TOL),
            )?)),
            PrimitiveSpec::Epigraph { f, interval, tol } => {
                Primitive::Region(Arc::new(RegionSet::new(Some(f.build()?), None, *interval, tol.unwrap_or(GRAPH_TOL))?))
            }
            PrimitiveSpec::Hypograph { f, interval, tol } => {
                Primitive::Region(Arc::new(RegionSet::new(None, Some(f.build()?), *interval, tol.unwrap_or(GRAPH_TOL))?))
            }
            PrimitiveSpec::HalfPlane { normal, offset } => {
                let len = normal.norm();
                let n = unit(*normal, "half-plane normal")?;
                Primitive::HalfPlane { normal: n, offset: offset / len }
            }
            PrimitiveSpec::Disk { center, radius } => Primitive::Disk { center: *center, radius: positive(*radius, "disk radius")? },
            PrimitiveSpec::DiskExterior { center, radius } => {
                Primitive::DiskExterior { center: *center, radius: positive(*radius, "disk radius")? }
            }
            PrimitiveSpec::Circle { center, radius } => Primitive::Circle { center: *center, radius: positive(*radius, "circle radius")? },
            PrimitiveSpec::Tube { base, r } => base.build()?.tube(*r)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn analytic_distances() {
        let d = Primitive::Disk { center: Point::ORIGIN, radius: 1.0 };
        assert_eq!(d.distance(Point::new(2.0, 0.0)).distance, 1.0);
        assert_eq!(d.distance(Point::new(0.5, 0.0)).distance, 0.0);
        let h = PrimitiveSpec::HalfPlane { normal: Point::new(0.0, 2.0), offset: -2.0 }.build().unwrap();
        assert_eq!(h.distance(Point::new(0.0, 0.5)).distance, 1.5);
        let e = Primitive::DiskExterior { center: Point::ORIGIN, radius: 1.0 };
        assert_eq!(e.distance(Point::new(0.25, 0.0)).distance, 0.75);
    }

    #[test]
    fn segment_tube_is_stadium() {
        let s = Primitive::Segment(Point::new(-1.0, 0.0), Point::new(1.0, 0.0));
        let t = s.tube(0.5).unwrap();
        for (z, d) in [(Point::new(0.0, 0.0), 0.5), (Point::new(0.0, 2.0), 1.5), (Point::new(3.0, 0.0), 1.5), (Point::new(1.0, 0.25), 0.25)]
        {
            assert!((t.distance(z).distance - d).abs() < 1e-15, "{z:?}");
        }
    }

    #[test]
    fn hypograph_tube_of_concave_function() {
        let f = FnSpec::Quadratic { a: -1.0, b: 0.0, c: 0.0 };
        let reg = PrimitiveSpec::Hypograph { f, interval: [-1.0, 1.0], tol: None }.build().unwrap();
        let t = reg.tube(0.1).unwrap();
        // above the vertex the parallel curve passes through (0, 0.1)
        assert!((t.distance(Point::new(0.0, -0.5)).distance - 0.6).abs() < 1e-8);
        // kinked concave function: arc at the kink
        let f = FnSpec::Abs { a: -1.0, center: 0.0 };
        let reg = PrimitiveSpec::Hypograph { f, interval: [-1.0, 1.0], tol: None }.build().unwrap();
        let t = reg.tube(0.1).unwrap();
        assert!((t.distance(Point::new(0.0, -0.5)).distance - (0.5 * FRAC_1_SQRT_2 + 0.1)).abs() < 1e-12);
        assert!((t.distance(Point::new(0.0, 0.3)).distance - 0.2).abs() < 1e-12);
        // convex kink: no positive reach
        let f = FnSpec::Abs { a: 1.0, center: 0.0 };
        let reg = PrimitiveSpec::Hypograph { f, interval: [-1.0, 1.0], tol: None }.build().unwrap();
        assert!(matches!(reg.tube(0.1), Err(SetError::ReachViolated(_))));
    }

    #[test]
    fn epigraph_region_distance() {
        let f = FnSpec::Abs { a: 1.0, center: 0.0 };
        let reg = PrimitiveSpec::Epigraph { f, interval: [-1.0, 1.0], tol: None }.build().unwrap();
        assert_eq!(reg.distance(Point::new(0.0, 0.5)).distance, 0.0);
        assert_eq!(reg.distance(Point::new(0.0, -1.0)).distance, 1.0);
        assert!((reg.distance(Point::new(2.0, 0.0)).distance - std::f64::consts::SQRT_2).abs() < 1e-15);
        // left of the interval, next to the vertical side ray
        assert!((reg.distance(Point::new(-2.0, 3.0)).distance - 1.0).abs() < 1e-15);
    }
}
