use super::primitive::Primitive;
use super::scene::Scene;
use super::SetError;
use crate::geom::Point;
use crate::verify::CheckReport;
use rayon::prelude::*;

/// `(∂M, cl(ℝ² ∖ M))` for a single analytic primitive.
pub fn boundary_triple(p: &Primitive) -> Option<(Scene, Scene)> {
    Some((Scene::of("boundary", p.boundary()?), Scene::of("complement", p.complement_closure()?)))
}

fn worst(residuals: &[(f64, Point)]) -> (f64, Option<Point>) {
    let mut best = (0.0, None);
    for &(r, z) in residuals {
        if r.is_nan() || r > best.0 {
            best = (r, Some(z));
            if r.is_nan() {
                break;
            }
        }
    }
    best
}

/// Residual of `d_∂M = max(d_M, d_C)` over `points`, with `C` the closure
/// of the complement.
pub fn boundary_identity_check(
    name: &str,
    m: &Scene,
    boundary: &Scene,
    complement: &Scene,
    points: &[Point],
    tol: f64,
) -> Result<CheckReport, SetError> {
    if boundary.is_empty() {
        return Err(SetError::Inapplicable("empty boundary".into()));
    }
    if m.is_empty() || complement.is_empty() {
        return Err(SetError::EmptyScene);
    }
    let res: Vec<(f64, Point)> = points
        .par_iter()
        .map(|&z| ((boundary.dist(z) - m.dist(z).max(complement.dist(z))).abs(), z))
        .collect();
    let (r, w) = worst(&res);
    Ok(CheckReport::new(name, 0, points.len(), tol, r).with_witness(w.into_iter().collect()))
}

/// Residual of `dist(x, B) + r = dist(x, A_r)` over the interior points of
/// `A`, where `B` is the closure of the complement and `A_r` the level set
/// `{d_A = r}`. `A` must be a single primitive with reach `> r`.
pub fn tube_identity_check(
    name: &str,
    a: &Scene,
    complement: &Scene,
    r: f64,
    points: &[Point],
    tol: f64,
) -> Result<CheckReport, SetError> {
    let [item] = a.items.as_slice() else {
        return Err(SetError::Unsupported(format!("tube identity needs one primitive, scene has {}", a.items.len())));
    };
    let reach = item.reach().ok_or_else(|| SetError::ReachViolated("no declared reach".into()))?;
    if !(r > 0.0 && r < reach) {
        return Err(SetError::ReachViolated(format!("r = {r} is not in (0, {reach})")));
    }
    if complement.is_empty() {
        return Err(SetError::EmptyScene);
    }
    let tube = item.primitive.tube(r)?;
    let res: Vec<Option<(f64, Point)>> = points
        .par_iter()
        .map(|&z| {
            let db = complement.dist(z);
            (db > 0.0).then(|| ((db + r - tube.distance(z).distance).abs(), z))
        })
        .collect();
    let interior: Vec<(f64, Point)> = res.into_iter().flatten().collect();
    let (worst_r, w) = worst(&interior);
    Ok(CheckReport::new(name, 0, interior.len(), tol, worst_r)
        .with_witness(w.into_iter().collect())
        .metric("skipped_points", (points.len() - interior.len()) as f64))
}

fn segment_support(z: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let l2 = d.norm2();
    let t = if l2 > 0.0 { ((z - a).dot(d) / l2).clamp(0.0, 1.0) } else { 0.0 };
    let p = a + d * t;
    2.0 * z.dot(p) - p.norm2()
}

/// `c_F(z) = sup_{a ∈ F} (2⟨z, a⟩ - |a|²)` for a scene of points, segments,
/// polylines and graphs, and the residual `|d_F(z)² - (|z|² - c_F(z))|`.
pub fn asplund_support(s: &Scene, z: Point) -> Result<(f64, f64), SetError> {
    if s.is_empty() {
        return Err(SetError::EmptyScene);
    }
    let mut c = f64::NEG_INFINITY;
    for item in &s.items {
        let v = match &item.primitive {
            Primitive::Point(a) => 2.0 * z.dot(*a) - a.norm2(),
            Primitive::Segment(a, b) => segment_support(z, *a, *b),
            Primitive::Polyline(p) => polyline_support(z, p.points()),
            Primitive::Graph(g) => {
                let pts: Vec<Point> = g.nodes().iter().map(|&q| g.isometry.apply(q)).collect();
                polyline_support(z, &pts)
            }
            other => return Err(SetError::Unsupported(format!("support function of a {}", other.kind()))),
        };
        c = c.max(v);
    }
    let d = s.dist(z);
    Ok((c, (d * d - (z.norm2() - c)).abs()))
}

fn polyline_support(z: Point, pts: &[Point]) -> f64 {
    if pts.len() == 1 {
        return 2.0 * z.dot(pts[0]) - pts[0].norm2();
    }
    pts.windows(2).map(|w| segment_support(z, w[0], w[1])).fold(f64::NEG_INFINITY, f64::max)
}
