//! Finite-resolution certificates on the disk `U((0, f(0)), 1/10)`.
//!
//! With `D_n` the equidistant partition of `[-1, 1]`, `d_n` is the distance
//! to the graph polyline of `f_n = g_n - h_n`, `η_n` sums the wedge
//! compensators at the turning vertices, and `ξ_n` compensates the kink of
//! `d_n` along the graph. Then `c*_n = d_n + η_n + ξ_n` is concave on `U`.

use super::{kofu, CertError, KofuPair};
use crate::dc::{interpolate_convex, lipschitz_const, ConvexPL, DCFunction1D, DcError, PiecewiseLinear1D, Side};
use crate::geom::{
    graph_vertex_wedges, nearest_segments, polyline_distance, segment_parameter, signed_line_distance, Point,
    Polyline,
};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const MIN_RESOLUTION: usize = 6;
pub const CERT_RADIUS: f64 = 0.1;
/// Agreement required between `c*_n` and the selected cover function.
pub const COVER_TOL: f64 = 1e-9;
const TIE_TOL: f64 = 1e-12;

/// Directional derivative of a piecewise-linear function at `x` along `t`.
fn pl_dir(p: &PiecewiseLinear1D, x: f64, t: f64) -> f64 {
    if t > 0.0 {
        t * p.derivative_extended(x, Side::Plus)
    } else if t < 0.0 {
        t * p.derivative_extended(x, Side::Minus)
    } else {
        0.0
    }
}

/// `η_n = Σ ψ_i` over the vertices with nonzero turning angle.
#[derive(Debug, Clone)]
pub struct Eta {
    /// `pairs[i - 1]` belongs to vertex `i`; `None` where `α_i = 0`.
    pairs: Vec<Option<KofuPair>>,
}

impl Eta {
    pub fn from_graph(graph: &Polyline) -> Result<Self, CertError> {
        let pairs = graph_vertex_wedges(graph)?.into_iter().map(|w| w.map(kofu)).collect();
        Ok(Eta { pairs })
    }

    pub fn pair(&self, vertex: usize) -> Option<&KofuPair> {
        self.pairs.get(vertex.wrapping_sub(1)).and_then(Option::as_ref)
    }

    pub fn pairs(&self) -> &[Option<KofuPair>] {
        &self.pairs
    }

    pub fn eval(&self, z: Point) -> f64 {
        self.pairs.iter().flatten().map(|k| k.psi(z)).sum()
    }

    /// `Σ_{j ≠ vertex} ψ_j(z)`.
    pub fn eval_without(&self, z: Point, vertex: usize) -> f64 {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(j, _)| j + 1 != vertex)
            .filter_map(|(_, k)| k.as_ref())
            .map(|k| k.psi(z))
            .sum()
    }

    /// `Σ √2 tan(α_i / 2)`, a Lipschitz constant of `η_n`.
    pub fn lipschitz_budget(&self) -> f64 {
        self.pairs.iter().flatten().map(KofuPair::lipschitz).sum()
    }
}

/// `ξ_n(x, y) = -max(2 g_n(x) - y, 2 h_n(x) + y)` and `p_n = |f_n(x) - y|`.
#[derive(Debug, Clone)]
pub struct Xi {
    g: ConvexPL,
    h: ConvexPL,
    f: PiecewiseLinear1D,
}

impl Xi {
    pub fn new(g: ConvexPL, h: ConvexPL) -> Result<Self, CertError> {
        if g.breakpoints() != h.breakpoints() {
            return Err(DcError::Malformed("g_n and h_n must share breakpoints".into()).into());
        }
        let f = g.as_pl().sub(h.as_pl())?;
        Ok(Xi { g, h, f })
    }

    pub fn g(&self) -> &ConvexPL {
        &self.g
    }

    pub fn h(&self) -> &ConvexPL {
        &self.h
    }

    pub fn f(&self) -> &PiecewiseLinear1D {
        &self.f
    }

    fn args(&self, z: Point) -> (f64, f64) {
        (2.0 * self.g.eval_extended(z.x) - z.y, 2.0 * self.h.eval_extended(z.x) + z.y)
    }

    pub fn eval(&self, z: Point) -> f64 {
        let (a1, a2) = self.args(z);
        -a1.max(a2)
    }

    pub fn p(&self, z: Point) -> f64 {
        (self.f.eval_extended(z.x) - z.y).abs()
    }

    /// `p_n` through the DC form `max(2g_n - y, 2h_n + y) - h_n - g_n`.
    pub fn p_dc_form(&self, z: Point) -> f64 {
        let (a1, a2) = self.args(z);
        a1.max(a2) - self.h.eval_extended(z.x) - self.g.eval_extended(z.x)
    }

    pub fn dir_deriv(&self, z: Point, v: Point) -> f64 {
        let (a1, a2) = self.args(z);
        let d1 = 2.0 * pl_dir(&self.g, z.x, v.x) - v.y;
        let d2 = 2.0 * pl_dir(&self.h, z.x, v.x) + v.y;
        let tie = TIE_TOL * (1.0 + a1.abs() + a2.abs());
        if (a1 - a2).abs() <= tie {
            -d1.max(d2)
        } else if a1 > a2 {
            -d1
        } else {
            -d2
        }
    }

    pub fn p_dir_deriv(&self, z: Point, v: Point) -> f64 {
        let r = self.f.eval_extended(z.x) - z.y;
        let dr = pl_dir(&self.f, z.x, v.x) - v.y;
        let tie = TIE_TOL * (1.0 + z.y.abs());
        if r.abs() <= tie {
            dr.abs()
        } else {
            r.signum() * dr
        }
    }
}

/// One concave member of the cover family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverFn {
    /// `ν_i = A_i + Σ_{j≠i} ψ_j + ξ_n`, for a vertex with `α_i ≠ 0`.
    Nu { vertex: usize },
    /// `±(signed distance to the line through edge i) + η_n + ξ_n`.
    Mu { edge: usize, sign: i8 },
}

/// Where the first nearest point of `z` on the graph polyline lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    Vertex(usize),
    Edge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverMatch {
    pub index: usize,
    pub function: CoverFn,
    pub mismatch: f64,
    /// Whether the projection case analysis picked it directly.
    pub by_case: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertManifest {
    pub n: usize,
    #[serde(rename = "L")]
    pub lipschitz: f64,
    #[serde(rename = "M")]
    pub m_bound: f64,
    #[serde(rename = "L_star")]
    pub l_star: f64,
    pub center: Point,
    pub radius: f64,
    #[serde(rename = "fn")]
    pub function: String,
    pub eta_lipschitz_budget: f64,
    pub turning_total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub z: Point,
    pub d_n: f64,
    pub c_n: f64,
    pub c_star: f64,
}

#[derive(Debug, Clone)]
pub struct DCCertificate {
    n: usize,
    lipschitz: f64,
    m_bound: f64,
    center: Point,
    label: String,
    graph: Polyline,
    eta: Arc<Eta>,
    xi: Arc<Xi>,
    cover: Vec<CoverFn>,
}

/// `M = 2√2 L² / arctan L`.
pub fn m_bound(l: f64) -> f64 {
    2.0 * std::f64::consts::SQRT_2 * l * l / l.atan()
}

pub fn build_certificate(f: &DCFunction1D, n: usize) -> Result<DCCertificate, CertError> {
    if n < MIN_RESOLUTION {
        return Err(CertError::ResolutionTooCoarse(format!("n = {n} >= {MIN_RESOLUTION}")));
    }
    let (a, b) = f.domain();
    if a > -1.0 || b < 1.0 {
        return Err(DcError::OutOfDomain { x: if a > -1.0 { -1.0 } else { 1.0 }, a, b }.into());
    }
    let g_n = interpolate_convex(f.g.as_ref(), n, -1.0, 1.0)?;
    let h_n = interpolate_convex(f.h.as_ref(), n, -1.0, 1.0)?;
    let xi = Xi::new(g_n, h_n)?;
    let f0 = f.value(0.0);
    let fn0 = xi.f().eval_extended(0.0);
    if !((fn0 - f0).abs() < CERT_RADIUS) {
        return Err(CertError::ResolutionTooCoarse(format!(
            "|f_n(0) - f(0)| = {} < {CERT_RADIUS}",
            (fn0 - f0).abs()
        )));
    }
    let lipschitz = lipschitz_const(f.g.as_ref(), f.h.as_ref(), -1.0, 1.0)?;
    let graph = Polyline::from_graph(xi.f().breakpoints(), xi.f().values())?;
    let eta = Eta::from_graph(&graph)?;

    let mut cover = Vec::new();
    for i in 1..n {
        if eta.pair(i).is_some() {
            cover.push(CoverFn::Nu { vertex: i });
        }
    }
    for i in 1..n {
        cover.push(CoverFn::Mu { edge: i, sign: 1 });
        cover.push(CoverFn::Mu { edge: i, sign: -1 });
    }
    Ok(DCCertificate {
        n,
        lipschitz,
        m_bound: m_bound(lipschitz),
        center: Point::new(0.0, f0),
        label: f.label().to_string(),
        graph,
        eta: Arc::new(eta),
        xi: Arc::new(xi),
        cover,
    })
}

impl DCCertificate {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn m_bound(&self) -> f64 {
        self.m_bound
    }

    /// `L* = M + 2L + 1`, a Lipschitz constant of `c_n` on `U`.
    pub fn l_star(&self) -> f64 {
        self.m_bound + 2.0 * self.lipschitz + 1.0
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        CERT_RADIUS
    }

    pub fn graph(&self) -> &Polyline {
        &self.graph
    }

    pub fn eta(&self) -> &Eta {
        &self.eta
    }

    pub fn xi(&self) -> &Xi {
        &self.xi
    }

    pub fn cover(&self) -> &[CoverFn] {
        &self.cover
    }

    pub fn in_closed_u(&self, z: Point) -> bool {
        z.dist(self.center) <= CERT_RADIUS
    }

    pub fn manifest(&self) -> CertManifest {
        let turning_total = self
            .eta
            .pairs()
            .iter()
            .flatten()
            .map(|k| k.wedge().angle())
            .sum();
        CertManifest {
            n: self.n,
            lipschitz: self.lipschitz,
            m_bound: self.m_bound,
            l_star: self.l_star(),
            center: self.center,
            radius: CERT_RADIUS,
            function: self.label.clone(),
            eta_lipschitz_budget: self.eta.lipschitz_budget(),
            turning_total,
        }
    }

    pub fn d_n(&self, z: Point) -> f64 {
        polyline_distance(z, &self.graph).distance
    }

    pub fn eta_n(&self, z: Point) -> f64 {
        self.eta.eval(z)
    }

    pub fn xi_n(&self, z: Point) -> f64 {
        self.xi.eval(z)
    }

    pub fn p_n(&self, z: Point) -> f64 {
        self.xi.p(z)
    }

    pub fn c_n(&self, z: Point) -> f64 {
        self.eta_n(z) + self.xi_n(z)
    }

    pub fn c_star(&self, z: Point) -> f64 {
        self.d_n(z) + self.c_n(z)
    }

    /// `(d_n, c_n, c*_n)` sharing one evaluation of each part.
    pub fn parts(&self, z: Point) -> (f64, f64, f64) {
        let d = self.d_n(z);
        let c = self.c_n(z);
        (d, c, d + c)
    }

    /// Value of cover function `k` at `z`.
    pub fn cover_value(&self, k: usize, z: Point) -> f64 {
        match self.cover[k] {
            CoverFn::Nu { vertex } => {
                let pair = self.eta.pair(vertex).expect("cover vertex has a wedge");
                pair.affine(z) + self.eta.eval_without(z, vertex) + self.xi_n(z)
            }
            CoverFn::Mu { edge, sign } => self.mu(edge, sign, z),
        }
    }

    fn mu(&self, edge: usize, sign: i8, z: Point) -> f64 {
        let (a, b) = self.graph.segment(edge);
        let s = signed_line_distance(z, a, b).expect("graph edges are nondegenerate");
        f64::from(sign) * s + self.c_n(z)
    }

    fn cover_index(&self, f: CoverFn) -> usize {
        self.cover.iter().position(|&c| c == f).expect("member of the cover family")
    }

    /// Classifies the projection of `z` and checks that it lands in the
    /// interior edges `[z_1, z_{n-1}]`.
    pub fn projection(&self, z: Point) -> Result<Projection, CertError> {
        let (_, segs) = nearest_segments(z, &self.graph);
        let k = segs[0];
        let (a, b) = self.graph.segment(k);
        let t = segment_parameter(z, a, b);
        let p = if t == 0.0 {
            Projection::Vertex(k)
        } else if t == 1.0 {
            Projection::Vertex(k + 1)
        } else {
            Projection::Edge(k)
        };
        let ok = match p {
            Projection::Vertex(i) => (1..self.n).contains(&i),
            Projection::Edge(i) => (1..self.n - 1).contains(&i),
        };
        if ok {
            Ok(p)
        } else {
            Err(CertError::ProjectionOnBoundary { point: z, segment: k })
        }
    }

    /// Index of a cover function agreeing with `c*_n` at `z` within
    /// [`COVER_TOL`], chosen by the projection case analysis and otherwise
    /// by exhaustive search.
    pub fn check_cover(&self, z: Point) -> Result<CoverMatch, CertError> {
        if !self.in_closed_u(z) {
            return Err(CertError::OutsideNeighborhood(z));
        }
        let target = self.c_star(z);
        let edge_fn = |edge: usize| {
            let (a, b) = self.graph.segment(edge);
            let s = signed_line_distance(z, a, b).expect("graph edges are nondegenerate");
            CoverFn::Mu { edge, sign: if s >= 0.0 { 1 } else { -1 } }
        };
        let candidate = match self.projection(z)? {
            Projection::Vertex(i) if self.eta.pair(i).is_some() => CoverFn::Nu { vertex: i },
            Projection::Vertex(i) => edge_fn(i),
            Projection::Edge(i) => edge_fn(i),
        };
        let index = self.cover_index(candidate);
        let mismatch = (self.cover_value(index, z) - target).abs();
        if mismatch <= COVER_TOL {
            return Ok(CoverMatch { index, function: candidate, mismatch, by_case: true });
        }
        let mut best = mismatch;
        for k in 0..self.cover.len() {
            let m = (self.cover_value(k, z) - target).abs();
            if m <= COVER_TOL {
                return Ok(CoverMatch { index: k, function: self.cover[k], mismatch: m, by_case: false });
            }
            best = best.min(m);
        }
        Err(CertError::CoverViolation { point: z, best })
    }

    /// Exact `(d_n)'_+(z, v)` at a point of the graph polyline.
    pub fn d_n_dir_deriv_on_graph(&self, z: Point, v: Point) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.graph.segments() {
            let (a, b) = self.graph.segment(i);
            let t = segment_parameter(z, a, b);
            let p = a.lerp(b, t);
            if z.dist(p) > 1e-13 * (1.0 + z.norm()) {
                continue;
            }
            let e = (b - a).normalized().expect("graph edges are nondegenerate");
            let d = if t == 0.0 || t == 1.0 {
                // tangent cone of the segment at an endpoint is a ray
                let inward = if t == 0.0 { e } else { -e };
                if v.dot(inward) >= 0.0 {
                    v.cross(inward).abs()
                } else {
                    v.norm()
                }
            } else {
                v.cross(e).abs()
            };
            best = best.min(d);
        }
        best
    }

    pub fn p_n_dir_deriv(&self, z: Point, v: Point) -> f64 {
        self.xi.p_dir_deriv(z, v)
    }

    pub fn xi_n_dir_deriv(&self, z: Point, v: Point) -> f64 {
        self.xi.dir_deriv(z, v)
    }

    /// Point of the graph polyline above `x`.
    pub fn graph_point(&self, x: f64) -> Point {
        Point::new(x, self.xi.f().eval_extended(x))
    }

    /// Regular `res × res` grid over the bounding square of `U`, keeping
    /// points of the closed disk; row-major in `y`, then `x`.
    pub fn grid_dump(&self, res: usize) -> Vec<GridRow> {
        let res = res.max(2);
        let mut rows = Vec::new();
        for j in 0..res {
            let y = self.center.y - CERT_RADIUS + 2.0 * CERT_RADIUS * j as f64 / (res - 1) as f64;
            for i in 0..res {
                let x = self.center.x - CERT_RADIUS + 2.0 * CERT_RADIUS * i as f64 / (res - 1) as f64;
                let z = Point::new(x, y);
                if self.in_closed_u(z) {
                    let (d_n, c_n, c_star) = self.parts(z);
                    rows.push(GridRow { z, d_n, c_n, c_star });
                }
            }
        }
        rows
    }
}
