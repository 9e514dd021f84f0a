//! Named verification suites.
//!
//! Every suite is a pure function of its seed. A check passes when its
//! expectation is met; for sets whose distance function is known not to be
//! DC the detector is expected to fire, so there `pass` means "flagged".

use crate::compensator::{build_certificate, kofu_for_angle, DCCertificate};
use crate::dc::{
    interpolate_convex, lipschitz_const, slopes_and_turning, ConvexPL, DCFunction1D, FnSpec,
};
use crate::geom::{vertex_angles, Point, Polyline};
use crate::sets::{
    asplund_support, boundary_identity_check, boundary_triple, gallery, tube_identity_check, GalleryParams,
    Primitive, PrimitiveSpec, Scene,
};
use crate::verify::{
    check_comix, check_concave, check_lipschitz, check_uniform_convergence, detect_non_dc_on_line, CheckReport,
    DetectorConfig, Region, Sampler, DERIV_TOL, IDENTITY_TOL, LIPSCHITZ_SLACK,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};
use thiserror::Error;

pub const SUITES: &[&str] = &["kofu", "certificate", "compensation", "convergence", "sets", "counterexamples", "bounds"];

pub const KOFU_ANGLES: [f64; 4] = [FRAC_PI_6, FRAC_PI_3, FRAC_PI_2, 2.8];
pub const CERT_FUNCTIONS: [&str; 4] = ["zero", "abs", "quadratic", "quadratic-minus-abs"];
pub const CERT_RESOLUTIONS: [usize; 3] = [8, 64, 256];
pub const CONVERGENCE_SEQUENCE: [usize; 4] = [8, 16, 32, 64];
pub const CONVERGENCE_REFERENCE: usize = 1024;
/// Minimal error decrease per doubling of `n` for `f = x²`.
pub const CONVERGENCE_RATIO: f64 = 3.0;
pub const EXACT_TOL: f64 = 1e-12;
pub const SEMICONCAVE_TUBE_TOL: f64 = 1e-6;

const SAMPLES: usize = 10_000;
const COVER_SAMPLES: usize = 1_000;
const GRAPH_POINTS: usize = 100;
const DIRECTIONS: usize = 16;
const RANDOM_PAIRS: usize = 100;
const BOUNDS_N: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BatteryError {
    #[error("unknown suite {0:?}; expected one of {SUITES:?} or \"all\"")]
    UnknownSuite(String),
    #[error("{suite}: {message}")]
    Setup { suite: String, message: String },
}

fn setup(suite: &str, e: impl std::fmt::Display) -> BatteryError {
    BatteryError::Setup { suite: suite.to_string(), message: e.to_string() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, checks: Vec<CheckReport>) -> Self {
        SuiteReport { suite: suite.to_string(), seed, pass: checks.iter().all(|c| c.pass), checks }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

/// Runs one suite, or every suite for `"all"`.
pub fn run(name: &str, seed: u64) -> Result<BatteryReport, BatteryError> {
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(BatteryError::UnknownSuite(name.to_string()));
    };
    let suites = names.into_iter().map(|n| run_suite(n, seed)).collect::<Result<Vec<_>, _>>()?;
    Ok(BatteryReport { seed, pass: suites.iter().all(|s| s.pass), suites })
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport, BatteryError> {
    let checks = match name {
        "kofu" => kofu_suite(seed)?,
        "certificate" => certificate_suite(seed)?,
        "compensation" => compensation_suite(seed)?,
        "convergence" => convergence_suite(seed)?,
        "sets" => sets_suite(seed)?,
        "counterexamples" => counterexample_suite(seed)?,
        "bounds" => bounds_suite(seed)?,
        other => return Err(BatteryError::UnknownSuite(other.to_string())),
    };
    Ok(SuiteReport::new(name, seed, checks))
}

/// Independent sub-seed for check `k` of a suite.
fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k.wrapping_mul(0xbf58_476d_1ce4_e5b9))
}

fn builtin(suite: &str, name: &str) -> Result<DCFunction1D, BatteryError> {
    FnSpec::builtin(name)
        .ok_or_else(|| setup(suite, format!("no builtin {name}")))?
        .build()
        .map_err(|e| setup(suite, e))
}

fn certificate(suite: &str, f: &str, n: usize) -> Result<DCCertificate, BatteryError> {
    build_certificate(&builtin(suite, f)?, n).map_err(|e| setup(suite, e))
}

fn worst_of(values: impl IntoIterator<Item = (f64, Point)>) -> (f64, Vec<Point>) {
    let mut worst = (0.0, Vec::new());
    for (r, z) in values {
        if r.is_nan() || r > worst.0 || worst.1.is_empty() {
            worst = (r, vec![z]);
            if r.is_nan() {
                break;
            }
        }
    }
    worst
}

pub fn kofu_suite(seed: u64) -> Result<Vec<CheckReport>, BatteryError> {
    let mut out = Vec::new();
    for (k, &alpha) in KOFU_ANGLES.iter().enumerate() {
        let s0 = sub_seed(seed, k as u64);
        let mut s = Sampler::new(s0);
        let vertex = Point::new(s.uniform_in(-1.0, 1.0), s.uniform_in(-1.0, 1.0));
        let bisector = s.unit_vector();
        let pair = kofu_for_angle(vertex, bisector, alpha).map_err(|e| setup("kofu", e))?;
        let wedge = *pair.wedge();
        let beta = wedge.half_angle();
        let tag = format!("kofu/alpha={alpha:.6}");

        let wedge_pts: Vec<Point> = (0..SAMPLES)
            .map(|_| {
                let [u, v] = s.next_unit();
                let r = 2.0 * u.sqrt();
                let t = beta * (2.0 * v - 1.0);
                wedge.from_frame(Point::new(r * t.cos(), r * t.sin()))
            })
            .collect();
        let (res, wit) = worst_of(wedge_pts.iter().map(|&z| ((z.dist(vertex) + pair.psi(z) - pair.affine(z)).abs(), z)));
        out.push(CheckReport::new(format!("{tag}/identity"), s0, SAMPLES, IDENTITY_TOL, res).with_witness(wit));

        let region = Region::disk(vertex, 2.0);
        let psi = |z: Point| pair.psi(z);
        let focus = [vertex, wedge.from_frame(Point::new(beta.cos(), beta.sin())), wedge.from_frame(Point::new(beta.cos(), -beta.sin()))];
        out.push(check_concave(&format!("{tag}/concave"), &psi, &region, SAMPLES, IDENTITY_TOL, s0 ^ 1, &focus));
        let bound = std::f64::consts::SQRT_2 * (0.5 * alpha).tan();
        out.push(check_lipschitz(&format!("{tag}/lipschitz"), &psi, &region, bound, SAMPLES, LIPSCHITZ_SLACK, s0 ^ 2, &focus));
    }
    Ok(out)
}

/// Graph vertices of the certificate lying in `U`.
fn focus_points(c: &DCCertificate) -> Vec<Point> {
    let mut pts: Vec<Point> = c.graph().vertices().iter().copied().filter(|&z| c.in_closed_u(z)).collect();
    for x in [-0.05, 0.0, 0.05] {
        pts.push(c.graph_point(x));
    }
    pts.retain(|&z| c.in_closed_u(z));
    pts
}

pub fn certificate_suite(seed: u64) -> Result<Vec<CheckReport>, BatteryError> {
    let mut out = Vec::new();
    let mut k = 0;
    for f in CERT_FUNCTIONS {
        for n in CERT_RESOLUTIONS {
            k += 1;
            let s0 = sub_seed(seed, k);
            let c = certificate("certificate", f, n)?;
            let tag = format!("certificate/{f}/n={n}");
            let region = Region::disk(c.center(), c.radius());
            let focus = focus_points(&c);

            let c_star = |z: Point| c.c_star(z);
            out.push(check_concave(&format!("{tag}/c_star-concave"), &c_star, &region, SAMPLES, IDENTITY_TOL, s0, &focus));
            let c_n = |z: Point| c.c_n(z);
            out.push(
                check_lipschitz(&format!("{tag}/c_n-lipschitz"), &c_n, &region, c.l_star(), SAMPLES, LIPSCHITZ_SLACK, s0 ^ 1, &focus)
                    .metric("M", c.m_bound())
                    .metric("L", c.lipschitz()),
            );

            let pts = Sampler::new(s0 ^ 2).points(&region, SAMPLES);
            let (res, wit) = worst_of(pts.iter().map(|&z| {
                let (d, cn, cs) = c.parts(z);
                ((d - (cs - cn)).abs(), z)
            }));
            out.push(CheckReport::new(format!("{tag}/decomposition"), s0 ^ 2, SAMPLES, EXACT_TOL, res).with_witness(wit));

            let pts = Sampler::new(s0 ^ 3).points(&region, COVER_SAMPLES);
            let mut misses = Vec::new();
            let mut worst: f64 = 0.0;
            for &z in &pts {
                match c.check_cover(z) {
                    Ok(m) => worst = worst.max(m.mismatch),
                    Err(_) => misses.push(z),
                }
            }
            let res = if misses.is_empty() { worst } else { f64::INFINITY };
            out.push(
                CheckReport::new(format!("{tag}/cover"), s0 ^ 3, COVER_SAMPLES, crate::compensator::COVER_TOL, res)
                    .with_witness(misses.into_iter().take(4).collect())
                    .metric("cover_size", c.cover().len() as f64),
            );
        }
    }
    Ok(out)
}

/// Graph points over `[-0.07, 0.07]`: partition nodes there plus samples.
fn graph_points(c: &DCCertificate, s: &mut Sampler) -> Vec<Point> {
    let mut pts: Vec<Point> =
        c.graph().vertices().iter().copied().filter(|z| z.x.abs() <= 0.07 && c.in_closed_u(*z)).collect();
    while pts.len() < GRAPH_POINTS {
        let z = c.graph_point(s.uniform_in(-0.07, 0.07));
        if c.in_closed_u(z) {
            pts.push(z);
        }
    }
    pts
}

pub fn compensation_suite(seed: u64) -> Result<Vec<CheckReport>, BatteryError> {
    let mut out = Vec::new();
    let mut k = 0;
    let dirs: Vec<Point> = (0..DIRECTIONS)
        .map(|j| {
            let t = std::f64::consts::PI * (j as f64 + 0.5) / DIRECTIONS as f64;
            Point::new(t.cos(), t.sin())
        })
        .collect();
    for f in CERT_FUNCTIONS {
        for n in CERT_RESOLUTIONS {
            k += 1;
            let s0 = sub_seed(seed, k);
            let c = certificate("compensation", f, n)?;
            let mut s = Sampler::new(s0);
            let pts = graph_points(&c, &mut s);
            let tag = format!("compensation/{f}/n={n}");
            let mut sum_bound = Vec::new();
            let mut dominance = Vec::new();
            for &z in &pts {
                for &v in &dirs {
                    let dd = c.d_n_dir_deriv_on_graph(z, v) + c.d_n_dir_deriv_on_graph(z, -v);
                    let xd = c.xi_n_dir_deriv(z, v) + c.xi_n_dir_deriv(z, -v);
                    let pd = c.p_n_dir_deriv(z, v) + c.p_n_dir_deriv(z, -v);
                    sum_bound.push(((dd + xd).max(0.0), z));
                    dominance.push(((dd - pd).max(0.0), z));
                }
            }
            let jobs = pts.len() * dirs.len();
            let (r, w) = worst_of(sum_bound);
            out.push(CheckReport::new(format!("{tag}/sum-bound"), s0, jobs, DERIV_TOL, r).with_witness(w));
            let (r, w) = worst_of(dominance);
            out.push(CheckReport::new(format!("{tag}/dominance"), s0, jobs, DERIV_TOL, r).with_witness(w));
        }
    }

    let c = certificate("compensation", "quadratic", 64)?;
    let s0 = sub_seed(seed, 1000);
    let gamma = |z: Point| c.c_star(z);
    let cover = |k: usize, z: Point| c.cover_value(k, z);
    let region = Region::disk(c.center(), c.radius());
    let focus = focus_points(&c);
    let r = check_comix("compensation/comix/quadratic/n=64", &gamma, c.cover().len(), &cover, &region, 1000, IDENTITY_TOL, DERIV_TOL, s0, &focus)
        .map_err(|e| setup("compensation", e))?;
    let held = r.all_pass();
    out.extend([r.cover, r.onesided, r.concave]);
    out.push(CheckReport::new("compensation/comix/quadratic/n=64/status", s0, 1, 0.0, if held { 0.0 } else { 1.0 }));
    Ok(out)
}

pub fn convergence_suite(seed: u64) -> Result<Vec<CheckReport>, BatteryError> {
    let reference = certificate("convergence", "quadratic", CONVERGENCE_REFERENCE)?;
    let certs = CONVERGENCE_SEQUENCE
        .iter()
        .map(|&n| certificate("convergence", "quadratic", n))
        .collect::<Result<Vec<_>, _>>()?;
    let grid: Vec<Point> = reference.grid_dump(101).into_iter().map(|r| r.z).collect();
    let exact = |z: Point| reference.d_n(z);
    let fields: Vec<Box<dyn Fn(Point) -> f64 + Sync + '_>> =
        certs.iter().map(|c| Box::new(move |z: Point| c.d_n(z)) as Box<dyn Fn(Point) -> f64 + Sync>).collect();
    let seq: Vec<(usize, &(dyn Fn(Point) -> f64 + Sync))> =
        CONVERGENCE_SEQUENCE.iter().copied().zip(fields.iter().map(|b| b.as_ref())).collect();
    let mut mono = check_uniform_convergence("convergence/quadratic/decreasing", &exact, &seq, &grid, 0.0);
    mono.seed = seed;
    let ratio = mono.metrics["min_decrease_ratio"];
    let mut rate = CheckReport::new("convergence/quadratic/ratio", seed, grid.len(), 0.0, (CONVERGENCE_RATIO - ratio).max(0.0))
        .metric("min_decrease_ratio", ratio)
        .metric("required_ratio", CONVERGENCE_RATIO);
    for (key, v) in mono.metrics.iter().filter(|(k, _)| k.starts_with("e_")) {
        rate = rate.metric(key.clone(), *v);
    }
    Ok(vec![mono, rate])
}

fn region_prim(spec: PrimitiveSpec) -> Result<Primitive, BatteryError> {
    spec.build().map_err(|e| setup("sets", e))
}

pub fn sets_suite(seed: u64) -> Result<Vec<CheckReport>, BatteryError> {
    let mut out = Vec::new();
    let box_region = Region::rect(-2.5, 2.5, -2.5, 2.5);
    let abs = FnSpec::builtin("abs").expect("builtin abs");
    let epi_abs = region_prim(PrimitiveSpec::Epigraph { f: abs.clone(), interval: [-2.0, 2.0], tol: None })?;

    let s0 = sub_seed(seed, 1);
    let a = Scene::of(
        "A",
        vec![
            Primitive::Point(Point::new(1.0, 1.0)),
            Primitive::Segment(Point::new(-1.0, -1.0), Point::new(0.5, -1.5)),
            Primitive::Disk { center: Point::new(-1.5, 1.0), radius: 0.4 },
        ],
    );
    let b = Scene::of(
        "B",
        vec![
            Primitive::HalfPlane { normal: Point::new(1.0, 0.0), offset: -2.0 },
            Primitive::Circle { center: Point::new(1.0, -1.0), radius: 0.5 },
            epi_abs.clone(),
        ],
    );
    let u = a.union(&b);
    let pts = Sampler::new(s0).points(&box_region, SAMPLES);
    let each = |z: Point| a.items.iter().chain(&b.items).map(|i| i.primitive.distance(z).distance).fold(f64::INFINITY, f64::min);
    let (r, w) = worst_of(pts.iter().map(|&z| ((u.dist(z) - each(z)).abs(), z)));
    out.push(CheckReport::new("sets/union-min-rule", s0, SAMPLES, EXACT_TOL, r).with_witness(w));

    let triples = [
        ("half-plane", Primitive::HalfPlane { normal: Point::new(0.6, 0.8), offset: 0.3 }),
        ("disk", Primitive::Disk { center: Point::new(0.2, -0.1), radius: 1.0 }),
        ("epigraph-abs", epi_abs),
    ];
    for (k, (name, p)) in triples.into_iter().enumerate() {
        let s0 = sub_seed(seed, 10 + k as u64);
        let (bd, comp) = boundary_triple(&p).ok_or_else(|| setup("sets", format!("{name} has no boundary triple")))?;
        let m = Scene::of(name, vec![p]);
        let pts = Sampler::new(s0).points(&Region::rect(-1.5, 1.5, -1.5, 1.5), SAMPLES);
        let mut r = boundary_identity_check(&format!("sets/boundary/{name}"), &m, &bd, &comp, &pts, IDENTITY_TOL)
            .map_err(|e| setup("sets", e))?;
        r.seed = s0;
        out.push(r);
    }

    let quad = |a: f64| FnSpec::Quadratic { a, b: 0.0, c: 0.0 };
    let tubes: Vec<(&str, Scene, f64, f64, Region)> = vec![
        (
            "disk",
            Scene::of("disk", vec![Primitive::Disk { center: Point::ORIGIN, radius: 1.0 }]),
            0.3,
            EXACT_TOL,
            Region::disk(Point::ORIGIN, 1.0),
        ),
        (
            "half-plane",
            Scene::of("half-plane", vec![Primitive::HalfPlane { normal: Point::new(0.0, 1.0), offset: 0.0 }]),
            0.5,
            EXACT_TOL,
            Region::rect(-2.0, 2.0, -3.0, 0.0),
        ),
        (
            "semiconcave-hypograph",
            gallery("semiconcave-graph", &GalleryParams::default()).map_err(|e| setup("sets", e))?.scene,
            0.1,
            SEMICONCAVE_TUBE_TOL,
            Region::rect(-0.8, 0.8, -1.5, 0.0),
        ),
        (
            "semiconcave-epigraph",
            Scene::new(
                "epigraph",
                vec![crate::sets::Item::new(region_prim(PrimitiveSpec::Epigraph { f: quad(-1.0), interval: [-1.0, 1.0], tol: None })?)
                    .with_reach(0.5)],
            ),
            0.1,
            SEMICONCAVE_TUBE_TOL,
            Region::rect(-0.8, 0.8, -1.0, 1.5),
        ),
    ];
    for (k, (name, scene, r, tol, region)) in tubes.into_iter().enumerate() {
        let s0 = sub_seed(seed, 20 + k as u64);
        let comp = scene.items[0]
            .primitive
            .complement_closure()
            .ok_or_else(|| setup("sets", format!("{name} has no complement")))?;
        let comp = Scene::of("complement", comp);
        let pts = Sampler::new(s0).points(&region, SAMPLES);
        let mut rep = tube_identity_check(&format!("sets/tube/{name}"), &scene, &comp, r, &pts, tol)
            .map_err(|e| setup("sets", e))?;
        rep.seed = s0;
        out.push(rep.metric("r", r));
    }

    let s0 = sub_seed(seed, 30);
    let poly = vec![
        Point::new(-1.0, 0.0),
        Point::new(-0.3, 0.8),
        Point::new(0.4, -0.2),
        Point::new(1.2, 0.5),
        Point::new(0.9, 1.3),
    ];
    let f = Scene::of(
        "polyline-scene",
        vec![
            Primitive::Polyline(std::sync::Arc::new(crate::sets::ChunkedPolyline::new(poly))),
            Primitive::Point(Point::new(-1.5, -1.0)),
            Primitive::Segment(Point::new(0.0, -1.5), Point::new(1.5, -1.0)),
        ],
    );
    let pts = Sampler::new(s0).points(&box_region, SAMPLES);
    let mut res = Vec::with_capacity(pts.len());
    for &z in &pts {
        let (_, r) = asplund_support(&f, z).map_err(|e| setup("sets", e))?;
        res.push((r, z));
    }
    let (r, w) = worst_of(res);
    out.push(CheckReport::new("sets/asplund/polyline-scene", s0, SAMPLES, IDENTITY_TOL, r).with_witness(w));
    Ok(out)
}

pub fn counterexample_suite(seed: u64) -> Result<Vec<CheckReport>, BatteryError> {
    let mut out = Vec::new();
    let cfg = DetectorConfig::default();
    let params = GalleryParams::default();
    for name in crate::sets::gallery_names() {
        let g = gallery(name, &params).map_err(|e| setup("counterexamples", e))?;
        let scene = &g.scene;
        let section = |x: f64| scene.dist(Point::new(x, 0.0));
        let mut r = detect_non_dc_on_line(&format!("counterexamples/{name}/detector"), &section, g.accumulation, &g.sequence, &cfg);
        r.seed = seed;
        let flagged = r.metrics["flagged"] > 0.0;
        if g.expect_dc {
            r = r.metric("expect_flag", 0.0);
        } else {
            r.pass = flagged && r.metrics["sustained_points"] >= cfg.sustained as f64;
            r = r.metric("expect_flag", 1.0);
        }
        out.push(r);

        if let Some(line) = &g.line_set {
            let window = [g.accumulation - 1.0, g.accumulation + 1.0];
            let lf = line.components_locally_finite(window);
            let mut r = CheckReport::new(
                format!("counterexamples/{name}/locally-finite"),
                seed,
                line.intervals().len(),
                0.0,
                if lf.locally_finite == g.expect_dc { 0.0 } else { 1.0 },
            )
            .metric("locally_finite", if lf.locally_finite { 1.0 } else { 0.0 });
            if let Some(x) = lf.witness {
                r = r.with_witness(vec![Point::new(x, 0.0)]);
            }
            out.push(r);
        }
    }
    Ok(out)
}

/// Random convex piecewise-linear function on `[-1, 1]` with slopes in
/// `[-s, s]`.
fn random_convex_pl(s: &mut Sampler, max_slope: f64) -> Result<ConvexPL, BatteryError> {
    let k = 1 + (s.uniform() * 9.0) as usize;
    let mut inner: Vec<f64> = (0..k).map(|_| s.uniform_in(-0.99, 0.99)).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    let mut xs = vec![-1.0];
    xs.extend(inner);
    xs.push(1.0);
    let mut slopes: Vec<f64> = (0..xs.len() - 1).map(|_| s.uniform_in(-max_slope, max_slope)).collect();
    slopes.sort_by(f64::total_cmp);
    let mut ys = vec![s.uniform_in(-1.0, 1.0)];
    for (i, m) in slopes.iter().enumerate() {
        let y = ys[i] + m * (xs[i + 1] - xs[i]);
        ys.push(y);
    }
    ConvexPL::new(xs, ys).map_err(|e| setup("bounds", e))
}

pub fn bounds_suite(seed: u64) -> Result<Vec<CheckReport>, BatteryError> {
    let s0 = sub_seed(seed, 1);
    let mut s = Sampler::new(s0);
    let mut turning = Vec::new();
    let mut angles = Vec::new();
    let mut violations = 0usize;
    let mut max_ratio: f64 = 0.0;
    for _ in 0..RANDOM_PAIRS {
        let max_slope = s.uniform_in(0.1, 5.0);
        let g = random_convex_pl(&mut s, max_slope)?;
        let h = random_convex_pl(&mut s, max_slope)?;
        let l = lipschitz_const(&g, &h, -1.0, 1.0).map_err(|e| setup("bounds", e))?;
        let gn = interpolate_convex(&g, BOUNDS_N, -1.0, 1.0).map_err(|e| setup("bounds", e))?;
        let hn = interpolate_convex(&h, BOUNDS_N, -1.0, 1.0).map_err(|e| setup("bounds", e))?;
        let fnl = gn.sub(&hn).map_err(|e| setup("bounds", e))?;
        let t = slopes_and_turning(&fnl).total;
        let graph = Polyline::from_graph(fnl.breakpoints(), fnl.values()).map_err(|e| setup("bounds", e))?;
        let a = vertex_angles(&graph).map_err(|e| setup("bounds", e))?.total;
        let marker = Point::new(l, t);
        if t > 4.0 * l || a > 4.0 * l {
            violations += 1;
        }
        max_ratio = max_ratio.max(t / (4.0 * l));
        turning.push(((t - 4.0 * l).max(0.0), marker));
        angles.push(((a - 4.0 * l).max(0.0), Point::new(l, a)));
    }
    let (rt, wt) = worst_of(turning);
    let (ra, wa) = worst_of(angles);
    Ok(vec![
        CheckReport::new("bounds/slope-turning", s0, RANDOM_PAIRS, 0.0, rt)
            .with_witness(wt)
            .metric("max_turning_over_4L", max_ratio),
        CheckReport::new("bounds/angle-turning", s0, RANDOM_PAIRS, 0.0, ra).with_witness(wa),
        CheckReport::new("bounds/violations", s0, RANDOM_PAIRS, 0.0, violations as f64),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run("nope", 1), Err(BatteryError::UnknownSuite(_))));
    }

    #[test]
    fn bounds_pass_and_are_seeded() {
        let a = run_suite("bounds", 3).unwrap();
        assert!(a.pass, "{a:?}");
        assert_eq!(a, run_suite("bounds", 3).unwrap());
    }
}
