use dcdist::compensator::{build_certificate, kofu_for_angle, KofuPair};
use dcdist::dc::FnSpec;
use dcdist::geom::Point;
use dcdist::verify::Sampler;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};

const ANGLES: [f64; 4] = [FRAC_PI_6, FRAC_PI_3, FRAC_PI_2, 2.8];

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// `inf_{w ∈ V} φ(w) + K|z - w|` by nested golden-section search over the
/// polar coordinates `(θ, r)` of `w - v`, with `φ(w) = |w - v| - ⟨w - v, u⟩`.
fn extension_oracle(v: Point, u: Point, alpha: f64, z: Point) -> f64 {
    let beta = 0.5 * alpha;
    let k = 2f64.sqrt() * beta.tan();
    let r_max = 4.0 * z.dist(v) + 1.0;
    let along = |theta: f64| {
        let e = u.rotate(theta);
        golden_min(|r| r * (1.0 - theta.cos()) + k * z.dist(v + e * r), 0.0, r_max, 1e-12).1
    };
    let (_, inner) = golden_min(along, -beta, beta, 1e-11);
    // the boundary rays are candidates the search may only approach
    inner.min(along(-beta)).min(along(beta))
}

/// Upper bound for the same infimum from a dense polar grid.
fn grid_oracle(v: Point, u: Point, alpha: f64, z: Point, n: usize) -> f64 {
    let beta = 0.5 * alpha;
    let k = 2f64.sqrt() * beta.tan();
    let r_max = 2.0 * z.dist(v) + 1.0;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        let theta = -beta + 2.0 * beta * i as f64 / n as f64;
        let e = u.rotate(theta);
        for j in 0..=n {
            let r = r_max * j as f64 / n as f64;
            best = best.min(r * (1.0 - theta.cos()) + k * z.dist(v + e * r));
        }
    }
    best
}

fn pair(alpha: f64) -> (Point, Point, KofuPair) {
    let v = Point::new(0.4, -0.3);
    let u = Point::new(-0.28, 0.96);
    (v, u, kofu_for_angle(v, u, alpha).unwrap())
}

#[test]
fn closed_form_matches_golden_section() {
    let mut s = Sampler::new(11);
    for alpha in ANGLES {
        let (v, u, k) = pair(alpha);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let z = v + s.unit_vector() * (2.0 * s.uniform());
            worst = worst.max((k.extension(z) - extension_oracle(v, u, alpha, z)).abs());
        }
        assert!(worst <= 1e-9, "alpha {alpha}: {worst:e}");
    }
}

#[test]
fn closed_form_below_dense_grid() {
    let mut s = Sampler::new(12);
    for alpha in ANGLES {
        let (v, u, k) = pair(alpha);
        for _ in 0..10 {
            let z = v + s.unit_vector() * (2.0 * s.uniform());
            let n = 400;
            let g = grid_oracle(v, u, alpha, z, n);
            let e = k.extension(z);
            assert!(e <= g + 1e-12, "{e} > grid {g}");
            // a grid node lies within r_max (1 + α) / n of the minimiser
            let slack = (k.lipschitz() + 2.0) * (2.0 * z.dist(v) + 1.0) * (1.0 + alpha) / n as f64;
            assert!(g - e <= slack, "grid {g} far above {e}");
        }
    }
}

#[test]
fn lipschitz_constant_is_sqrt2_tan_half_angle() {
    for alpha in ANGLES {
        let (_, _, k) = pair(alpha);
        assert!((k.lipschitz() - 2f64.sqrt() * (0.5 * alpha).tan()).abs() < 1e-15);
    }
}

fn builtin_cert(name: &str, n: usize) -> dcdist::compensator::DCCertificate {
    build_certificate(&FnSpec::builtin(name).unwrap().build().unwrap(), n).unwrap()
}

#[test]
fn quadratic_manifest() {
    let m = builtin_cert("quadratic", 64).manifest();
    assert_eq!(m.lipschitz, 4.0);
    let expected = 2.0 * 2f64.sqrt() * 16.0 / 4f64.atan();
    assert!((m.m_bound - expected).abs() < 1e-12);
    assert!((m.l_star - (expected + 9.0)).abs() < 1e-12);
    assert!(m.turning_total <= 4.0 * m.lipschitz);
}

#[test]
fn zero_function_has_no_compensators() {
    let c = builtin_cert("zero", 8);
    let mut s = Sampler::new(3);
    for _ in 0..100 {
        let z = c.center() + s.unit_vector() * (0.1 * s.uniform());
        assert_eq!(c.c_n(z), c.xi_n(z));
        assert!((c.d_n(z) - z.y.abs()).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psi_is_concave_on_segments(ai in 0usize..4, x1 in -2.0..2.0f64, y1 in -2.0..2.0f64, x2 in -2.0..2.0f64, y2 in -2.0..2.0f64, t in 0.0..1.0f64) {
        let (_, _, k) = pair(ANGLES[ai]);
        let (a, b) = (Point::new(x1, y1), Point::new(x2, y2));
        let m = a * t + b * (1.0 - t);
        prop_assert!(k.psi(m) >= t * k.psi(a) + (1.0 - t) * k.psi(b) - 1e-12);
    }

    #[test]
    fn psi_is_lipschitz(ai in 0usize..4, x1 in -2.0..2.0f64, y1 in -2.0..2.0f64, x2 in -2.0..2.0f64, y2 in -2.0..2.0f64) {
        let (_, _, k) = pair(ANGLES[ai]);
        let (a, b) = (Point::new(x1, y1), Point::new(x2, y2));
        prop_assert!((k.psi(a) - k.psi(b)).abs() <= k.lipschitz() * a.dist(b) + 1e-12);
    }

    #[test]
    fn certificate_is_concave_and_decomposes(a in 0.2..2.0f64, r1 in 0.0..0.1f64, t1 in 0.0..6.3f64, r2 in 0.0..0.1f64, t2 in 0.0..6.3f64, t in 0.0..1.0f64) {
        let f = FnSpec::Quadratic { a, b: 0.0, c: 0.0 }.build().unwrap().sub(&FnSpec::builtin("abs").unwrap().build().unwrap());
        let c = build_certificate(&f, 16).unwrap();
        let z1 = c.center() + Point::new(t1.cos(), t1.sin()) * r1;
        let z2 = c.center() + Point::new(t2.cos(), t2.sin()) * r2;
        let m = z1 * t + z2 * (1.0 - t);
        prop_assert!(c.c_star(m) >= t * c.c_star(z1) + (1.0 - t) * c.c_star(z2) - 1e-9);
        let (d, cn, cs) = c.parts(m);
        prop_assert!((d - (cs - cn)).abs() <= 1e-12);
    }
}
