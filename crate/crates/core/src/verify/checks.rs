use super::{estimate_dir_deriv_scaled, onesided_1d, CheckReport, Region, Sampler, VerifyError, Worst, DEFAULT_STEPS};
use crate::geom::Point;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

type Field<'a> = &'a (dyn Fn(Point) -> f64 + Sync);

/// Every fourth sample is drawn near a focus point (kinks, graph points).
fn pick_base(s: &mut Sampler, region: &Region, focus: &[Point], k: usize, scale: f64) -> (Point, bool) {
    if !focus.is_empty() && k % 4 == 3 {
        let p = focus[(k / 4) % focus.len()];
        (s.near(p, scale, region), true)
    } else {
        (s.point(region), false)
    }
}

/// Midpoint-type concavity test on sampled triples `(z1, z2, t)`.
pub fn check_concave(
    name: &str,
    f: Field,
    region: &Region,
    samples: usize,
    tol: f64,
    seed: u64,
    focus: &[Point],
) -> CheckReport {
    let mut s = Sampler::new(seed);
    let scale = 0.05 * region.diameter();
    let triples: Vec<(Point, Point, f64)> = (0..samples)
        .map(|k| {
            let (z1, near) = pick_base(&mut s, region, focus, k, scale);
            let z2 = if near { s.near(z1, scale, region) } else { s.point(region) };
            (z1, z2, s.uniform())
        })
        .collect();
    let res: Vec<f64> = triples
        .par_iter()
        .map(|&(z1, z2, t)| {
            let m = z1 * t + z2 * (1.0 - t);
            (t * f(z1) + (1.0 - t) * f(z2) - f(m)).max(0.0)
        })
        .collect();
    let mut w = Worst::new();
    for (r, (z1, z2, _)) in res.iter().zip(&triples) {
        w.offer(*r, &[*z1, *z2]);
    }
    CheckReport::new(name, seed, samples, tol, w.residual).with_witness(w.witness)
}

/// Sampled difference quotients against `k`; residual is `max(ratio - k, 0)`.
#[allow(clippy::too_many_arguments)]
pub fn check_lipschitz(
    name: &str,
    f: Field,
    region: &Region,
    k: f64,
    samples: usize,
    tol: f64,
    seed: u64,
    focus: &[Point],
) -> CheckReport {
    let mut s = Sampler::new(seed);
    let far = 0.05 * region.diameter();
    let close = 1e-3 * region.diameter();
    let pairs: Vec<(Point, Point)> = (0..samples)
        .map(|j| {
            let (z1, near) = pick_base(&mut s, region, focus, j, far);
            let z2 = if near || j % 2 == 1 { s.near(z1, close, region) } else { s.point(region) };
            (z1, z2)
        })
        .collect();
    let ratios: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let d = a.dist(b);
            // coincident pairs carry no information
            (d > 0.0).then(|| (f(a) - f(b)).abs() / d)
        })
        .collect();
    let mut w = Worst::new();
    let mut max_ratio: f64 = 0.0;
    let mut used = 0;
    for (r, (a, b)) in ratios.iter().zip(&pairs) {
        if let Some(r) = r {
            used += 1;
            max_ratio = if r.is_nan() { f64::NAN } else { max_ratio.max(*r) };
            w.offer((r - k).max(0.0), &[*a, *b]);
        }
    }
    CheckReport::new(name, seed, used, tol, w.residual)
        .with_witness(w.witness)
        .metric("max_ratio", max_ratio)
        .metric("lipschitz", k)
}

/// `F'_+(x, v) + F'_+(x, -v) <= tol` at every point and direction.
pub fn check_onesided_sum(
    name: &str,
    f: Field,
    points: &[Point],
    directions: &[Point],
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    check_onesided_sum_scaled(name, f, points, directions, tol, DEFAULT_STEPS[0])
}

pub fn check_onesided_sum_scaled(
    name: &str,
    f: Field,
    points: &[Point],
    directions: &[Point],
    tol: f64,
    h_max: f64,
) -> Result<CheckReport, VerifyError> {
    let jobs: Vec<(Point, Point)> = points.iter().flat_map(|&x| directions.iter().map(move |&v| (x, v))).collect();
    let sums: Vec<Result<f64, VerifyError>> = jobs
        .par_iter()
        .map(|&(x, v)| {
            let a = estimate_dir_deriv_scaled(f, x, v, h_max)?;
            let b = estimate_dir_deriv_scaled(f, x, -v, h_max)?;
            Ok(a.value + b.value)
        })
        .collect();
    let mut w = Worst::new();
    let mut worst_sum = f64::NEG_INFINITY;
    for (r, (x, v)) in sums.into_iter().zip(&jobs) {
        let r = r?;
        worst_sum = worst_sum.max(r);
        w.offer(r.max(0.0), &[*x, *v]);
    }
    Ok(CheckReport::new(name, 0, jobs.len(), tol, w.residual)
        .with_witness(w.witness)
        .metric("max_sum", worst_sum))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Tail oscillation of one-sided derivatives that counts as non-DC.
    pub threshold: f64,
    /// Number of tail positions that must exceed the threshold.
    pub sustained: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig { threshold: 0.9, sustained: 20 }
    }
}

/// Looks for one-sided derivatives of `f` that keep oscillating along a
/// sequence converging to `a`.
///
/// For each side of `a`, with both one-sided derivatives estimated at every
/// sequence point, `T_k` is the spread (max - min) of the values at points
/// `k, k+1, ...` of that side. The residual is the `sustained`-th largest
/// `T_k` over both sides; the function is flagged when it exceeds the
/// threshold, so `pass` means "no evidence".
pub fn detect_non_dc_on_line(
    name: &str,
    f: &(dyn Fn(f64) -> f64 + Sync),
    a: f64,
    sequence: &[f64],
    cfg: &DetectorConfig,
) -> CheckReport {
    let mut tails: Vec<f64> = Vec::new();
    let mut max_osc: f64 = 0.0;
    let mut skipped = 0usize;
    for side in [1.0, -1.0] {
        let pts: Vec<f64> = sequence.iter().copied().filter(|x| (x - a) * side > 0.0).collect();
        let derivs: Vec<Option<[f64; 2]>> = (0..pts.len())
            .into_par_iter()
            .map(|j| {
                let x = pts[j];
                let mut gap = (x - a).abs();
                for k in [j.wrapping_sub(1), j + 1] {
                    if let Some(&y) = pts.get(k) {
                        if y != x {
                            gap = gap.min((y - x).abs());
                        }
                    }
                }
                let h = 0.1 * gap;
                let (right, _) = onesided_1d(f, x, 1.0, h)?;
                let (left, _) = onesided_1d(f, x, -1.0, h)?;
                Some([right, -left])
            })
            .collect();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut side_tails = Vec::with_capacity(pts.len());
        for d in derivs.iter().rev() {
            match d {
                Some([r, l]) => {
                    lo = lo.min(r.min(*l));
                    hi = hi.max(r.max(*l));
                    side_tails.push(hi - lo);
                }
                None => skipped += 1,
            }
        }
        max_osc = max_osc.max(side_tails.iter().copied().fold(0.0, f64::max));
        tails.extend(side_tails);
    }
    tails.sort_by(|x, y| y.total_cmp(x));
    let s = tails.get(cfg.sustained.saturating_sub(1)).copied().unwrap_or(0.0);
    let count = tails.iter().filter(|&&t| t > cfg.threshold).count();
    CheckReport::new(name, 0, sequence.len(), cfg.threshold, s)
        .with_witness(vec![Point::new(a, 0.0)])
        .metric("oscillation", max_osc)
        .metric("sustained_points", count as f64)
        .metric("flagged", if s > cfg.threshold { 1.0 } else { 0.0 })
        .metric("skipped_points", skipped as f64)
}

/// Sup-grid errors `e_n` against `reference`; passes when they decrease
/// strictly along the sequence, treating errors at or below `floor` as
/// converged.
pub fn check_uniform_convergence(
    name: &str,
    reference: Field,
    sequence: &[(usize, Field)],
    grid: &[Point],
    floor: f64,
) -> CheckReport {
    let exact: Vec<f64> = grid.par_iter().map(|&z| reference(z)).collect();
    let errors: Vec<f64> = sequence
        .iter()
        .map(|(_, f)| {
            grid.par_iter()
                .zip(exact.par_iter())
                .map(|(&z, &e)| (f(z) - e).abs())
                .reduce(|| 0.0, f64::max)
        })
        .collect();
    let mut worst_ratio: f64 = 0.0;
    let mut min_ratio = f64::INFINITY;
    for w in errors.windows(2) {
        if w[0] > floor {
            worst_ratio = worst_ratio.max(w[1] / w[0]);
            min_ratio = min_ratio.min(w[0] / w[1]);
        } else if w[1] > floor {
            worst_ratio = f64::INFINITY;
        }
    }
    let mut r = CheckReport::new(name, 0, grid.len(), 1.0 - f64::EPSILON, worst_ratio);
    for ((n, _), e) in sequence.iter().zip(&errors) {
        r = r.metric(format!("e_{n:05}"), *e);
    }
    r.metric("min_decrease_ratio", min_ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComixStatus {
    /// Hypotheses and conclusion both held on the samples.
    Held,
    HypothesesUnmet,
    /// Hypotheses held but concavity failed: contradicts the mixing principle.
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComixReport {
    pub cover: CheckReport,
    pub onesided: CheckReport,
    pub concave: CheckReport,
    pub status: ComixStatus,
}

impl ComixReport {
    pub fn all_pass(&self) -> bool {
        self.status == ComixStatus::Held
    }
}

/// Checks the concave mixing hypotheses for `gamma` (graph covered by the
/// `count` functions `cover(k, ·)`; one-sided sums `<= 0`) and its
/// conclusion (concavity). Focus points inside the region are tested
/// exactly, in addition to the samples.
#[allow(clippy::too_many_arguments)]
pub fn check_comix(
    name: &str,
    gamma: Field,
    count: usize,
    cover: &(dyn Fn(usize, Point) -> f64 + Sync),
    region: &Region,
    samples: usize,
    tol: f64,
    deriv_tol: f64,
    seed: u64,
    focus: &[Point],
) -> Result<ComixReport, VerifyError> {
    let mut s = Sampler::new(seed);
    let scale = 0.05 * region.diameter();
    let mut pts: Vec<Point> = focus.iter().copied().filter(|z| region.contains(*z)).collect();
    pts.extend((0..samples).map(|k| pick_base(&mut s, region, focus, k, scale).0));
    let mismatch: Vec<f64> = pts
        .par_iter()
        .map(|&z| {
            let g = gamma(z);
            let mut best = f64::INFINITY;
            for k in 0..count {
                best = best.min((cover(k, z) - g).abs());
                if best <= tol {
                    break;
                }
            }
            best
        })
        .collect();
    let mut w = Worst::new();
    for (m, z) in mismatch.iter().zip(&pts) {
        w.offer(*m, &[*z]);
    }
    let cover_report = CheckReport::new(format!("{name}/cover"), seed, pts.len(), tol, w.residual).with_witness(w.witness);

    let dirs: Vec<Point> = (0..4).map(|_| s.unit_vector()).collect();
    let h_max = (0.01 * region.diameter()).min(DEFAULT_STEPS[0]);
    let mut onesided = check_onesided_sum_scaled(&format!("{name}/onesided"), gamma, &pts, &dirs, deriv_tol, h_max)?;
    onesided.seed = seed;
    let concave = check_concave(&format!("{name}/concave"), gamma, region, samples, tol, seed ^ 0x5eed, focus);
    let status = if !(cover_report.pass && onesided.pass) {
        ComixStatus::HypothesesUnmet
    } else if concave.pass {
        ComixStatus::Held
    } else {
        ComixStatus::Contradiction
    };
    Ok(ComixReport { cover: cover_report, onesided, concave, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Region {
        Region::rect(-1.0, 1.0, -1.0, 1.0)
    }

    #[test]
    fn concave_examples() {
        let f = |z: Point| -z.x * z.x - z.y * z.y;
        let r = check_concave("neg-quad", &f, &square(), 2000, 1e-12, 1, &[]);
        assert!(r.pass && r.residual <= 1e-12);
        let f = |z: Point| z.x.abs();
        let r = check_concave("abs", &f, &square(), 2000, 1e-9, 1, &[]);
        assert!(!r.pass);
        assert!(r.witness[0].x * r.witness[1].x < 0.0);
    }

    #[test]
    fn lipschitz_examples() {
        let f = |z: Point| z.x;
        assert!(check_lipschitz("x", &f, &square(), 1.0, 1000, 1e-6, 2, &[]).pass);
        let f = |z: Point| 2.0 * z.x;
        assert!(!check_lipschitz("2x", &f, &square(), 1.0, 1000, 1e-6, 2, &[]).pass);
    }

    #[test]
    fn onesided_examples() {
        let f = |z: Point| -(z.x * z.x) - 3.0 * z.y * z.y;
        let pts = Sampler::new(5).points(&square(), 50);
        let dirs = [Point::new(1.0, 0.0), Point::new(0.6, 0.8)];
        let r = check_onesided_sum("concave", &f, &pts, &dirs, 1e-6).unwrap();
        assert!(r.pass);
        let f = |z: Point| z.x.abs();
        let r = check_onesided_sum("abs", &f, &[Point::ORIGIN], &[Point::new(1.0, 0.0)], 1e-6).unwrap();
        assert!(!r.pass);
        assert!((r.residual - 2.0).abs() < 1e-9);
    }

    #[test]
    fn detector_abs_not_flagged() {
        let seq: Vec<f64> = (1..200).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / k as f64).collect();
        let f = |x: f64| x.abs();
        let r = detect_non_dc_on_line("abs", &f, 0.0, &seq, &DetectorConfig::default());
        assert!(r.pass, "{r:?}");
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn convergence_floor() {
        let f = |z: Point| z.x;
        let seq: Vec<(usize, Field)> = vec![(8, &f), (16, &f)];
        let grid = Sampler::new(0).points(&square(), 10);
        assert!(check_uniform_convergence("exact", &f, &seq, &grid, 1e-12).pass);
        let g = |z: Point| z.x + 0.1;
        let h = |z: Point| z.x + 0.1;
        let seq: Vec<(usize, Field)> = vec![(8, &g), (16, &h)];
        assert!(!check_uniform_convergence("stalled", &f, &seq, &grid, 1e-12).pass);
    }

    #[test]
    fn comix_examples() {
        let g = |z: Point| -(z.x * z.x) - z.y * z.y;
        let cover = |_: usize, z: Point| g(z);
        let r = check_comix("single", &g, 1, &cover, &square(), 300, 1e-9, 1e-6, 3, &[]).unwrap();
        assert_eq!(r.status, ComixStatus::Held);

        let g = |z: Point| z.x.abs();
        let cover = |k: usize, z: Point| if k == 0 { z.x } else { -z.x };
        let r = check_comix("abs", &g, 2, &cover, &square(), 300, 1e-9, 1e-6, 3, &[Point::ORIGIN]).unwrap();
        assert!(r.cover.pass);
        assert!(!r.onesided.pass);
        assert_eq!(r.status, ComixStatus::HypothesesUnmet);
    }
}
