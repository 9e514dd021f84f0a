//! One PASS/FAIL line per acceptance criterion. Battery results are
//! cross-checked against oracles computed here from first principles.

use dcdist::battery::{self, SuiteReport};
use dcdist::compensator::{build_certificate, kofu_for_angle};
use dcdist::dc::{interpolate_convex, lipschitz_const, ConvexPL, FnSpec};
use dcdist::geom::Point;
use dcdist::verify::{CheckReport, Sampler};
use std::process::Command;

const SEED: u64 = 7;

struct Line {
    pass: bool,
    text: String,
}

fn report(id: usize, title: &str, pass: bool, detail: String) -> Line {
    let text = format!("{} criterion {id} {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    println!("{text}");
    Line { pass, text }
}

fn suite(name: &str) -> SuiteReport {
    battery::run_suite(name, SEED).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn failed(s: &SuiteReport) -> String {
    let names: Vec<&str> = s.failures().map(|c| c.name.as_str()).collect();
    if names.is_empty() {
        format!("{} checks", s.checks.len())
    } else {
        format!("failed {names:?}")
    }
}

fn worst(s: &SuiteReport, tag: &str) -> f64 {
    s.checks.iter().filter(|c| c.name.ends_with(tag)).map(|c| c.residual).fold(0.0, f64::max)
}

fn find<'a>(s: &'a SuiteReport, name: &str) -> &'a CheckReport {
    s.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn kofu() -> Line {
    let s = suite("kofu");
    // identity recomputed in the frame: on the wedge ψ = ⟨w, u⟩ - |w|
    let mut oracle: f64 = 0.0;
    let mut g = Sampler::new(SEED);
    for alpha in [std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_3, std::f64::consts::FRAC_PI_2, 2.8] {
        let v = Point::new(0.3, -0.7);
        let u = Point::new(0.6, 0.8);
        let k = kofu_for_angle(v, u, alpha).unwrap();
        for _ in 0..10_000 {
            let t = (2.0 * g.uniform() - 1.0) * 0.5 * alpha;
            let r = 3.0 * g.uniform();
            let w = u.rotate(t) * r;
            oracle = oracle.max((w.norm() + k.psi(v + w) - w.dot(u)).abs());
        }
    }
    let checks = s.checks.len() == 12;
    let pass = s.pass && checks && oracle <= 1e-9;
    report(
        1,
        "kofu",
        pass,
        format!(
            "{}; identity {:.2e}, oracle identity {oracle:.2e}, concavity {:.2e}, lipschitz excess {:.2e}",
            failed(&s),
            worst(&s, "/identity"),
            worst(&s, "/concave"),
            worst(&s, "/lipschitz")
        ),
    )
}

fn certificate() -> Line {
    let s = suite("certificate");
    // L* for x² recomputed: L = 4, M = 2√2·16/atan 4
    let c = build_certificate(&FnSpec::builtin("quadratic").unwrap().build().unwrap(), 64).unwrap();
    let m = 2.0 * 2f64.sqrt() * 16.0 / 4f64.atan();
    let l_ok = (c.l_star() - (m + 9.0)).abs() < 1e-12;
    let pass = s.pass && s.checks.len() == 48 && l_ok;
    report(
        2,
        "certificate",
        pass,
        format!(
            "{}; concavity {:.2e}, lipschitz excess {:.2e}, decomposition {:.2e}, cover mismatch {:.2e}, L*(x²) = {}",
            failed(&s),
            worst(&s, "/c_star-concave"),
            worst(&s, "/c_n-lipschitz"),
            worst(&s, "/decomposition"),
            worst(&s, "/cover"),
            c.l_star()
        ),
    )
}

fn compensation() -> Line {
    let s = suite("compensation");
    let samples_ok = s.checks.iter().filter(|c| c.name.ends_with("/sum-bound")).all(|c| c.samples >= 100 * 16);
    let pass = s.pass && samples_ok;
    report(
        3,
        "compensation",
        pass,
        format!("{}; sum-bound excess {:.2e}, dominance deficit {:.2e}", failed(&s), worst(&s, "/sum-bound"), worst(&s, "/dominance")),
    )
}

fn convergence() -> Line {
    let s = suite("convergence");
    let rate = find(&s, "convergence/quadratic/ratio");
    let e: Vec<f64> = [8, 16, 32, 64].iter().map(|n| rate.metrics[&format!("e_{n:05}")]).collect();
    // interpolation error of x² on a mesh of width h is h²/4, so d_n - d ≈ h²/4
    let h = |n: f64| 2.0 / n;
    let shape = e.iter().zip([8.0, 16.0, 32.0, 64.0]).all(|(e, n)| *e <= h(n) * h(n) / 4.0 + 1e-12);
    let ratios: Vec<f64> = e.windows(2).map(|w| w[0] / w[1]).collect();
    let pass = s.pass && shape && ratios.iter().all(|&r| r >= 3.0);
    report(4, "convergence", pass, format!("{}; e_n {}, ratios {ratios:.3?}", failed(&s), e.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(" ")))
}

fn sets() -> Line {
    let s = suite("sets");
    let pass = s.pass && s.checks.len() == 9;
    report(
        5,
        "set calculus",
        pass,
        format!(
            "{}; union {:.1e}, boundary {:.1e}, tube exact {:.1e}/{:.1e}, tube semiconcave {:.1e}/{:.1e}, asplund {:.1e}",
            failed(&s),
            find(&s, "sets/union-min-rule").residual,
            worst(&s, "-abs").max(find(&s, "sets/boundary/disk").residual).max(find(&s, "sets/boundary/half-plane").residual),
            find(&s, "sets/tube/disk").residual,
            find(&s, "sets/tube/half-plane").residual,
            find(&s, "sets/tube/semiconcave-hypograph").residual,
            find(&s, "sets/tube/semiconcave-epigraph").residual,
            find(&s, "sets/asplund/polyline-scene").residual
        ),
    )
}

fn counterexamples() -> Line {
    let s = suite("counterexamples");
    let flagged = |name: &str| {
        let c = find(&s, &format!("counterexamples/{name}/detector"));
        c.metrics["flagged"] == 1.0 && c.metrics["sustained_points"] >= 20.0 && c.residual >= 0.9
    };
    let clean: Vec<&str> = s
        .checks
        .iter()
        .filter(|c| c.name.ends_with("/detector") && c.metrics["expect_flag"] == 0.0)
        .filter(|c| c.metrics["flagged"] != 0.0)
        .map(|c| c.name.as_str())
        .collect();
    let pass = s.pass && flagged("d1-counterexample") && flagged("osc-M") && clean.is_empty();
    let osc = |name: &str| find(&s, &format!("counterexamples/{name}/detector")).metrics["sustained_points"];
    report(
        6,
        "counterexamples",
        pass,
        format!(
            "{}; sustained points d1 {} osc-M {}, wrongly flagged {clean:?}",
            failed(&s),
            osc("d1-counterexample"),
            osc("osc-M")
        ),
    )
}

/// Random convex PL function with slopes in `[-m, m]`, built here.
fn convex_pl(g: &mut Sampler, m: f64) -> ConvexPL {
    let k = 2 + (g.uniform() * 8.0) as usize;
    let mut xs: Vec<f64> = (0..k).map(|_| g.uniform_in(-0.95, 0.95)).collect();
    xs.extend([-1.0, 1.0]);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut s: Vec<f64> = (1..xs.len()).map(|_| g.uniform_in(-m, m)).collect();
    s.sort_by(f64::total_cmp);
    let mut ys = vec![0.0];
    for i in 0..s.len() {
        ys.push(ys[i] + s[i] * (xs[i + 1] - xs[i]));
    }
    ConvexPL::new(xs, ys).unwrap()
}

fn bounds() -> Line {
    let s = suite("bounds");
    // independent pairs: turning and angle sums from raw node values
    let mut g = Sampler::new(SEED ^ 0xb0);
    let mut violations = 0;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..100 {
        let m = g.uniform_in(0.2, 4.0);
        let (a, b) = (convex_pl(&mut g, m), convex_pl(&mut g, m));
        let l = lipschitz_const(&a, &b, -1.0, 1.0).unwrap();
        let an = interpolate_convex(&a, 64, -1.0, 1.0).unwrap();
        let bn = interpolate_convex(&b, 64, -1.0, 1.0).unwrap();
        let xs = an.breakpoints();
        let ys: Vec<f64> = an.values().iter().zip(bn.values()).map(|(p, q)| p - q).collect();
        let slopes: Vec<f64> = (0..64).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let t: f64 = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
        let alpha: f64 = slopes.windows(2).map(|w| (w[1].atan() - w[0].atan()).abs()).sum();
        if t > 4.0 * l || alpha > 4.0 * l {
            violations += 1;
        }
        worst_ratio = worst_ratio.max(t / (4.0 * l));
    }
    let pass = s.pass && violations == 0;
    report(
        7,
        "bounds",
        pass,
        format!("{}; oracle violations {violations}, max T/4L {worst_ratio:.3}", failed(&s)),
    )
}

fn determinism() -> Line {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_dcdist"))
            .args(["verify", "--suite", "all", "--seed", "7"])
            .output()
            .expect("run dcdist")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let codes = (a.status.code(), b.status.code());
    let pass = same && codes == (Some(0), Some(0));
    report(
        8,
        "determinism",
        pass,
        format!("exit codes {codes:?}, {} report bytes, identical {same}", a.stdout.len()),
    )
}

#[test]
fn acceptance() {
    let lines = [kofu(), certificate(), compensation(), convergence(), sets(), counterexamples(), bounds(), determinism()];
    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.text.as_str()).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}
