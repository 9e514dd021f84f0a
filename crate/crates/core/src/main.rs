use clap::{Args, Parser, Subcommand};
use dcdist::battery;
use dcdist::compensator::{build_certificate, MIN_RESOLUTION};
use dcdist::dc::FnSpec;
use dcdist::geom::Point;
use dcdist::sets::{gallery, GalleryParams, Scene, SceneSpec, GALLERY};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "dcdist", version, about = "DC decompositions of planar distance functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a certificate and dump d_n, c_n, c*_n on a grid over U.
    Decompose(DecomposeArgs),
    /// Distance field of a scene on a regular grid.
    Field(FieldArgs),
    /// Run a verification suite and write the report.
    Verify(VerifyArgs),
    /// List the gallery scenes.
    Scenes,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    /// Builtin function name or path to a JSON function spec.
    #[arg(long = "fn")]
    function: String,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// Output prefix: writes PREFIX.csv and PREFIX.manifest.json. Without
    /// it the manifest goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Scene file, or the name of a gallery scene.
    #[arg(long)]
    scene: String,
    #[arg(long, default_value_t = 101)]
    grid: usize,
    #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["X0", "X1", "Y0", "Y1"])]
    bounds: Option<Vec<f64>>,
    /// Refinement tolerance for graph primitives without their own.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verification,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    if let Some(n) = std::env::var("DCDIST_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialisation is harmless to ignore
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = match cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Field(a) => field(a),
        Command::Verify(a) => verify(a),
        Command::Scenes => scenes(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("dcdist: {m}");
            ExitCode::from(2)
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_fn(name: &str) -> Result<FnSpec, Failure> {
    if let Some(spec) = FnSpec::builtin(name) {
        return Ok(spec);
    }
    let text = std::fs::read_to_string(name).map_err(|e| usage(format!("--fn {name}: not a builtin and not readable: {e}")))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("--fn {name}: {e}")))
}

fn check_grid(grid: usize) -> Result<(), Failure> {
    if grid < 2 {
        return Err(usage(format!("--grid must be >= 2, got {grid}")));
    }
    Ok(())
}

fn decompose(a: DecomposeArgs) -> Result<(), Failure> {
    check_grid(a.grid)?;
    if a.n < MIN_RESOLUTION {
        return Err(usage(format!("--n must be >= {MIN_RESOLUTION}, got {}", a.n)));
    }
    let f = parse_fn(&a.function)?.build().map_err(usage)?;
    let cert = build_certificate(&f, a.n).map_err(usage)?;
    let manifest = serde_json::to_string_pretty(&cert.manifest()).map_err(usage)? + "\n";
    match a.out {
        Some(prefix) => {
            let rows = cert.grid_dump(a.grid);
            let mut csv = String::from("x,y,d_n,c_n,c_star\n");
            for r in rows {
                let _ = writeln!(csv, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", r.z.x, r.z.y, r.d_n, r.c_n, r.c_star);
            }
            write_out(Some(&with_suffix(&prefix, ".csv")), &csv)?;
            write_out(Some(&with_suffix(&prefix, ".manifest.json")), &manifest)
        }
        None => write_out(None, &manifest),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn load_scene(name: &str, tol: Option<f64>) -> Result<Scene, Failure> {
    if !Path::new(name).exists() && GALLERY.iter().any(|(n, _)| *n == name) {
        return gallery(name, &GalleryParams::default()).map(|g| g.scene).map_err(usage);
    }
    let text = std::fs::read_to_string(name).map_err(|e| usage(format!("--scene {name}: {e}")))?;
    let mut spec = SceneSpec::from_json(&text).map_err(|e| usage(format!("--scene {name}: {e}")))?;
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(usage(format!("--tol must be > 0, got {t}")));
        }
        for item in &mut spec.primitives {
            item.primitive.set_default_tol(t);
        }
    }
    let scene = spec.build().map_err(|e| usage(format!("--scene {name}: {e}")))?;
    if scene.is_empty() {
        return Err(usage(format!("--scene {name}: no primitives")));
    }
    Ok(scene)
}

fn field(a: FieldArgs) -> Result<(), Failure> {
    check_grid(a.grid)?;
    let [x0, x1, y0, y1] = match a.bounds.as_deref() {
        None => [-2.0, 2.0, -2.0, 2.0],
        Some(&[x0, x1, y0, y1]) => [x0, x1, y0, y1],
        Some(_) => return Err(usage("--bounds takes four numbers")),
    };
    if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
        return Err(usage(format!("--bounds need x0 < x1 and y0 < y1, got {x0} {x1} {y0} {y1}")));
    }
    let scene = load_scene(&a.scene, a.tol)?;
    let g = a.grid;
    let at = |lo: f64, hi: f64, i: usize| if i + 1 == g { hi } else { lo + (hi - lo) * i as f64 / (g - 1) as f64 };
    let pts: Vec<Point> = (0..g).flat_map(|j| (0..g).map(move |i| (i, j))).map(|(i, j)| Point::new(at(x0, x1, i), at(y0, y1, j))).collect();
    let values: Vec<f64> = pts.par_iter().map(|&z| scene.dist(z)).collect();
    let mut csv = String::from("x,y,d\n");
    for (z, d) in pts.iter().zip(&values) {
        let _ = writeln!(csv, "{:.16e},{:.16e},{:.16e}", z.x, z.y, d);
    }
    write_out(a.out.as_deref(), &csv)
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let report = battery::run(&a.suite, a.seed).map_err(usage)?;
    let text = serde_json::to_string_pretty(&report).map_err(usage)? + "\n";
    write_out(a.out.as_deref(), &text)?;
    for s in &report.suites {
        let fails: Vec<&str> = s.failures().map(|c| c.name.as_str()).collect();
        eprintln!("{} {}: {} checks, {} failed", if s.pass { "PASS" } else { "FAIL" }, s.suite, s.checks.len(), fails.len());
        for f in fails {
            eprintln!("  failed: {f}");
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn scenes() -> Result<(), Failure> {
    let mut out = String::new();
    for (name, description) in GALLERY {
        let _ = writeln!(out, "{name}\t{description}");
    }
    write_out(None, &out)
}
