//! Unified command-line entry point: `integrate`, `bench`, `epsilon`,
//! `render`, `mse`. All machine output is JSON on stdout; diagnostics are
//! JSON on stderr. Exit codes: 0 success, 1 usage error, 2 runtime error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::bench::{emit_gnuplot, emit_report, make_function, run_bench, BenchSpec};
use crate::estimators::{
    estimate_cvor, estimate_fvor, estimate_mc, estimate_vor, EstimateReport, Method,
};
use crate::geom2d::Window;
use crate::pointproc::{bound_reject_prob, solve_epsilon, CountMode, RngStream, SpppParams};
use crate::render::{
    compute_mse, cornell_box, ImageBuf, RenderJob, SamplerKind, Scene, Weighting,
};

#[derive(Parser, Debug)]
#[command(
    name = "vorint",
    version,
    about = "Voronoi-reweighted Monte Carlo integration toolkit",
    disable_help_subcommand = true
)]
struct Cli {
    /// Base RNG seed for subcommands that don't set their own.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// off | error | warn | info | debug | trace.
    #[arg(long, global = true, default_value = "warn")]
    log_level: log::LevelFilter,

    /// Directory receiving outputs that lack an explicit path.
    #[arg(long, global = true, default_value = "out")]
    output_dir: PathBuf,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve the stretch margin for a target rejection confidence.
    Epsilon(EpsilonArgs),
    /// One integral estimate of a named function.
    Integrate(IntegrateArgs),
    /// Replication benchmark from a JSON spec.
    Bench(BenchArgs),
    /// Path-trace a scene.
    Render(RenderArgs),
    /// Mean squared error between two PFM images.
    Mse(MseArgs),
}

#[derive(Args, Debug)]
struct EpsilonArgs {
    /// Process intensity (points per unit area).
    #[arg(long)]
    n: f64,
    /// Target bound on the rejection probability.
    #[arg(long, default_value_t = SpppParams::DEFAULT_DELTA)]
    delta: f64,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    /// mc | vor | fvor | cvor.
    #[arg(long)]
    method: Method,
    /// holder | not_holder | discontinuity.
    #[arg(long)]
    function: String,
    /// Sample count / intensity.
    #[arg(long)]
    n: u64,
    /// Hölder exponent (required for the holder family).
    #[arg(long)]
    alpha: Option<f64>,
    /// Rejection confidence for the stretched window.
    #[arg(long, default_value_t = SpppParams::DEFAULT_DELTA)]
    delta: f64,
    /// Overrides the global seed.
    #[arg(long)]
    seed: Option<u64>,
    /// fixed | poisson point counts.
    #[arg(long, default_value = "fixed")]
    mode: CountMode,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// JSON file mirroring the bench spec schema.
    #[arg(long)]
    spec: PathBuf,
    /// Output directory (defaults to <output-dir>/bench).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Additionally emit gnuplot-ready .dat files.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Scene JSON; the built-in Cornell Box when omitted.
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Samples per pixel.
    #[arg(long, default_value_t = 256)]
    spp: u32,
    /// rnd | stratified | sppp.
    #[arg(long, default_value = "rnd")]
    sampler: SamplerKind,
    /// mc | vor | fvor (vor/fvor require --sampler sppp).
    #[arg(long, default_value = "mc")]
    weighting: Weighting,
    /// Maximum path depth (segments).
    #[arg(long, default_value_t = 8)]
    depth: u32,
    /// Enable next event estimation.
    #[arg(long)]
    nee: bool,
    /// Overrides the global seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output image (.pfm or .ppm; the sibling format is written alongside).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Firefly cap as a multiple of the peak emitter radiance (0 disables).
    #[arg(long, default_value_t = 10.0)]
    clamp_factor: f64,
    /// Dump one pixel's samples: --dump-pixel X,Y FILE.json
    #[arg(long, num_args = 2, value_names = ["X,Y", "FILE"])]
    dump_pixel: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct MseArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Parses argv (including the program name), runs the subcommand, and
/// returns the process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are successful terminations.
            if e.use_stderr() {
                eprintln!(
                    "{}",
                    json!({"kind": "usage", "error": e.render().to_string()})
                );
                return 1;
            }
            print!("{e}");
            return 0;
        }
    };

    let _ = env_logger::Builder::new()
        .filter_level(cli.log_level)
        .try_init();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build();
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", json!({"kind": "runtime", "error": e.to_string()}));
            return 2;
        }
    };

    match pool.install(|| run(&cli)) {
        Ok(output) => {
            println!("{output}");
            0
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("{}", json!({"kind": "usage", "error": msg}));
            1
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("{}", json!({"kind": "runtime", "error": msg}));
            2
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.cmd {
        Cmd::Epsilon(args) => {
            if args.n <= 0.0 || !(0.0 < args.delta && args.delta < 1.0) {
                return Err(CliError::Usage(
                    "epsilon requires n > 0 and delta in (0, 1)".into(),
                ));
            }
            let eps = solve_epsilon(args.n, args.delta);
            Ok(json!({
                "epsilon": eps,
                "bound": bound_reject_prob(args.n, eps),
            })
            .to_string())
        }
        Cmd::Integrate(args) => {
            let report = integrate(cli, args)?;
            serde_json::to_string(&report).map_err(CliError::runtime)
        }
        Cmd::Bench(args) => {
            let text = std::fs::read_to_string(&args.spec).map_err(CliError::usage)?;
            let spec: BenchSpec = serde_json::from_str(&text).map_err(CliError::usage)?;
            let report = run_bench(&spec).map_err(CliError::runtime)?;
            let out_dir = args
                .out
                .clone()
                .unwrap_or_else(|| cli.output_dir.join("bench"));
            let (csv, json_path) = emit_report(&report, &out_dir).map_err(CliError::runtime)?;
            if args.gnuplot {
                emit_gnuplot(&report, &out_dir).map_err(CliError::runtime)?;
            }
            let slopes: serde_json::Map<String, serde_json::Value> = report
                .methods
                .iter()
                .map(|m| (m.method.to_string(), json!(m.variance_slope)))
                .collect();
            Ok(json!({
                "csv": csv,
                "json": json_path,
                "function": report.function,
                "variance_slopes": slopes,
            })
            .to_string())
        }
        Cmd::Render(args) => render(cli, args),
        Cmd::Mse(args) => {
            let a = ImageBuf::read_pfm(&args.a).map_err(CliError::runtime)?;
            let b = ImageBuf::read_pfm(&args.b).map_err(CliError::runtime)?;
            let mse = compute_mse(&a, &b).map_err(CliError::runtime)?;
            Ok(json!({ "mse": mse }).to_string())
        }
    }
}

fn integrate(cli: &Cli, args: &IntegrateArgs) -> Result<EstimateReport, CliError> {
    let f = make_function(&args.function, args.alpha).map_err(CliError::usage)?;
    let w = Window::canonical();
    let seed = args.seed.unwrap_or(cli.seed);
    let mut rng = RngStream::new(seed);
    if args.n == 0 {
        return Err(CliError::Usage("--n must be ≥ 1".into()));
    }
    let params = SpppParams::new(args.n as f64, args.delta).with_mode(args.mode);
    match args.method {
        Method::Mc => estimate_mc(&mut rng, &f, args.n, &w),
        Method::Vor => estimate_vor(&mut rng, &f, &params, &w),
        Method::Fvor => estimate_fvor(&mut rng, &f, &params, &w),
        Method::Cvor => estimate_cvor(&mut rng, &f, args.n, &w),
    }
    .map_err(CliError::runtime)
}

fn render(cli: &Cli, args: &RenderArgs) -> Result<String, CliError> {
    let scene = match &args.scene {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(CliError::usage)?;
            Scene::from_json(&text).map_err(CliError::runtime)?
        }
        None => cornell_box(),
    };

    let mut job = RenderJob::new(scene, args.spp);
    job.sampler = args.sampler;
    job.weighting = args.weighting;
    job.max_depth = args.depth;
    job.nee = args.nee;
    job.seed = args.seed.unwrap_or(cli.seed);
    job.clamp_factor = (args.clamp_factor > 0.0).then_some(args.clamp_factor);
    job.validate().map_err(CliError::usage)?;

    let started = std::time::Instant::now();
    let (img, stats) = crate::render::render_image(&job).map_err(CliError::runtime)?;
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;

    let out = args
        .out
        .clone()
        .unwrap_or_else(|| cli.output_dir.join("render.pfm"));
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(CliError::runtime)?;
        }
    }
    let (pfm, ppm) = write_image_pair(&img, &out)?;

    let dump_path = match &args.dump_pixel {
        Some(pair) => {
            let (x, y) = parse_pixel(&pair[0])?;
            if x >= job.scene.camera.width || y >= job.scene.camera.height {
                return Err(CliError::Usage(format!("pixel {x},{y} out of bounds")));
            }
            let outcome = crate::render::render_pixel(&job, x, y, true);
            let path = PathBuf::from(&pair[1]);
            let dump = serde_json::to_string_pretty(&outcome.dump).map_err(CliError::runtime)?;
            std::fs::write(&path, dump).map_err(CliError::runtime)?;
            Some(path)
        }
        None => None,
    };

    log::info!(
        "rendered {}x{} at {} spp, {} fallback pixels",
        job.scene.camera.width,
        job.scene.camera.height,
        job.spp,
        stats.fallback_pixels
    );

    Ok(json!({
        "pfm": pfm,
        "ppm": ppm,
        "fallback_pixels": stats.fallback_pixels,
        "elapsed_ms": elapsed_ms,
        "dump": dump_path,
    })
    .to_string())
}

/// Writes the linear PFM (metrics) and gamma-2.2 PPM (viewing) pair sharing
/// the stem of `out`.
fn write_image_pair(img: &ImageBuf, out: &Path) -> Result<(PathBuf, PathBuf), CliError> {
    let ext = out
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("pfm")
        .to_ascii_lowercase();
    let (pfm, ppm) = match ext.as_str() {
        "ppm" => (out.with_extension("pfm"), out.to_path_buf()),
        "pfm" => (out.to_path_buf(), out.with_extension("ppm")),
        other => {
            return Err(CliError::Usage(format!(
                "unsupported image extension `{other}` (use .pfm or .ppm)"
            )))
        }
    };
    img.write_pfm(&pfm).map_err(CliError::runtime)?;
    img.write_ppm(&ppm).map_err(CliError::runtime)?;
    Ok((pfm, ppm))
}

fn parse_pixel(s: &str) -> Result<(u32, u32), CliError> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected X,Y pixel coordinates, got `{s}`")))?;
    Ok((
        x.trim().parse().map_err(CliError::usage)?,
        y.trim().parse().map_err(CliError::usage)?,
    ))
}
