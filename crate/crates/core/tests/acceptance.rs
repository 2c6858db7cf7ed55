//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured quantities (run with `--nocapture` to see them all).
//!
//! Known-red criteria, left honest rather than loosened: the unnormalized
//! Voronoi estimator carries an owned-area fluctuation of variance ~ n^(−3/2)
//! from the boundary cells (measured directly with f ≡ 1). That term couples
//! to the integrand's boundary values, so (a) at n = 4096 the vor/mc σ ratio
//! for |xy|^0.1 is ≈ 1.1, short of the required 2, and (b) the fitted
//! log-variance slope for vor on |xy| is ≈ −1.5, short of the required −1.6.
//! The self-normalized filtered estimator cancels the term and meets the
//! corresponding targets; its companion numbers are printed alongside.

mod common;

use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use vorint::bench::{make_function, run_bench, BenchSpec, FunctionSpec, NOT_HOLDER_EXACT};
use vorint::estimators::{
    estimate_cvor, estimate_fvor, estimate_mc, estimate_vor, Integrand, Method,
};
use vorint::geom2d::{build_tessellation, clip_cell, Window};
use vorint::pointproc::{
    bound_reject_prob, sample_sppp, sample_uniform_window, solve_epsilon, CountMode, RngStream,
    SpppParams,
};
use vorint::render::{
    compute_mse, compute_mse_region, cornell_box, render_image, render_pixel, CameraFrame,
    ImageBuf, RenderJob, SamplerKind, Vec3, Weighting,
};

fn banner(k: u32, name: &str, pass: bool, details: &str) {
    println!(
        "ACCEPTANCE {:02} {:<28} {} — {}",
        k,
        name,
        if pass { "PASS" } else { "FAIL" },
        details
    );
}

fn replicate(
    f: &Integrand,
    method: Method,
    n: u64,
    reps: u64,
    seed: u64,
    mode: CountMode,
) -> Vec<(f64, f64)> {
    let w = Window::canonical();
    let params = SpppParams::new(n as f64, 1e-3).with_mode(mode);
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = RngStream::stream(seed, r);
            let report = match method {
                Method::Mc => estimate_mc(&mut rng, f, n, &w),
                Method::Vor => estimate_vor(&mut rng, f, &params, &w),
                Method::Fvor => estimate_fvor(&mut rng, f, &params, &w),
                Method::Cvor => estimate_cvor(&mut rng, f, n, &w),
            }
            .unwrap();
            (report.value, report.wall_time.as_secs_f64() * 1e3)
        })
        .collect()
}

fn values(samples: &[(f64, f64)]) -> Vec<f64> {
    samples.iter().map(|s| s.0).collect()
}

fn median_time_ms(samples: &[(f64, f64)]) -> f64 {
    let mut times: Vec<f64> = samples.iter().map(|s| s.1).collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times[times.len() / 2]
}

#[test]
fn c01_epsilon_bound_reproduction() {
    let started = Instant::now();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_vorint"))
        .args(["epsilon", "--n", "10000", "--delta", "0.001"])
        .output()
        .expect("binary runs");
    let elapsed = started.elapsed();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let eps = v["epsilon"].as_f64().unwrap();
    let bound = v["bound"].as_f64().unwrap();

    let in_band = (0.0250..=0.0260).contains(&eps);
    let bound_ok = bound <= 0.001 && bound_reject_prob(10_000.0, eps) <= 0.001;
    let fast = elapsed.as_secs_f64() < 1.0;
    banner(
        1,
        "epsilon bound",
        in_band && bound_ok && fast,
        &format!("eps={eps:.6}, bound={bound:.3e}, {:.0} ms", elapsed.as_secs_f64() * 1e3),
    );
    assert!(in_band, "epsilon {eps} outside [0.0250, 0.0260]");
    assert!(bound_ok, "bound {bound} above 1e-3");
    assert!(fast, "epsilon took {elapsed:?}");
}

#[test]
fn c02_unbiasedness_poisson_mode() {
    let f = make_function("holder", Some(1.0)).unwrap();
    let samples = replicate(&f, Method::Vor, 1_000, 10_000, 1002, CountMode::Poisson);
    let vals = values(&samples);
    let mean = common::mean(&vals);
    let se = common::standard_error(&vals);
    let dev = (mean - 0.0625).abs();
    let pass = dev <= 4.0 * se;
    banner(
        2,
        "unbiasedness (Poisson-N)",
        pass,
        &format!("mean={mean:.7}, |dev|={dev:.2e}, 4·SE={:.2e}", 4.0 * se),
    );
    assert!(pass, "vor mean {mean} deviates {dev} (4SE = {})", 4.0 * se);
}

#[test]
fn c03_variance_reduction_ordering() {
    let n = 4_096u64;
    let reps = 1_000u64;
    let mut all_pass = true;
    let mut lines = Vec::new();
    for (idx, (name, alpha)) in [
        ("holder", Some(1.0)),
        ("holder", Some(0.5)),
        ("holder", Some(0.1)),
        ("not_holder", None),
    ]
    .into_iter()
    .enumerate()
    {
        let f = make_function(name, alpha).unwrap();
        let seed = 3_000 + 10 * idx as u64;
        let mc = common::std_dev(&values(&replicate(&f, Method::Mc, n, reps, seed, CountMode::Fixed)));
        let vor =
            common::std_dev(&values(&replicate(&f, Method::Vor, n, reps, seed + 1, CountMode::Fixed)));
        let fvor = common::std_dev(&values(&replicate(
            &f,
            Method::Fvor,
            n,
            reps,
            seed + 2,
            CountMode::Fixed,
        )));
        let vor_ok = vor <= 0.5 * mc;
        let fvor_ok = fvor <= 0.5 * mc;
        all_pass &= vor_ok && fvor_ok;
        lines.push(format!(
            "{}: mc/vor={:.2}{} mc/fvor={:.2}{}",
            f.label,
            mc / vor,
            if vor_ok { "" } else { "(<2!)" },
            mc / fvor,
            if fvor_ok { "" } else { "(<2!)" },
        ));
    }
    let detail = lines.join("; ");
    banner(3, "variance ordering", all_pass, &detail);
    assert!(all_pass, "ratios below the 2× floor: {detail}");
}

#[test]
fn c04_convergence_rate_slopes() {
    let spec = BenchSpec {
        function: FunctionSpec {
            name: "holder".into(),
            alpha: Some(1.0),
        },
        methods: vec![Method::Mc, Method::Vor],
        n_values: vec![32, 64, 128, 256, 512, 1024, 2048, 4096],
        replications: 2_000,
        seed: 4_000,
        mode: CountMode::Fixed,
        delta: 1e-3,
    };
    let report = run_bench(&spec).unwrap();
    let mc_slope = report.slope(Method::Mc).unwrap();
    let vor_slope = report.slope(Method::Vor).unwrap();
    let mc_ok = (-1.15..=-0.85).contains(&mc_slope);
    let vor_ok = vor_slope <= -1.6;
    banner(
        4,
        "convergence-rate slopes",
        mc_ok && vor_ok,
        &format!("mc={mc_slope:.3} (need [−1.15,−0.85]), vor={vor_slope:.3} (need ≤ −1.6)"),
    );
    assert!(mc_ok, "mc slope {mc_slope} outside [-1.15, -0.85]");
    assert!(vor_ok, "vor slope {vor_slope} above -1.6");
}

#[test]
fn c05_clipped_estimator_bias() {
    let f = make_function("not_holder", None).unwrap();
    let n = 1_024u64;
    let reps = 5_000u64;
    let cvor = values(&replicate(&f, Method::Cvor, n, reps, 5_001, CountMode::Fixed));
    let vor = values(&replicate(&f, Method::Vor, n, reps, 5_002, CountMode::Fixed));
    let cvor_dev = (common::mean(&cvor) - NOT_HOLDER_EXACT).abs();
    let vor_dev = (common::mean(&vor) - NOT_HOLDER_EXACT).abs();
    let cvor_se = common::standard_error(&cvor);
    let vor_se = common::standard_error(&vor);
    let biased = cvor_dev > 5.0 * cvor_se;
    let unbiased = vor_dev <= 4.0 * vor_se;
    banner(
        5,
        "clipped-estimator bias",
        biased && unbiased,
        &format!(
            "cvor dev={:.1}·SE, vor dev={:.1}·SE",
            cvor_dev / cvor_se,
            vor_dev / vor_se
        ),
    );
    assert!(biased, "cvor bias {cvor_dev} within 5·SE {}", 5.0 * cvor_se);
    assert!(unbiased, "vor dev {vor_dev} above 4·SE {}", 4.0 * vor_se);
}

#[test]
fn c06_empirical_rejection_rate() {
    let n = 10_000.0;
    let eps = solve_epsilon(n, 1e-3);
    let params = SpppParams {
        intensity_n: n,
        confidence_delta: 1e-3,
        epsilon: eps,
        max_retries: 0,
        mode: CountMode::Fixed,
    };
    let w = Window::canonical();
    let draws = 10_000u64;
    let rejected: u64 = (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::stream(6_000, i);
            sample_sppp(&mut rng, &params, &w).is_err() as u64
        })
        .sum();
    let fraction = rejected as f64 / draws as f64;
    let pass = fraction <= 1e-3;
    banner(
        6,
        "rejection rate",
        pass,
        &format!("{rejected} rejections of {draws} ({fraction:.2e} ≤ 1e-3)"),
    );
    assert!(pass, "rejection fraction {fraction}");
}

#[test]
fn c07_geometry_oracle_equivalence() {
    let w = Window::canonical();
    let mut max_area_err: f64 = 0.0;
    for set in 0..500u64 {
        let mut rng = RngStream::stream(7_000, set);
        use rand::Rng as _;
        let n = 3 + (rng.gen::<u64>() % 198) as usize;
        let points = sample_uniform_window(&mut rng, &w, n);
        let tess = build_tessellation(&points).unwrap();
        let hull: std::collections::HashSet<usize> =
            common::hull_indices(&points).into_iter().collect();
        for (i, cell) in tess.cells().iter().enumerate() {
            assert_eq!(
                !cell.bounded,
                hull.contains(&i),
                "set {set}: cell {i} boundedness disagrees with the hull oracle"
            );
        }
        let total: f64 = tess.cells().iter().map(|c| clip_cell(c, &w).1).sum();
        max_area_err = max_area_err.max((total - w.area()).abs() / w.area());
    }
    let pass = max_area_err <= 1e-9;
    banner(
        7,
        "geometry oracle",
        pass,
        &format!("500 sets exact on boundedness, max Σ-area rel err {max_area_err:.2e}"),
    );
    assert!(pass, "area conservation error {max_area_err}");
}

#[test]
fn c08_mc_analytic_variance() {
    let f = make_function("holder", Some(1.0)).unwrap();
    let n = 4_096u64;
    let vals = values(&replicate(&f, Method::Mc, n, 10_000, 8_000, CountMode::Fixed));
    let measured = common::std_dev(&vals);
    let analytic = ((1.0 / 144.0 - 1.0 / 256.0) / n as f64).sqrt();
    let rel = (measured / analytic - 1.0).abs();
    let pass = rel <= 0.10;
    banner(
        8,
        "mc analytic σ",
        pass,
        &format!("measured={measured:.4e}, analytic={analytic:.4e}, rel dev={rel:.3}"),
    );
    assert!(pass, "mc σ off by {rel}");
}

// ------------------------------------------------------------------
// Rendering criteria share one 4096-spp stratified reference, cached on
// disk across runs (keyed by the scene fingerprint).

fn scene_fingerprint() -> u64 {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    include_str!("../assets/cornell_box.json").hash(&mut h);
    h.finish()
}

fn reference_image() -> &'static ImageBuf {
    static REF: OnceLock<ImageBuf> = OnceLock::new();
    REF.get_or_init(|| {
        let cache = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
            .join(format!("reference_4096_{:016x}.pfm", scene_fingerprint()));
        if let Ok(img) = ImageBuf::read_pfm(&cache) {
            if img.width == 128 && img.height == 128 {
                return img;
            }
        }
        let mut job = RenderJob::new(cornell_box(), 4_096);
        job.sampler = SamplerKind::Stratified;
        job.weighting = Weighting::Mc;
        job.nee = true;
        job.seed = 777;
        let (img, _) = render_image(&job).unwrap();
        let _ = img.write_pfm(&cache);
        img
    })
}

/// The ceiling light's rectangle: (level, [x0, z0], [x1, z1]).
fn light_rect(scene: &vorint::render::Scene) -> (f64, [f64; 2], [f64; 2]) {
    let light = &scene.surfaces[scene.emitters()[0]];
    match light.shape {
        vorint::render::Shape::Rect {
            level, min, max, ..
        } => (level, min, max),
        _ => unreachable!("the built-in light is a rect"),
    }
}

#[test]
fn c09_rendering_mse_ordering() {
    let reference = reference_image();

    let mut mc_job = RenderJob::new(cornell_box(), 256);
    mc_job.sampler = SamplerKind::Rnd;
    mc_job.weighting = Weighting::Mc;
    mc_job.nee = true;
    mc_job.seed = 31;
    let (mc_img, _) = render_image(&mc_job).unwrap();

    let mut vor_job = mc_job.clone();
    vor_job.sampler = SamplerKind::Sppp;
    vor_job.weighting = Weighting::Vor;
    let (vor_img, stats) = render_image(&vor_job).unwrap();

    let mse_mc = compute_mse(&mc_img, reference).unwrap();
    let mse_vor = compute_mse(&vor_img, reference).unwrap();
    let pass = mse_vor <= mse_mc / 1.5;
    banner(
        9,
        "render MSE ordering",
        pass,
        &format!(
            "mse(mc)={mse_mc:.5}, mse(vor)={mse_vor:.5}, ratio={:.2} (need ≥ 1.5), fallbacks={}",
            mse_mc / mse_vor,
            stats.fallback_pixels
        ),
    );

    // Difference-map structure: the improvement concentrates at the light
    // edges; a flat diffuse-wall region may show next to none.
    let scene = cornell_box();
    let frame = CameraFrame::new(&scene.camera);
    let (level, lmin, lmax) = light_rect(&scene);
    let light_region = project_rect(
        &frame,
        [
            Vec3::new(lmin[0], level, lmin[1]),
            Vec3::new(lmax[0], level, lmin[1]),
            Vec3::new(lmin[0], level, lmax[1]),
            Vec3::new(lmax[0], level, lmax[1]),
        ],
        2,
    );
    let flat_region = project_rect(
        &frame,
        [
            Vec3::new(0.35, 0.70, 1.0),
            Vec3::new(0.65, 0.70, 1.0),
            Vec3::new(0.35, 0.82, 1.0),
            Vec3::new(0.65, 0.82, 1.0),
        ],
        0,
    );
    let improvement = |r: (u32, u32, u32, u32)| {
        let mc = compute_mse_region(&mc_img, reference, r.0, r.1, r.2, r.3).unwrap();
        let vor = compute_mse_region(&vor_img, reference, r.0, r.1, r.2, r.3).unwrap();
        mc / vor
    };
    let edge_gain = improvement(light_region);
    let flat_gain = improvement(flat_region);
    let structure_ok = edge_gain > flat_gain;
    println!(
        "ACCEPTANCE 09b difference-map structure       {} — light-edge gain {edge_gain:.2} vs flat-wall gain {flat_gain:.2}",
        if structure_ok { "PASS" } else { "FAIL" }
    );

    assert!(pass, "mse(vor) {mse_vor} not ≤ mse(mc)/1.5 = {}", mse_mc / 1.5);
    assert!(structure_ok, "edge gain {edge_gain} ≤ flat gain {flat_gain}");
}

fn project_rect(frame: &CameraFrame, corners: [Vec3; 4], margin: u32) -> (u32, u32, u32, u32) {
    let mut x0 = f64::INFINITY;
    let mut y0 = f64::INFINITY;
    let mut x1 = f64::NEG_INFINITY;
    let mut y1 = f64::NEG_INFINITY;
    for c in corners {
        let (px, py) = frame.project(c).unwrap();
        x0 = x0.min(px);
        x1 = x1.max(px);
        y0 = y0.min(py);
        y1 = y1.max(py);
    }
    (
        (x0.floor() as u32).saturating_sub(margin),
        (y0.floor() as u32).saturating_sub(margin),
        (x1.ceil() as u32 + margin + 1).min(128),
        (y1.ceil() as u32 + margin + 1).min(128),
    )
}

#[test]
fn c10_light_edge_pixel_convergence() {
    // Designate the pixel whose window straddles the near edge of the
    // ceiling light along the light's central column.
    let scene = cornell_box();
    let frame = CameraFrame::new(&scene.camera);
    let (level, lmin, lmax) = light_rect(&scene);
    let mid_x = 0.5 * (lmin[0] + lmax[0]);
    let (px, py) = frame.project(Vec3::new(mid_x, level, lmin[1])).unwrap();
    let (px, py) = (px.round() as u32, py.round() as u32);
    // Sanity: sub-pixel rays on either side of the edge hit different
    // surfaces (light vs ceiling).
    let hits_light = |v: f64| {
        let (o, d) = frame.ray(px, py, 0.0, v);
        scene
            .intersect(o, d, f64::INFINITY)
            .map(|h| scene.surfaces[h.surface].material.is_emissive())
            .unwrap_or(false)
    };
    assert_ne!(
        hits_light(-0.49),
        hits_light(0.49),
        "pixel ({px},{py}) does not straddle the light edge"
    );

    let spp = 256;
    let seeds = 200u64;
    let make_job = |sampler, weighting| {
        let mut job = RenderJob::new(cornell_box(), spp);
        job.sampler = sampler;
        job.weighting = weighting;
        job.nee = true;
        job
    };
    let mut jobs = [
        make_job(SamplerKind::Rnd, Weighting::Mc),
        make_job(SamplerKind::Sppp, Weighting::Vor),
        make_job(SamplerKind::Sppp, Weighting::Fvor),
    ];

    // Interleave the three methods seed by seed so that CPU contention from
    // concurrently running tests hits them symmetrically, and compare
    // median per-call times.
    let mut vals = [Vec::new(), Vec::new(), Vec::new()];
    let mut times = [Vec::new(), Vec::new(), Vec::new()];
    for s in 0..seeds {
        for (k, job) in jobs.iter_mut().enumerate() {
            job.seed = s;
            let started = Instant::now();
            let c = render_pixel(job, px, py, false).color;
            times[k].push(started.elapsed().as_secs_f64());
            vals[k].push((c.x + c.y + c.z) / 3.0);
        }
    }
    let median = |v: &mut Vec<f64>| {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };
    let (mc_std, mc_time) = (common::std_dev(&vals[0]), median(&mut times[0]));
    let (vor_std, vor_time) = (common::std_dev(&vals[1]), median(&mut times[1]));
    let (fvor_std, fvor_time) = (common::std_dev(&vals[2]), median(&mut times[2]));

    let std_ok = vor_std < mc_std;
    // Variance attainable per unit CPU budget scales as var·t: smaller wins.
    let eff_mc = mc_std * mc_std * mc_time;
    let eff_vor = vor_std * vor_std * vor_time;
    let eff_fvor = fvor_std * fvor_std * fvor_time;
    let eff_ok = eff_vor < eff_mc && eff_fvor < eff_mc;
    banner(
        10,
        "light-edge pixel",
        std_ok && eff_ok,
        &format!(
            "pixel=({px},{py}); σ: mc={mc_std:.4}, vor={vor_std:.4}, fvor={fvor_std:.4}; var·t: mc={eff_mc:.3e}, vor={eff_vor:.3e}, fvor={eff_fvor:.3e}"
        ),
    );
    assert!(std_ok, "vor σ {vor_std} not below mc σ {mc_std}");
    assert!(
        eff_ok,
        "efficiency var·t — mc {eff_mc:.3e}, vor {eff_vor:.3e}, fvor {eff_fvor:.3e}"
    );
}

#[test]
fn c11_efficiency_honesty_analytic() {
    // For a cheap analytic integrand the tessellation cost dominates: mc
    // achieves lower variance per CPU second and the report must show it.
    // The two methods run back-to-back within each replication so that any
    // contention from concurrently running tests affects both timings.
    let f = make_function("holder", Some(1.0)).unwrap();
    let w = Window::canonical();
    let n = 4_096u64;
    let reps = 400u64;
    let params = SpppParams::new(n as f64, 1e-3);
    let pairs: Vec<((f64, f64), (f64, f64))> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = RngStream::stream(11_000, r);
            let mc = estimate_mc(&mut rng, &f, n, &w).unwrap();
            let mut rng = RngStream::stream(11_001, r);
            let vor = estimate_vor(&mut rng, &f, &params, &w).unwrap();
            (
                (mc.value, mc.wall_time.as_secs_f64() * 1e3),
                (vor.value, vor.wall_time.as_secs_f64() * 1e3),
            )
        })
        .collect();
    let mc: Vec<(f64, f64)> = pairs.iter().map(|p| p.0).collect();
    let vor: Vec<(f64, f64)> = pairs.iter().map(|p| p.1).collect();
    let var_mc = common::std_dev(&values(&mc)).powi(2);
    let var_vor = common::std_dev(&values(&vor)).powi(2);
    let t_mc = median_time_ms(&mc);
    let t_vor = median_time_ms(&vor);
    let pass = var_mc * t_mc < var_vor * t_vor;
    banner(
        11,
        "efficiency honesty",
        pass,
        &format!(
            "var·t: mc={:.3e}·{:.3}ms={:.3e}, vor={:.3e}·{:.3}ms={:.3e}",
            var_mc,
            t_mc,
            var_mc * t_mc,
            var_vor,
            t_vor,
            var_vor * t_vor
        ),
    );
    assert!(
        pass,
        "mc var·t {:.3e} not below vor {:.3e}",
        var_mc * t_mc,
        var_vor * t_vor
    );
}
