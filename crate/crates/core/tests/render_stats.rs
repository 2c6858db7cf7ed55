//! Statistical contracts of the renderer: NEE consistency, estimator
//! weightings agreeing in expectation, and constant-field exactness.

mod common;

use rayon::prelude::*;
use vorint::render::{
    cornell_box, render_pixel, Axis, Camera, Material, RenderJob, Rgb, SamplerKind, Scene, Shape,
    Surface, Weighting,
};

fn small_cornell(width: u32, height: u32) -> Scene {
    let mut scene = cornell_box();
    scene.camera.width = width;
    scene.camera.height = height;
    scene
}

/// Per-pixel means and standard errors over `seeds` independent renders.
fn pixel_stats(job: &RenderJob, seeds: u64) -> (Vec<Rgb>, Vec<Rgb>) {
    let (w, h) = (job.scene.camera.width, job.scene.camera.height);
    let per_seed: Vec<Vec<Rgb>> = (0..seeds)
        .into_par_iter()
        .map(|s| {
            let mut job = job.clone();
            job.seed = 1_000 + s;
            (0..w * h)
                .map(|i| render_pixel(&job, i % w, i / w, false).color)
                .collect()
        })
        .collect();
    let n = seeds as f64;
    let mut means = vec![Rgb::ZERO; (w * h) as usize];
    for run in &per_seed {
        for (m, c) in means.iter_mut().zip(run) {
            *m += *c;
        }
    }
    for m in &mut means {
        *m = *m / n;
    }
    let mut ses = vec![Rgb::ZERO; (w * h) as usize];
    for run in &per_seed {
        for ((se, c), m) in ses.iter_mut().zip(run).zip(&means) {
            let d = *c - *m;
            *se += d.mul_elem(d);
        }
    }
    for se in &mut ses {
        *se = Rgb::new(
            (se.x / (n - 1.0) / n).sqrt(),
            (se.y / (n - 1.0) / n).sqrt(),
            (se.z / (n - 1.0) / n).sqrt(),
        );
    }
    (means, ses)
}

#[test]
fn nee_on_and_off_agree_in_expectation() {
    // Both modes are unbiased for the same depth-truncated transport; with
    // 6×6×3 = 108 channels a couple of 3σ outliers are within expectation.
    let scene = small_cornell(6, 6);
    let mut base = RenderJob::new(scene, 48);
    base.max_depth = 3;
    base.clamp_factor = None;

    let mut with_nee = base.clone();
    with_nee.nee = true;
    let mut without = base.clone();
    without.nee = false;

    let (m1, s1) = pixel_stats(&with_nee, 500);
    let (m2, s2) = pixel_stats(&without, 500);

    let mut violations = 0;
    for i in 0..m1.len() {
        for ch in 0..3 {
            let d = (m1[i].axis(ch) - m2[i].axis(ch)).abs();
            let se = (s1[i].axis(ch).powi(2) + s2[i].axis(ch).powi(2)).sqrt();
            if d > 3.0 * se {
                violations += 1;
            }
        }
    }
    assert!(violations <= 3, "{violations} channels beyond 3σ of 108");
}

#[test]
fn weightings_share_the_same_mean() {
    // With the sppp sampler fixed, mean-weighted and Voronoi-weighted pixel
    // values estimate the same pixel integral.
    let scene = small_cornell(6, 6);
    let mut vor = RenderJob::new(scene, 64);
    vor.sampler = SamplerKind::Sppp;
    vor.weighting = Weighting::Vor;
    let mut mc = vor.clone();
    mc.weighting = Weighting::Mc;

    let (m1, s1) = pixel_stats(&vor, 400);
    let (m2, s2) = pixel_stats(&mc, 400);

    let mut violations = 0;
    for i in 0..m1.len() {
        for ch in 0..3 {
            let d = (m1[i].axis(ch) - m2[i].axis(ch)).abs();
            let se = (s1[i].axis(ch).powi(2) + s2[i].axis(ch).powi(2)).sqrt();
            if d > 4.0 * se {
                violations += 1;
            }
        }
    }
    assert!(violations <= 1, "{violations} channels beyond 4σ of 108");
}

fn emissive_shell(emission: [f64; 3]) -> Scene {
    let mut surfaces = Vec::new();
    for (axis, level) in [
        (Axis::X, 0.0),
        (Axis::X, 1.0),
        (Axis::Y, 0.0),
        (Axis::Y, 1.0),
        (Axis::Z, 0.0),
        (Axis::Z, 1.0),
    ] {
        surfaces.push(Surface {
            name: format!("{axis:?}{level}"),
            shape: Shape::Rect {
                axis,
                level,
                min: [0.0, 0.0],
                max: [1.0, 1.0],
            },
            material: Material {
                albedo: [0.0; 3],
                emission,
            },
        });
    }
    Scene {
        surfaces,
        camera: Camera {
            position: [0.5, 0.5, 0.5],
            look_at: [0.5, 0.5, 1.0],
            up: [0.0, 1.0, 0.0],
            fov_deg: 45.0,
            width: 3,
            height: 3,
        },
    }
}

#[test]
fn constant_field_is_exact_for_fvor_and_mean() {
    // Every ray sees the same emitter radiance, so the sampled field is
    // constant over the pixel: the mean and the self-normalized filtered
    // weighting reproduce it exactly per realization; the unnormalized
    // Voronoi weighting only in expectation.
    let emission = [2.0, 3.0, 4.0];
    let scene = emissive_shell(emission);
    let expected = Rgb::new(2.0, 3.0, 4.0);

    let mut job = RenderJob::new(scene, 32);
    job.sampler = SamplerKind::Sppp;
    job.nee = false;

    for weighting in [Weighting::Mc, Weighting::Fvor] {
        job.weighting = weighting;
        for seed in 0..6 {
            job.seed = seed;
            let out = render_pixel(&job, 1, 1, false);
            let d = out.color - expected;
            assert!(
                d.length() < 1e-9,
                "{weighting:?} seed {seed}: got {:?}",
                out.color
            );
        }
    }

    job.weighting = Weighting::Vor;
    let values: Vec<f64> = (0..400)
        .map(|seed| {
            job.seed = seed;
            render_pixel(&job, 1, 1, false).color.x
        })
        .collect();
    let mean = common::mean(&values);
    let se = common::standard_error(&values);
    assert!(se > 0.0, "vor on a constant field keeps area noise");
    assert!(
        (mean - 2.0).abs() <= 4.0 * se,
        "vor mean {mean} vs 2.0 (se {se})"
    );
}
