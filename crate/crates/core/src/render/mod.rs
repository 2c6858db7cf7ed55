//! Minimal physically based path tracer with a sampler/integrator split:
//! sub-pixel sample positions come from a pluggable sampler (uniform,
//! stratified, or the stretched-window point process) and the per-pixel
//! estimate combines the traced radiances by mean, Voronoi, or filtered
//! Voronoi weighting over the pixel window.

mod image;
mod scene;
mod trace;
mod vec3;

pub use image::{compute_mse, compute_mse_region, ImageBuf};
pub use scene::{cornell_box, Axis, Camera, CameraFrame, Material, Scene, Shape, Surface};
pub use trace::trace_radiance;
pub use vec3::{Rgb, Vec3};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geom2d::{cell_within, Point2, Window};
use crate::pointproc::{
    sample_sppp_tessellated, sample_uniform_window, RngStream, SpppParams,
};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("invalid scene: {reason}")]
    BadScene { reason: String },
    #[error("invalid image: {reason}")]
    BadImage { reason: String },
    #[error("resolution mismatch: {a:?} vs {b:?}")]
    ResolutionMismatch { a: (u32, u32), b: (u32, u32) },
    #[error("invalid render job: {reason}")]
    BadJob { reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Rnd,
    Stratified,
    Sppp,
}

impl std::str::FromStr for SamplerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rnd" => Ok(SamplerKind::Rnd),
            "stratified" => Ok(SamplerKind::Stratified),
            "sppp" => Ok(SamplerKind::Sppp),
            other => Err(format!("unknown sampler `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Mc,
    Vor,
    Fvor,
}

impl std::str::FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mc" => Ok(Weighting::Mc),
            "vor" => Ok(Weighting::Vor),
            "fvor" => Ok(Weighting::Fvor),
            other => Err(format!("unknown weighting `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RenderJob {
    pub scene: Scene,
    /// Samples per pixel; plays the role of the intensity on the pixel window.
    pub spp: u32,
    pub sampler: SamplerKind,
    pub weighting: Weighting,
    pub max_depth: u32,
    pub nee: bool,
    pub seed: u64,
    /// Radiance samples are capped at `factor × max emitter radiance` before
    /// weighting, identically for every method; `None` disables clamping.
    pub clamp_factor: Option<f64>,
    /// Confidence level for the stretched-window margin.
    pub delta: f64,
}

impl RenderJob {
    pub fn new(scene: Scene, spp: u32) -> Self {
        Self {
            scene,
            spp,
            sampler: SamplerKind::Rnd,
            weighting: Weighting::Mc,
            max_depth: 8,
            nee: true,
            seed: 0,
            clamp_factor: Some(10.0),
            delta: SpppParams::DEFAULT_DELTA,
        }
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        self.scene.validate()?;
        if self.spp == 0 || self.max_depth == 0 {
            return Err(RenderError::BadJob {
                reason: "spp and max_depth must be ≥ 1".into(),
            });
        }
        if matches!(self.weighting, Weighting::Vor | Weighting::Fvor)
            && self.sampler != SamplerKind::Sppp
        {
            return Err(RenderError::BadJob {
                reason: "vor/fvor weighting requires the sppp sampler".into(),
            });
        }
        Ok(())
    }

    fn clamp_cap(&self) -> f64 {
        self.clamp_factor
            .map(|f| f * self.scene.max_emission())
            .unwrap_or(f64::INFINITY)
    }
}

/// One path-traced sample: sub-pixel position in the canonical window plus
/// its (clamped) radiance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RadianceSample {
    pub uv: [f64; 2],
    pub rgb: [f64; 3],
    /// Weight applied by the estimator (cell area, or 1/n under the mean).
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PixelDump {
    pub pixel: [u32; 2],
    pub weighting: Weighting,
    pub fallback: bool,
    pub samples: Vec<RadianceSample>,
    pub strip_uv: Vec<[f64; 2]>,
}

#[derive(Clone, Debug)]
pub struct PixelOutcome {
    pub color: Rgb,
    /// Set when the pixel fell back to mean weighting (rejection exhausted,
    /// an empty filter, or a degenerate single-sample tessellation).
    pub fallback: bool,
    pub dump: Option<PixelDump>,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct RenderStats {
    pub fallback_pixels: u32,
}

/// Renders one pixel on its own RNG stream derived from (seed, pixel index).
pub fn render_pixel(job: &RenderJob, px: u32, py: u32, want_dump: bool) -> PixelOutcome {
    let frame = CameraFrame::new(&job.scene.camera);
    render_pixel_with_frame(job, &frame, px, py, want_dump)
}

fn render_pixel_with_frame(
    job: &RenderJob,
    frame: &CameraFrame,
    px: u32,
    py: u32,
    want_dump: bool,
) -> PixelOutcome {
    let pixel_index = py as u64 * job.scene.camera.width as u64 + px as u64;
    let mut rng = RngStream::stream(job.seed, pixel_index);
    let w = Window::canonical();
    let cap = job.clamp_cap();

    // Sample positions; for sppp also the tessellation and strip layout.
    let degenerate = job.spp == 1 && job.weighting != Weighting::Mc;
    let (positions, sppp, rejected) = if job.sampler == SamplerKind::Sppp && !degenerate {
        let params = SpppParams::new(job.spp as f64, job.delta);
        match sample_sppp_tessellated(&mut rng, &params, &w) {
            Ok((cfg, Some(tess))) => (cfg.interior.clone(), Some((cfg, tess)), false),
            // Rejection exhausted (no-points cannot happen in fixed-n mode
            // with spp ≥ 1): fall back to plain mean sampling.
            _ => (
                sample_uniform_window(&mut rng, &w, job.spp as usize),
                None,
                true,
            ),
        }
    } else {
        let pts = match job.sampler {
            SamplerKind::Stratified => stratified_positions(&mut rng, &w, job.spp),
            _ => sample_uniform_window(&mut rng, &w, job.spp as usize),
        };
        (pts, None, false)
    };

    let radiances: Vec<Rgb> = positions
        .iter()
        .map(|uv| {
            let (o, d) = frame.ray(px, py, uv.x, uv.y);
            trace_radiance(&mut rng, &job.scene, o, d, job.max_depth, job.nee).min_elem(cap)
        })
        .collect();

    let mean = |radiances: &[Rgb]| {
        let mut acc = Rgb::ZERO;
        for r in radiances {
            acc += *r;
        }
        acc / radiances.len().max(1) as f64
    };

    let uniform_weights = || vec![1.0 / radiances.len().max(1) as f64; radiances.len()];

    let (color, weights, fallback) = match (&sppp, job.weighting) {
        (_, Weighting::Mc) | (None, _) => {
            (mean(&radiances), uniform_weights(), rejected || degenerate)
        }
        (Some((_, tess)), Weighting::Vor) => {
            let mut acc = Rgb::ZERO;
            let mut weights = Vec::with_capacity(radiances.len());
            for (i, r) in radiances.iter().enumerate() {
                let v = tess.cell(i).area;
                acc += *r * v;
                weights.push(v);
            }
            (acc, weights, false)
        }
        (Some((cfg, tess)), Weighting::Fvor) => {
            let mut acc = Rgb::ZERO;
            let mut total = 0.0;
            let mut weights = vec![0.0; radiances.len()];
            for (i, r) in radiances.iter().enumerate() {
                let cell = tess.cell(i);
                if cell_within(cell, &cfg.stretched) {
                    acc += *r * cell.area;
                    total += cell.area;
                    weights[i] = cell.area;
                }
            }
            if total > 0.0 {
                (acc / total, weights, false)
            } else {
                // Empty filter: report the mean, flagged.
                (mean(&radiances), uniform_weights(), true)
            }
        }
    };

    let dump = want_dump.then(|| PixelDump {
        pixel: [px, py],
        weighting: job.weighting,
        fallback,
        samples: positions
            .iter()
            .zip(&radiances)
            .zip(&weights)
            .map(|((uv, rgb), weight)| RadianceSample {
                uv: [uv.x, uv.y],
                rgb: rgb.to_array(),
                weight: *weight,
            })
            .collect(),
        strip_uv: sppp
            .as_ref()
            .map(|(cfg, _)| cfg.strip.iter().map(|p| [p.x, p.y]).collect())
            .unwrap_or_default(),
    });

    PixelOutcome {
        color,
        fallback,
        dump,
    }
}

/// Jittered k×k strata (k = ⌊√spp⌋) topped up with uniform samples when spp
/// is not a perfect square.
fn stratified_positions(rng: &mut RngStream, w: &Window, spp: u32) -> Vec<Point2> {
    use rand::Rng as _;
    let k = (spp as f64).sqrt().floor() as u32;
    let mut pts = Vec::with_capacity(spp as usize);
    let cell = 2.0 * w.half_extent / k as f64;
    for i in 0..k {
        for j in 0..k {
            pts.push(Point2::new(
                w.x_min() + (i as f64 + rng.gen::<f64>()) * cell,
                w.y_min() + (j as f64 + rng.gen::<f64>()) * cell,
            ));
        }
    }
    pts.extend(sample_uniform_window(rng, w, (spp - k * k) as usize));
    pts
}

/// Full-frame render; pixels are independent work items on per-pixel RNG
/// streams, so the image is deterministic given the seed regardless of the
/// thread count.
pub fn render_image(job: &RenderJob) -> Result<(ImageBuf, RenderStats), RenderError> {
    job.validate()?;
    let frame = CameraFrame::new(&job.scene.camera);
    let (w, h) = (job.scene.camera.width, job.scene.camera.height);
    let outcomes: Vec<PixelOutcome> = (0..(w as u64 * h as u64))
        .into_par_iter()
        .map(|idx| {
            let (px, py) = ((idx % w as u64) as u32, (idx / w as u64) as u32);
            render_pixel_with_frame(job, &frame, px, py, false)
        })
        .collect();
    let stats = RenderStats {
        fallback_pixels: outcomes.iter().filter(|o| o.fallback).count() as u32,
    };
    let pixels: Vec<Rgb> = outcomes.into_iter().map(|o| o.color).collect();
    Ok((ImageBuf::from_pixels(w, h, &pixels), stats))
}
