//! Path tracing with cosine-weighted Lambertian bounces and optional next
//! event estimation.
//!
//! `max_depth` counts path segments. Without NEE, emission is collected at
//! every vertex reached by segments 1..=D. With NEE, emission is collected
//! only at the first vertex and light connections are made from vertices
//! 1..=D−1, so both modes estimate exactly the same depth-D-truncated
//! transport (no double counting: the bounce ray's emitter hits are
//! suppressed where a light connection already covers them).

use rand::Rng as _;

use super::scene::{Hit, Scene, RAY_T_MIN};
use super::vec3::{Rgb, Vec3};
use crate::pointproc::RngStream;

pub fn trace_radiance(
    rng: &mut RngStream,
    scene: &Scene,
    origin: Vec3,
    dir: Vec3,
    max_depth: u32,
    nee: bool,
) -> Rgb {
    assert!(max_depth >= 1);
    let emitters = scene.emitters();
    let mut radiance = Rgb::ZERO;
    let mut throughput = Rgb::ONE;
    let mut o = origin;
    let mut d = dir;

    for depth in 1..=max_depth {
        let Some(hit) = scene.intersect(o, d, f64::INFINITY) else {
            break; // escaped: black background
        };
        let mat = &scene.surfaces[hit.surface].material;

        if depth == 1 || !nee {
            radiance += throughput.mul_elem(mat.emission_rgb());
        }

        let albedo = mat.albedo_rgb();
        if nee && depth < max_depth && albedo.max_component() > 0.0 {
            let direct = sample_light(rng, scene, &emitters, &hit);
            radiance += throughput
                .mul_elem(albedo)
                .mul_elem(direct)
                * std::f64::consts::FRAC_1_PI;
        }

        if depth == max_depth {
            break;
        }
        throughput = throughput.mul_elem(albedo);
        if throughput.max_component() <= 0.0 {
            break;
        }
        d = cosine_hemisphere(rng, hit.normal);
        o = hit.point + hit.normal * RAY_T_MIN;
    }
    radiance
}

/// Area-sampled light connection from `hit`. Returns L_e · G · A · k (for k
/// uniformly chosen emitters); the caller applies the BRDF factor ρ/π.
fn sample_light(rng: &mut RngStream, scene: &Scene, emitters: &[usize], hit: &Hit) -> Rgb {
    if emitters.is_empty() {
        return Rgb::ZERO;
    }
    let pick = if emitters.len() == 1 {
        0
    } else {
        rng.gen_range(0..emitters.len())
    };
    let light_idx = emitters[pick];
    let light = &scene.surfaces[light_idx];
    let Some(area) = light.shape.rect_area() else {
        return Rgb::ZERO;
    };
    let (q, light_n) = light
        .shape
        .rect_point(rng.gen::<f64>(), rng.gen::<f64>())
        .expect("emitters are rects");

    let to_light = q - hit.point;
    let dist2 = to_light.dot(to_light);
    if dist2 <= 0.0 {
        return Rgb::ZERO;
    }
    let dist = dist2.sqrt();
    let wi = to_light / dist;
    let cos_surf = hit.normal.dot(wi);
    // Emitters are two-sided, matching the emission term seen by bounce rays.
    let cos_light = light_n.dot(wi).abs();
    if cos_surf <= 0.0 || cos_light <= 0.0 {
        return Rgb::ZERO;
    }
    let shadow_origin = hit.point + hit.normal * RAY_T_MIN;
    if scene.occluded(shadow_origin, wi, dist, light_idx) {
        return Rgb::ZERO;
    }
    light.material.emission_rgb() * (cos_surf * cos_light / dist2 * area * emitters.len() as f64)
}

/// Cosine-weighted direction about `n`; with the Lambertian BRDF ρ/π and
/// pdf cosθ/π the bounce weight is exactly ρ.
fn cosine_hemisphere(rng: &mut RngStream, n: Vec3) -> Vec3 {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    let r = u1.sqrt();
    let phi = 2.0 * std::f64::consts::PI * u2;
    let local = Vec3::new(r * phi.cos(), r * phi.sin(), (1.0 - u1).max(0.0).sqrt());
    let (t, b) = orthonormal_basis(n);
    (t * local.x + b * local.y + n * local.z).normalized()
}

/// Branchless frame construction (Duff et al. style).
fn orthonormal_basis(n: Vec3) -> (Vec3, Vec3) {
    let sign = 1.0_f64.copysign(n.z);
    let a = -1.0 / (sign + n.z);
    let b = n.x * n.y * a;
    (
        Vec3::new(1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x),
        Vec3::new(b, sign + n.y * n.y * a, -n.y),
    )
}
