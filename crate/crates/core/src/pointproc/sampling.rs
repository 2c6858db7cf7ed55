//! Poisson counts and uniform positions on windows and strips.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::RngStream;
use crate::geom2d::{Point2, Window};

/// Draws from Poisson(λ). Exact sampling only (inversion for small λ,
/// rejection for large λ), so empirical pmf checks are meaningful.
pub fn sample_poisson_count(rng: &mut RngStream, lambda: f64) -> u64 {
    assert!(lambda.is_finite() && lambda >= 0.0, "lambda must be finite and ≥ 0");
    if lambda == 0.0 {
        return 0;
    }
    let dist = Poisson::new(lambda).expect("positive finite lambda");
    dist.sample(rng) as u64
}

/// `count` i.i.d. uniform points in the window.
pub fn sample_uniform_window(rng: &mut RngStream, w: &Window, count: usize) -> Vec<Point2> {
    (0..count).map(|_| uniform_in(rng, w)).collect()
}

fn uniform_in(rng: &mut RngStream, w: &Window) -> Point2 {
    let x = w.x_min() + rng.gen::<f64>() * (2.0 * w.half_extent);
    let y = w.y_min() + rng.gen::<f64>() * (2.0 * w.half_extent);
    Point2::new(x, y)
}

/// `count` i.i.d. uniform points in the frame `outer ∖ inner`, sampled by
/// area-weighted decomposition into four rectangles (exact, no rejection).
pub fn sample_uniform_strip(
    rng: &mut RngStream,
    outer: &Window,
    inner: &Window,
    count: usize,
) -> Vec<Point2> {
    assert!(
        outer.center == inner.center && outer.half_extent > inner.half_extent,
        "strip requires concentric windows with outer strictly larger"
    );
    // Bottom and top slabs span the full outer width; left and right fill
    // the remaining side bands.
    let (ox0, ox1) = (outer.x_min(), outer.x_max());
    let (oy0, oy1) = (outer.y_min(), outer.y_max());
    let (ix0, ix1) = (inner.x_min(), inner.x_max());
    let (iy0, iy1) = (inner.y_min(), inner.y_max());
    let rects = [
        (ox0, ox1, oy0, iy0), // bottom
        (ox0, ox1, iy1, oy1), // top
        (ox0, ix0, iy0, iy1), // left
        (ix1, ox1, iy0, iy1), // right
    ];
    let areas: Vec<f64> = rects
        .iter()
        .map(|&(x0, x1, y0, y1)| (x1 - x0) * (y1 - y0))
        .collect();
    let total: f64 = areas.iter().sum();

    (0..count)
        .map(|_| {
            let mut pick = rng.gen::<f64>() * total;
            let mut idx = 0;
            for (i, a) in areas.iter().enumerate() {
                if pick < *a || i == areas.len() - 1 {
                    idx = i;
                    break;
                }
                pick -= a;
            }
            let (x0, x1, y0, y1) = rects[idx];
            Point2::new(
                x0 + rng.gen::<f64>() * (x1 - x0),
                y0 + rng.gen::<f64>() * (y1 - y0),
            )
        })
        .collect()
}
