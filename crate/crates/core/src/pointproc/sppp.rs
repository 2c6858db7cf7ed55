//! The stretched-window construction, its ε solver, and tessellation-validity
//! rejection.

use serde::{Deserialize, Serialize};

use super::{sample_poisson_count, sample_uniform_strip, sample_uniform_window};
use super::{PointprocError, RngStream};
use crate::geom2d::{build_tessellation, Point2, Tessellation, Window};

/// Upper bound `4π n² ε² e^(−π n ε²)` on the probability that some nucleus
/// inside the window keeps an unbounded (or ε-overreaching) Voronoi cell.
pub fn bound_reject_prob(n: f64, epsilon: f64) -> f64 {
    let t = std::f64::consts::PI * n * epsilon * epsilon;
    4.0 * std::f64::consts::PI * n * n * epsilon * epsilon * (-t).exp()
}

/// Smallest ε on the decreasing branch (ε ≥ √(1/(πn)), where the bound is
/// monotone in ε) with `bound_reject_prob(n, ε) ≤ delta`, by bisection to
/// 1e−10. The bound is not monotone below the branch start — its vanishing as
/// ε → 0 is an artifact of the inequality — so only the large-margin branch
/// is searched. If `delta` already exceeds the bound at the branch start
/// (impossible for n ≥ 1, where that value is 4n/e), the branch start is
/// returned.
pub fn solve_epsilon(n: f64, delta: f64) -> f64 {
    assert!(n > 0.0 && n.is_finite(), "n must be positive");
    assert!(delta > 0.0 && delta < 1.0, "delta must be in (0, 1)");
    let branch_start = (1.0 / (std::f64::consts::PI * n)).sqrt();
    if bound_reject_prob(n, branch_start) <= delta {
        return branch_start;
    }
    let mut lo = branch_start;
    let mut hi = branch_start;
    while bound_reject_prob(n, hi) > delta {
        hi *= 2.0;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if bound_reject_prob(n, mid) <= delta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Strip point count `⌊n(4ε + 4ε²)⌋` preserving the interior density on the
/// canonical window.
pub fn strip_count(n: f64, epsilon: f64) -> u64 {
    assert!(n > 0.0 && epsilon >= 0.0);
    (n * (4.0 * epsilon + 4.0 * epsilon * epsilon)).floor() as u64
}

/// Whether point counts are fixed (binomial framing: exactly n interior
/// points) or drawn from Poisson distributions (the point-process framing).
/// Benchmarks default to fixed counts; unbiasedness checks use Poisson.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    #[default]
    Fixed,
    Poisson,
}

impl std::str::FromStr for CountMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(CountMode::Fixed),
            "poisson" => Ok(CountMode::Poisson),
            other => Err(format!("unknown count mode `{other}`")),
        }
    }
}

/// Parameters of the stretched-window sampler.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SpppParams {
    /// Intensity: expected points per unit area.
    pub intensity_n: f64,
    /// Target bound on the rejection probability.
    pub confidence_delta: f64,
    /// Stretch margin, window units.
    pub epsilon: f64,
    /// Resamples allowed before giving up.
    pub max_retries: u32,
    pub mode: CountMode,
}

impl SpppParams {
    pub const DEFAULT_DELTA: f64 = 1e-3;
    pub const DEFAULT_MAX_RETRIES: u32 = 100;

    /// Parameters with ε solved for the given confidence level.
    pub fn new(intensity_n: f64, confidence_delta: f64) -> Self {
        Self {
            intensity_n,
            confidence_delta,
            epsilon: solve_epsilon(intensity_n, confidence_delta),
            max_retries: Self::DEFAULT_MAX_RETRIES,
            mode: CountMode::Fixed,
        }
    }

    pub fn with_mode(mut self, mode: CountMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_max_retries(mut self, max_retries: u32) -> Self {
        self.max_retries = max_retries;
        self
    }
}

/// One SPPP realization: interior nuclei (used for sampling the integrand)
/// and strip nuclei (used only to constrain the tessellation).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointConfig {
    pub window: Window,
    pub stretched: Window,
    pub interior: Vec<Point2>,
    pub strip: Vec<Point2>,
    pub retries_used: u32,
}

impl PointConfig {
    /// Interior followed by strip; the tessellation input order.
    pub fn all_points(&self) -> Vec<Point2> {
        let mut pts = Vec::with_capacity(self.interior.len() + self.strip.len());
        pts.extend_from_slice(&self.interior);
        pts.extend_from_slice(&self.strip);
        pts
    }

    pub fn epsilon(&self) -> f64 {
        self.stretched.half_extent - self.window.half_extent
    }
}

fn draw_config(rng: &mut RngStream, params: &SpppParams, w: &Window) -> PointConfig {
    let stretched = w.stretched(params.epsilon);
    // Strip area as a polynomial in ε; equals 4ε + 4ε² on the canonical window.
    let strip_area =
        8.0 * w.half_extent * params.epsilon + 4.0 * params.epsilon * params.epsilon;
    let (n_interior, n_strip) = match params.mode {
        CountMode::Fixed => (
            (params.intensity_n * w.area()).round() as u64,
            (params.intensity_n * strip_area).floor() as u64,
        ),
        CountMode::Poisson => (
            sample_poisson_count(rng, params.intensity_n * w.area()),
            sample_poisson_count(rng, params.intensity_n * strip_area),
        ),
    };
    let interior = sample_uniform_window(rng, w, n_interior as usize);
    let strip = sample_uniform_strip(rng, &stretched, w, n_strip as usize);
    PointConfig {
        window: *w,
        stretched,
        interior,
        strip,
        retries_used: 0,
    }
}

/// True iff every Voronoi cell of the combined configuration whose nucleus
/// lies inside the window is bounded (the rejection criterion).
pub fn accept_config(cfg: &PointConfig) -> bool {
    accepted(cfg, None)
}

/// Stricter variant that additionally requires those cells to have
/// circumscribed radius at most ε (the proxy event the margin bound
/// controls). Not used by default.
pub fn accept_config_strict(cfg: &PointConfig) -> bool {
    accepted(cfg, Some(cfg.epsilon()))
}

fn accepted(cfg: &PointConfig, max_circ: Option<f64>) -> bool {
    if cfg.interior.is_empty() {
        return true;
    }
    let points = cfg.all_points();
    match build_tessellation(&points) {
        Ok(tess) => tessellation_accepted(&tess, cfg.interior.len(), max_circ),
        Err(_) => false,
    }
}

fn tessellation_accepted(tess: &Tessellation, n_interior: usize, max_circ: Option<f64>) -> bool {
    tess.cells()[..n_interior].iter().all(|c| {
        c.bounded
            && match max_circ {
                Some(eps) => c.circ_radius <= eps,
                None => true,
            }
    })
}

/// Draws an accepted configuration, resampling both point sets with fresh
/// randomness on rejection.
pub fn sample_sppp(
    rng: &mut RngStream,
    params: &SpppParams,
    w: &Window,
) -> Result<PointConfig, PointprocError> {
    sample_sppp_tessellated(rng, params, w).map(|(cfg, _)| cfg)
}

/// As [`sample_sppp`], additionally returning the tessellation of
/// interior ∪ strip that witnessed acceptance, so estimators need not
/// rebuild it. `None` only when the configuration has no points at all
/// (possible in Poisson mode at tiny intensities).
pub fn sample_sppp_tessellated(
    rng: &mut RngStream,
    params: &SpppParams,
    w: &Window,
) -> Result<(PointConfig, Option<Tessellation>), PointprocError> {
    for attempt in 0..=params.max_retries {
        let mut cfg = draw_config(rng, params, w);
        cfg.retries_used = attempt;
        if cfg.interior.is_empty() && cfg.strip.is_empty() {
            return Ok((cfg, None));
        }
        let points = cfg.all_points();
        let tess = build_tessellation(&points)?;
        if tessellation_accepted(&tess, cfg.interior.len(), None) {
            return Ok((cfg, Some(tess)));
        }
    }
    Err(PointprocError::RejectionExhausted {
        retries: params.max_retries,
    })
}
