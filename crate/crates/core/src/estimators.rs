//! Integral estimators over a window: standard Monte Carlo plus the three
//! Voronoi reweightings.
//!
//! `vor` weights each interior sample by the area of its Voronoi cell in the
//! tessellation of interior ∪ strip nuclei; `fvor` keeps only cells lying
//! entirely within the stretched window and self-normalizes; `cvor` skips the
//! stretching entirely and clips cells at the window boundary (biased, kept
//! for comparison).

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom2d::{
    build_tessellation, cell_within, clip_cell, GeomError, Point2, Window,
};
use crate::pointproc::{
    sample_sppp_tessellated, sample_uniform_window, PointprocError, RngStream, SpppParams,
};

/// Resamples allowed when the integrand returns NaN/∞ at a sampled point
/// (measure-zero singularities) before giving up.
const NON_FINITE_RESAMPLE_CAP: u32 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mc,
    Vor,
    Fvor,
    Cvor,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Mc, Method::Vor, Method::Fvor, Method::Cvor];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Mc => "mc",
            Method::Vor => "vor",
            Method::Fvor => "fvor",
            Method::Cvor => "cvor",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mc" => Ok(Method::Mc),
            "vor" => Ok(Method::Vor),
            "fvor" => Ok(Method::Fvor),
            "cvor" => Ok(Method::Cvor),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// A real function with compact support on a window. `eval` must be
/// re-entrant; estimator replications run in parallel.
#[derive(Clone)]
pub struct Integrand {
    eval: Arc<dyn Fn(Point2) -> f64 + Send + Sync>,
    pub support: Window,
    /// Reference value of the integral, when known (used by tests/benches).
    pub exact_value: Option<f64>,
    /// Hölder exponent when the function satisfies a Hölder condition.
    pub holder_alpha: Option<f64>,
    pub label: String,
}

impl Integrand {
    pub fn new(
        label: impl Into<String>,
        support: Window,
        eval: impl Fn(Point2) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            support,
            exact_value: None,
            holder_alpha: None,
            label: label.into(),
        }
    }

    pub fn with_exact(mut self, exact: f64) -> Self {
        self.exact_value = Some(exact);
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.holder_alpha = Some(alpha);
        self
    }

    pub fn eval(&self, p: Point2) -> f64 {
        (self.eval)(p)
    }
}

impl std::fmt::Debug for Integrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Integrand")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("exact_value", &self.exact_value)
            .field("holder_alpha", &self.holder_alpha)
            .finish()
    }
}

/// One integral estimate with its sampling statistics.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub method: Method,
    pub value: f64,
    pub n_interior: u64,
    pub n_strip: u64,
    pub retries: u32,
    #[serde(rename = "wall_time_ms", serialize_with = "serialize_ms")]
    pub wall_time: Duration,
}

fn serialize_ms<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("rejection sampling exhausted after {retries} retries")]
    RejectionExhausted { retries: u32 },
    #[error("no interior cell lies within the stretched window after {retries} retries")]
    EmptyFilter { retries: u32 },
    #[error("integrand returned a non-finite value {cap} times in a row")]
    NonFiniteSample { cap: u32 },
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

impl From<PointprocError> for EstimatorError {
    fn from(e: PointprocError) -> Self {
        match e {
            PointprocError::RejectionExhausted { retries } => {
                EstimatorError::RejectionExhausted { retries }
            }
            PointprocError::Geometry(g) => EstimatorError::Geometry(g),
        }
    }
}

/// Standard Monte Carlo: `|W| · (1/n) Σ f(xᵢ)` at n i.i.d. uniform points.
/// The window-area factor keeps the estimator correct off the canonical
/// |W| = 1 setup.
pub fn estimate_mc(
    rng: &mut RngStream,
    f: &Integrand,
    n: u64,
    w: &Window,
) -> Result<EstimateReport, EstimatorError> {
    assert!(n >= 1, "mc requires n ≥ 1");
    let start = Instant::now();
    let mut sum = 0.0;
    for _ in 0..n {
        // A non-finite value sits on a measure-zero set; redraw the point.
        let mut redraws = 0;
        let fx = loop {
            let p = sample_uniform_window(rng, w, 1)[0];
            let fx = f.eval(p);
            if fx.is_finite() {
                break fx;
            }
            redraws += 1;
            if redraws >= NON_FINITE_RESAMPLE_CAP {
                return Err(EstimatorError::NonFiniteSample {
                    cap: NON_FINITE_RESAMPLE_CAP,
                });
            }
        };
        sum += fx;
    }
    Ok(EstimateReport {
        method: Method::Mc,
        value: w.area() * sum / n as f64,
        n_interior: n,
        n_strip: 0,
        retries: 0,
        wall_time: start.elapsed(),
    })
}

/// Voronoi estimator: `Σ f(x)·v(x)` over interior nuclei, cells taken from
/// the tessellation of interior ∪ strip. Cells are not clipped; strip nuclei
/// constrain the tessellation but receive no function evaluations.
pub fn estimate_vor(
    rng: &mut RngStream,
    f: &Integrand,
    params: &SpppParams,
    w: &Window,
) -> Result<EstimateReport, EstimatorError> {
    let start = Instant::now();
    let mut retries = 0u32;
    for _ in 0..=NON_FINITE_RESAMPLE_CAP {
        let (cfg, tess) = sample_sppp_tessellated(rng, params, w)?;
        retries += cfg.retries_used;
        let Some(tess) = tess else {
            return Ok(report(Method::Vor, 0.0, &cfg, retries, start));
        };
        let mut sum = 0.0;
        let mut finite = true;
        for (i, x) in cfg.interior.iter().enumerate() {
            let fx = f.eval(*x);
            if !fx.is_finite() {
                finite = false;
                break;
            }
            sum += fx * tess.cell(i).area;
        }
        if finite {
            return Ok(report(Method::Vor, sum, &cfg, retries, start));
        }
        retries += 1;
    }
    Err(EstimatorError::NonFiniteSample {
        cap: NON_FINITE_RESAMPLE_CAP,
    })
}

/// Filtered Voronoi estimator: restricts to interior nuclei whose cell lies
/// entirely within the stretched window, then returns the self-normalized
/// weighted mean scaled by the window area.
pub fn estimate_fvor(
    rng: &mut RngStream,
    f: &Integrand,
    params: &SpppParams,
    w: &Window,
) -> Result<EstimateReport, EstimatorError> {
    let start = Instant::now();
    let mut retries = 0u32;
    let mut empty_filter_seen = false;
    for _ in 0..=NON_FINITE_RESAMPLE_CAP {
        let (cfg, tess) = sample_sppp_tessellated(rng, params, w)?;
        retries += cfg.retries_used;
        let Some(tess) = tess else {
            retries += 1;
            empty_filter_seen = true;
            continue;
        };
        let mut num = 0.0;
        let mut den = 0.0;
        let mut finite = true;
        let mut any = false;
        for (i, x) in cfg.interior.iter().enumerate() {
            let cell = tess.cell(i);
            if !cell_within(cell, &cfg.stretched) {
                continue;
            }
            any = true;
            let fx = f.eval(*x);
            if !fx.is_finite() {
                finite = false;
                break;
            }
            num += fx * cell.area;
            den += cell.area;
        }
        if !any {
            // An empty filter would corrupt the statistics as a zero
            // estimate; count it as a retry instead.
            retries += 1;
            empty_filter_seen = true;
            continue;
        }
        if finite {
            return Ok(report(Method::Fvor, w.area() * num / den, &cfg, retries, start));
        }
        retries += 1;
    }
    if empty_filter_seen {
        Err(EstimatorError::EmptyFilter { retries })
    } else {
        Err(EstimatorError::NonFiniteSample {
            cap: NON_FINITE_RESAMPLE_CAP,
        })
    }
}

/// Clipped Voronoi estimator: no stretching; nuclei are drawn in the window
/// only and each `f(x)` is weighted by |C(x) ∩ W|. Biased by construction.
pub fn estimate_cvor(
    rng: &mut RngStream,
    f: &Integrand,
    n: u64,
    w: &Window,
) -> Result<EstimateReport, EstimatorError> {
    assert!(n >= 1, "cvor requires n ≥ 1");
    let start = Instant::now();
    for retry in 0..=NON_FINITE_RESAMPLE_CAP {
        let interior = sample_uniform_window(rng, w, n as usize);
        let values: Vec<f64> = interior.iter().map(|p| f.eval(*p)).collect();
        if values.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let tess = build_tessellation(&interior)?;
        let mut sum = 0.0;
        for (cell, fx) in tess.cells().iter().zip(&values) {
            let (_, area) = clip_cell(cell, w);
            sum += fx * area;
        }
        return Ok(EstimateReport {
            method: Method::Cvor,
            value: sum,
            n_interior: n,
            n_strip: 0,
            retries: retry,
            wall_time: start.elapsed(),
        });
    }
    Err(EstimatorError::NonFiniteSample {
        cap: NON_FINITE_RESAMPLE_CAP,
    })
}

fn report(
    method: Method,
    value: f64,
    cfg: &crate::pointproc::PointConfig,
    retries: u32,
    start: Instant,
) -> EstimateReport {
    EstimateReport {
        method,
        value,
        n_interior: cfg.interior.len() as u64,
        n_strip: cfg.strip.len() as u64,
        retries,
        wall_time: start.elapsed(),
    }
}
