//! Replication benchmark harness: runs estimators over a grid of sample
//! counts, reports mean/σ/timing per cell and a log–log variance slope per
//! method.

mod functions;
mod report;

pub use functions::{holder_exact, make_function, DISCONTINUITY_EXACT, NOT_HOLDER_EXACT};
pub use report::{emit_gnuplot, emit_report};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimators::{
    estimate_cvor, estimate_fvor, estimate_mc, estimate_vor, EstimateReport, Integrand, Method,
};
use crate::geom2d::Window;
use crate::pointproc::{CountMode, RngStream, SpppParams};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown function `{name}`")]
    UnknownFunction { name: String },
    #[error("the holder family requires --alpha")]
    MissingAlpha,
    #[error("alpha must lie in (0, 1], got {alpha}")]
    InvalidAlpha { alpha: f64 },
    #[error("invalid bench spec: {reason}")]
    InvalidSpec { reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

fn default_delta() -> f64 {
    SpppParams::DEFAULT_DELTA
}

/// What to run: one function, a set of methods, a grid of sample counts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchSpec {
    pub function: FunctionSpec,
    pub methods: Vec<Method>,
    pub n_values: Vec<u64>,
    pub replications: u32,
    pub seed: u64,
    #[serde(default)]
    pub mode: CountMode,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

impl BenchSpec {
    fn validate(&self) -> Result<(), BenchError> {
        if self.replications < 2 {
            return Err(BenchError::InvalidSpec {
                reason: "replications must be ≥ 2".into(),
            });
        }
        if self.n_values.is_empty() {
            return Err(BenchError::InvalidSpec {
                reason: "n_values must be non-empty".into(),
            });
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BenchError::InvalidSpec {
                reason: "n_values must be strictly ascending".into(),
            });
        }
        if self.methods.is_empty() {
            return Err(BenchError::InvalidSpec {
                reason: "methods must be non-empty".into(),
            });
        }
        Ok(())
    }
}

/// Statistics of one (method, n) cell.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchCell {
    pub function: String,
    pub method: Method,
    pub n: u64,
    pub mean: f64,
    pub std_dev: f64,
    pub mean_time_ms: f64,
    pub median_time_ms: f64,
    pub retries: u64,
    pub failures: u32,
    /// Set when more than 1% of replications failed.
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    /// Least-squares slope of log variance vs log n; `None` with fewer than
    /// three usable grid points. The two smallest n are excluded from the
    /// fit (transient regime) whenever at least five points are available.
    pub variance_slope: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchReport {
    pub function: String,
    pub seed: u64,
    pub replications: u32,
    pub mode: CountMode,
    pub cells: Vec<BenchCell>,
    pub methods: Vec<MethodSummary>,
}

impl BenchReport {
    pub fn cell(&self, method: Method, n: u64) -> Option<&BenchCell> {
        self.cells
            .iter()
            .find(|c| c.method == method && c.n == n)
    }

    pub fn slope(&self, method: Method) -> Option<f64> {
        self.methods
            .iter()
            .find(|m| m.method == method)
            .and_then(|m| m.variance_slope)
    }

    /// Byte-comparable encoding with the wall-clock fields stripped; used by
    /// the reproducibility contract (timings are not reproducible).
    pub fn stable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(cells) = v.get_mut("cells").and_then(|c| c.as_array_mut()) {
            for cell in cells {
                if let Some(obj) = cell.as_object_mut() {
                    obj.remove("mean_time_ms");
                    obj.remove("median_time_ms");
                }
            }
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

/// Runs every (method, n) cell of the spec. Replications run in parallel on
/// per-replication RNG streams; aggregation is order-independent
/// (compensated sums over the rep-indexed results).
pub fn run_bench(spec: &BenchSpec) -> Result<BenchReport, BenchError> {
    spec.validate()?;
    let f = make_function(&spec.function.name, spec.function.alpha)?;
    let w = Window::canonical();
    let reps = spec.replications as u64;

    let mut cells = Vec::new();
    for (mi, &method) in spec.methods.iter().enumerate() {
        for (ni, &n) in spec.n_values.iter().enumerate() {
            let cell_index = (mi * spec.n_values.len() + ni) as u64;
            let params = SpppParams::new(n as f64, spec.delta).with_mode(spec.mode);
            let results: Vec<Result<EstimateReport, String>> = (0..reps)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = RngStream::stream(spec.seed, cell_index * reps + rep);
                    run_one(&mut rng, method, &f, n, &params, &w).map_err(|e| e.to_string())
                })
                .collect();
            cells.push(summarize(&spec.function.name, method, n, results));
        }
    }

    let methods = spec
        .methods
        .iter()
        .map(|&method| MethodSummary {
            method,
            variance_slope: fit_slope(
                cells
                    .iter()
                    .filter(|c| c.method == method && c.std_dev > 0.0)
                    .map(|c| (c.n as f64, c.std_dev * c.std_dev)),
            ),
        })
        .collect();

    Ok(BenchReport {
        function: f.label.clone(),
        seed: spec.seed,
        replications: spec.replications,
        mode: spec.mode,
        cells,
        methods,
    })
}

fn run_one(
    rng: &mut RngStream,
    method: Method,
    f: &Integrand,
    n: u64,
    params: &SpppParams,
    w: &Window,
) -> Result<EstimateReport, crate::estimators::EstimatorError> {
    match method {
        Method::Mc => estimate_mc(rng, f, n, w),
        Method::Vor => estimate_vor(rng, f, params, w),
        Method::Fvor => estimate_fvor(rng, f, params, w),
        Method::Cvor => estimate_cvor(rng, f, n, w),
    }
}

fn summarize(
    function: &str,
    method: Method,
    n: u64,
    results: Vec<Result<EstimateReport, String>>,
) -> BenchCell {
    let total = results.len();
    let ok: Vec<&EstimateReport> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    let failures = (total - ok.len()) as u32;

    let values: Vec<f64> = ok.iter().map(|r| r.value).collect();
    let mean = kahan_sum(values.iter().copied()) / values.len().max(1) as f64;
    let std_dev = if values.len() > 1 {
        (kahan_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (values.len() - 1) as f64)
            .sqrt()
    } else {
        0.0
    };

    let mut times: Vec<f64> = ok
        .iter()
        .map(|r| r.wall_time.as_secs_f64() * 1e3)
        .collect();
    let mean_time_ms = kahan_sum(times.iter().copied()) / times.len().max(1) as f64;
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median_time_ms = if times.is_empty() {
        0.0
    } else {
        times[times.len() / 2]
    };

    BenchCell {
        function: function.to_string(),
        method,
        n,
        mean,
        std_dev,
        mean_time_ms,
        median_time_ms,
        retries: ok.iter().map(|r| r.retries as u64).sum(),
        failures,
        flagged: failures as f64 > 0.01 * total as f64,
    }
}

pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

fn fit_slope(points: impl Iterator<Item = (f64, f64)>) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = points.collect();
    if pts.len() < 3 {
        return None;
    }
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let fit = if pts.len() >= 5 { &pts[2..] } else { &pts[..] };
    let xs: Vec<f64> = fit.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = fit.iter().map(|(_, v)| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    Some(sxy / sxx)
}
