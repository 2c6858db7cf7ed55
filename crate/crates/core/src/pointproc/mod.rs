//! Poisson point process sampling on rectangles and the stretched-window
//! construction (SPPP): extra nuclei are drawn in a margin of width ε around
//! the window so that the Voronoi cells of all nuclei inside the window are
//! bounded with high probability; configurations violating that are rejected
//! and resampled.

mod rng;
mod sampling;
mod sppp;

pub use rng::RngStream;
pub use sampling::{sample_poisson_count, sample_uniform_strip, sample_uniform_window};
pub use sppp::{
    accept_config, accept_config_strict, bound_reject_prob, sample_sppp, sample_sppp_tessellated,
    solve_epsilon, strip_count, CountMode, PointConfig, SpppParams,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PointprocError {
    #[error("rejection sampling exhausted after {retries} retries")]
    RejectionExhausted { retries: u32 },
    #[error(transparent)]
    Geometry(#[from] crate::geom2d::GeomError),
}
