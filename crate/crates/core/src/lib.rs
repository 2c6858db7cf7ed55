//! Voronoi-reweighted Monte Carlo integration on 2D windows.
//!
//! Integrals of compactly supported functions are estimated by sampling a
//! Poisson point process on a stretched window, tessellating the samples, and
//! weighting each function value by the area of its Voronoi cell. The crate
//! ships the three reweighting estimators alongside standard Monte Carlo, a
//! replication benchmark harness, and a minimal Cornell-Box path tracer whose
//! per-pixel integration can use the same weightings.

pub mod bench;
pub mod cli;
pub mod estimators;
pub mod geom2d;
pub mod pointproc;
pub mod render;
