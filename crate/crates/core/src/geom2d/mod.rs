//! 2D Delaunay/Voronoi geometry: tessellations of finite point sets with
//! per-cell polygons, areas, boundedness flags and circumscribed radii, plus
//! convex clipping against axis-aligned windows.
//!
//! Triangulation itself is delegated to `delaunator` (robust adaptive
//! predicates); everything Voronoi-specific is built on top of its half-edge
//! structure.

mod clip;
mod tessellation;

pub use clip::{cell_within, clip_cell, point_in_convex_polygon, polygon_area};
pub use tessellation::{build_tessellation, Tessellation, VoronoiCell};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point in window units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist2(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// An axis-aligned square window `[cx−h, cx+h] × [cy−h, cy+h]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: Point2,
    pub half_extent: f64,
}

impl Window {
    /// `half_extent` must be positive and finite.
    pub fn new(center: Point2, half_extent: f64) -> Self {
        assert!(
            half_extent > 0.0 && half_extent.is_finite() && center.is_finite(),
            "window requires finite center and positive half extent"
        );
        Self {
            center,
            half_extent,
        }
    }

    /// The canonical window `[−1/2, 1/2]²`.
    pub fn canonical() -> Self {
        Self::new(Point2::new(0.0, 0.0), 0.5)
    }

    pub fn area(&self) -> f64 {
        let side = 2.0 * self.half_extent;
        side * side
    }

    pub fn x_min(&self) -> f64 {
        self.center.x - self.half_extent
    }

    pub fn x_max(&self) -> f64 {
        self.center.x + self.half_extent
    }

    pub fn y_min(&self) -> f64 {
        self.center.y - self.half_extent
    }

    pub fn y_max(&self) -> f64 {
        self.center.y + self.half_extent
    }

    /// Closed containment (boundary counts as inside).
    pub fn contains(&self, p: &Point2) -> bool {
        p.x >= self.x_min() && p.x <= self.x_max() && p.y >= self.y_min() && p.y <= self.y_max()
    }

    /// The window grown by `margin` on every side.
    pub fn stretched(&self, margin: f64) -> Window {
        Window::new(self.center, self.half_extent + margin)
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> [Point2; 4] {
        [
            Point2::new(self.x_min(), self.y_min()),
            Point2::new(self.x_max(), self.y_min()),
            Point2::new(self.x_max(), self.y_max()),
            Point2::new(self.x_min(), self.y_max()),
        ]
    }
}

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("point set is empty")]
    Empty,
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("points {first} and {second} coincide exactly")]
    DuplicatePoint { first: usize, second: usize },
}
