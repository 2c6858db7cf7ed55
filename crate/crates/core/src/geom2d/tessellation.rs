//! Voronoi tessellation of a finite point set via Delaunay duality.

use delaunator::{next_halfedge, triangulate, Point as DPoint, Triangulation as DTriangulation, EMPTY};
use serde::Serialize;

use super::{clip::polygon_area_signed, GeomError, Point2};

/// Vertices closer together than this are merged before area computation.
const VERTEX_DEDUP_TOL: f64 = 1e-12;

/// One Voronoi cell. Bounded cells carry their polygon (counter-clockwise),
/// exact shoelace area and circumscribed radius. Unbounded cells store no ray
/// vertices; consumers needing their geometry clip against an explicit window
/// (`clip_cell`), which uses the stored bisector constraints.
#[derive(Clone, Debug, Serialize)]
pub struct VoronoiCell {
    pub nucleus: Point2,
    /// Counter-clockwise polygon; empty if unbounded.
    pub vertices: Vec<Point2>,
    pub bounded: bool,
    /// Shoelace area, or `f64::INFINITY` if unbounded.
    pub area: f64,
    /// Max nucleus→vertex distance, or `f64::INFINITY` if unbounded.
    pub circ_radius: f64,
    /// Positions of the Delaunay neighbours of the nucleus. The cell equals
    /// the intersection of the bisector half-planes against these points.
    #[serde(skip)]
    pub(crate) neighbors: Vec<Point2>,
}

impl VoronoiCell {
    pub fn neighbors(&self) -> &[Point2] {
        &self.neighbors
    }
}

/// Voronoi cells of a finite generating set, index-aligned with the input.
#[derive(Clone, Debug, Serialize)]
pub struct Tessellation {
    points: Vec<Point2>,
    cells: Vec<VoronoiCell>,
}

impl Tessellation {
    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn cells(&self) -> &[VoronoiCell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &VoronoiCell {
        &self.cells[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Builds the Voronoi tessellation of `points`.
///
/// One cell per input point, index-aligned. A cell is flagged unbounded iff
/// its nucleus lies on the convex hull of the generating set. Exact
/// duplicates are rejected; point processes are simple almost surely, so a
/// duplicate indicates misuse upstream.
pub fn build_tessellation(points: &[Point2]) -> Result<Tessellation, GeomError> {
    if points.is_empty() {
        return Err(GeomError::Empty);
    }
    for (i, p) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(GeomError::NonFinite { index: i });
        }
    }
    check_duplicates(points)?;

    let dpoints: Vec<DPoint> = points.iter().map(|p| DPoint { x: p.x, y: p.y }).collect();
    let tri = triangulate(&dpoints);

    let cells = if tri.triangles.is_empty() {
        // Fewer than 3 non-collinear points: every cell is an unbounded
        // half-plane intersection against all other generators.
        (0..points.len())
            .map(|i| unbounded_cell(points, i))
            .collect()
    } else {
        extract_cells(points, &tri)
    };

    Ok(Tessellation {
        points: points.to_vec(),
        cells,
    })
}

fn check_duplicates(points: &[Point2]) -> Result<(), GeomError> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        (points[a].x, points[a].y)
            .partial_cmp(&(points[b].x, points[b].y))
            .expect("coordinates are finite")
    });
    for w in order.windows(2) {
        let (a, b) = (w[0], w[1]);
        if points[a] == points[b] {
            return Err(GeomError::DuplicatePoint {
                first: a.min(b),
                second: a.max(b),
            });
        }
    }
    Ok(())
}

fn unbounded_cell(points: &[Point2], i: usize) -> VoronoiCell {
    let neighbors = points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, p)| *p)
        .collect();
    VoronoiCell {
        nucleus: points[i],
        vertices: Vec::new(),
        bounded: false,
        area: f64::INFINITY,
        circ_radius: f64::INFINITY,
        neighbors,
    }
}

fn extract_cells(points: &[Point2], tri: &DTriangulation) -> Vec<VoronoiCell> {
    let n = points.len();

    // One incoming half-edge per point, preferring a hull edge so that the
    // fan walk below sweeps the full neighbourhood of hull vertices.
    let mut incoming = vec![EMPTY; n];
    for e in 0..tri.triangles.len() {
        let endpoint = tri.triangles[next_halfedge(e)];
        if incoming[endpoint] == EMPTY || tri.halfedges[e] == EMPTY {
            incoming[endpoint] = e;
        }
    }

    let circumcenters: Vec<Point2> = (0..tri.triangles.len() / 3)
        .map(|t| triangle_circumcenter(points, tri, t))
        .collect();

    (0..n)
        .map(|i| {
            let start = incoming[i];
            if start == EMPTY {
                // Skipped by the triangulator (near-coincident input);
                // fall back to the full half-plane construction.
                return unbounded_cell(points, i);
            }

            let mut verts = Vec::with_capacity(8);
            let mut neighbors = Vec::with_capacity(8);
            let mut closed = true;
            let mut e = start;
            loop {
                neighbors.push(points[tri.triangles[e]]);
                verts.push(circumcenters[e / 3]);
                let outgoing = next_halfedge(e);
                let next_in = tri.halfedges[outgoing];
                if next_in == EMPTY {
                    // Open fan: nucleus is on the hull. The final outgoing
                    // edge still contributes a neighbour.
                    neighbors.push(points[tri.triangles[next_halfedge(outgoing)]]);
                    closed = false;
                    break;
                }
                e = next_in;
                if e == start {
                    break;
                }
            }

            if !closed {
                return VoronoiCell {
                    nucleus: points[i],
                    vertices: Vec::new(),
                    bounded: false,
                    area: f64::INFINITY,
                    circ_radius: f64::INFINITY,
                    neighbors,
                };
            }

            let mut verts = dedup_ring(verts, VERTEX_DEDUP_TOL);
            let signed = polygon_area_signed(&verts);
            if signed < 0.0 {
                verts.reverse();
            }
            let nucleus = points[i];
            let circ_radius = verts
                .iter()
                .map(|v| v.dist(&nucleus))
                .fold(0.0_f64, f64::max);
            VoronoiCell {
                nucleus,
                area: signed.abs(),
                circ_radius,
                vertices: verts,
                bounded: true,
                neighbors,
            }
        })
        .collect()
}

fn triangle_circumcenter(points: &[Point2], tri: &DTriangulation, t: usize) -> Point2 {
    let a = points[tri.triangles[3 * t]];
    let b = points[tri.triangles[3 * t + 1]];
    let c = points[tri.triangles[3 * t + 2]];
    // Relative to `a` for accuracy; triangles are CCW so the denominator is positive.
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let ex = c.x - a.x;
    let ey = c.y - a.y;
    let bl = dx * dx + dy * dy;
    let cl = ex * ex + ey * ey;
    let d = 0.5 / (dx * ey - dy * ex);
    Point2::new(a.x + (ey * bl - dy * cl) * d, a.y + (dx * cl - ex * bl) * d)
}

fn dedup_ring(verts: Vec<Point2>, tol: f64) -> Vec<Point2> {
    if verts.len() < 2 {
        return verts;
    }
    let tol2 = tol * tol;
    let mut out: Vec<Point2> = Vec::with_capacity(verts.len());
    for v in verts {
        if out.last().is_none_or(|last| last.dist2(&v) > tol2) {
            out.push(v);
        }
    }
    while out.len() > 1 && out.first().unwrap().dist2(out.last().unwrap()) <= tol2 {
        out.pop();
    }
    out
}
