//! Convex clipping of Voronoi cells against axis-aligned windows.

use super::{Point2, VoronoiCell, Window};

/// Signed shoelace area (positive for counter-clockwise rings).
pub(crate) fn polygon_area_signed(verts: &[Point2]) -> f64 {
    if verts.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..verts.len() {
        let a = verts[i];
        let b = verts[(i + 1) % verts.len()];
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}

/// Absolute polygon area.
pub fn polygon_area(verts: &[Point2]) -> f64 {
    polygon_area_signed(verts).abs()
}

/// Intersects the cell with the window and returns the clipped convex
/// polygon and its area. Works for bounded and unbounded cells alike: the
/// window rectangle is cut by the bisector half-plane of every Delaunay
/// neighbour, which reconstructs `C ∩ W` exactly. An empty intersection
/// yields `([], 0.0)`.
pub fn clip_cell(cell: &VoronoiCell, w: &Window) -> (Vec<Point2>, f64) {
    let mut poly: Vec<Point2> = w.corners().to_vec();
    for nb in &cell.neighbors {
        if poly.is_empty() {
            break;
        }
        // Keep the side of the bisector closer to the nucleus:
        // (q − m)·(nb − x) ≤ 0 with m the midpoint of nucleus and neighbour.
        let nx = nb.x - cell.nucleus.x;
        let ny = nb.y - cell.nucleus.y;
        let mx = 0.5 * (nb.x + cell.nucleus.x);
        let my = 0.5 * (nb.y + cell.nucleus.y);
        let c = nx * mx + ny * my;
        poly = clip_halfplane(&poly, nx, ny, c);
    }
    let area = polygon_area(&poly);
    (poly, area)
}

/// True iff the cell is bounded and every vertex lies inside or on the
/// boundary of `w`.
pub fn cell_within(cell: &VoronoiCell, w: &Window) -> bool {
    cell.bounded && cell.vertices.iter().all(|v| w.contains(v))
}

/// Point-in-convex-polygon test for a counter-clockwise ring, with `tol`
/// slack so boundary points count as inside.
pub fn point_in_convex_polygon(q: &Point2, verts: &[Point2], tol: f64) -> bool {
    if verts.len() < 3 {
        return false;
    }
    for i in 0..verts.len() {
        let a = verts[i];
        let b = verts[(i + 1) % verts.len()];
        let cross = (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x);
        if cross < -tol {
            return false;
        }
    }
    true
}

/// Sutherland–Hodgman step: keeps the region `nx·x + ny·y ≤ c`.
fn clip_halfplane(poly: &[Point2], nx: f64, ny: f64, c: f64) -> Vec<Point2> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = poly[i];
        let nxt = poly[(i + 1) % poly.len()];
        let d_cur = nx * cur.x + ny * cur.y - c;
        let d_nxt = nx * nxt.x + ny * nxt.y - c;
        if d_cur <= 0.0 {
            out.push(cur);
            if d_nxt > 0.0 {
                out.push(edge_crossing(cur, nxt, d_cur, d_nxt));
            }
        } else if d_nxt <= 0.0 {
            out.push(edge_crossing(cur, nxt, d_cur, d_nxt));
        }
    }
    if out.len() < 3 {
        out.clear();
    }
    out
}

fn edge_crossing(a: Point2, b: Point2, da: f64, db: f64) -> Point2 {
    let t = da / (da - db);
    Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
}
