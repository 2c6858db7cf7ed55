//! Helpers shared by the integration suites: an independent convex-hull
//! oracle and small statistics utilities.

#![allow(dead_code)]

use vorint::geom2d::Point2;

/// Indices of points on the convex hull (Andrew's monotone chain, including
/// collinear boundary points). Independent of the production triangulation
/// path, so it can serve as the boundedness oracle.
pub fn hull_indices(points: &[Point2]) -> Vec<usize> {
    let n = points.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (points[a].x, points[a].y)
            .partial_cmp(&(points[b].x, points[b].y))
            .unwrap()
    });

    let cross = |o: usize, a: usize, b: usize| -> f64 {
        (points[a].x - points[o].x) * (points[b].y - points[o].y)
            - (points[a].y - points[o].y) * (points[b].x - points[o].x)
    };

    // Strictly convex turns only: collinear mid-edge points are kept out of
    // the chain here and recovered afterwards by an on-edge test.
    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], i) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], i) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    let mut hull = lower;
    hull.extend(upper);

    // Points lying exactly on a hull edge are on the boundary too.
    let mut on_hull = vec![false; n];
    for &i in &hull {
        on_hull[i] = true;
    }
    for i in 0..n {
        if on_hull[i] {
            continue;
        }
        for k in 0..hull.len() {
            let a = hull[k];
            let b = hull[(k + 1) % hull.len()];
            if cross(a, b, i) == 0.0 && between(points[a], points[b], points[i]) {
                on_hull[i] = true;
                break;
            }
        }
    }
    (0..n).filter(|&i| on_hull[i]).collect()
}

fn between(a: Point2, b: Point2, p: Point2) -> bool {
    let dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
    let len2 = (b.x - a.x).powi(2) + (b.y - a.y).powi(2);
    dot >= 0.0 && dot <= len2
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample standard deviation (divisor n−1).
pub fn std_dev(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

pub fn standard_error(values: &[f64]) -> f64 {
    std_dev(values) / (values.len() as f64).sqrt()
}
