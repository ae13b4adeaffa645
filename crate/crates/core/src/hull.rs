//! Planar convex hull by Andrew's monotone chain.

use crate::geometry::Vector;

/// Relative tolerance on the orientation test; turns below it count as collinear.
const ORIENT_TOL: f64 = 1e-12;

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Vertices of the convex hull of planar points in counter-clockwise order.
///
/// Collinear boundary points and near-duplicates are dropped. A degenerate hull
/// yields one or two points.
pub fn convex_hull(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<&Vector> = points.iter().collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let scale = points.iter().fold(1.0f64, |m, p| m.max(p.norm_inf()));
    let tol = ORIENT_TOL * scale * scale;
    pts.dedup_by(|a, b| a.dist_inf(b) <= ORIENT_TOL * scale);
    if pts.len() <= 2 {
        return pts.into_iter().cloned().collect();
    }

    let mut hull: Vec<&Vector> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &&Vector>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= tol {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        // All points collinear: the chain collapses; keep the extremes.
        return vec![pts[0].clone(), pts[pts.len() - 1].clone()];
    }
    hull.into_iter().cloned().collect()
}
