//! Minimum-area bounding rectangle via rotating calipers.

use alloc::vec::Vec;

use crate::math;

/// Minimum-area enclosing rectangle of a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingRect {
    /// Longer side, meters.
    pub length: f64,
    /// Shorter side, meters.
    pub width: f64,
    /// Direction of the length axis, in `[0, pi)`.
    pub angle: f64,
    /// Rectangle center.
    pub center: (f64, f64),
}

/// Convex hull in counter-clockwise order (Andrew's monotone chain).
///
/// Collinear points on the hull boundary are dropped. Degenerate inputs
/// yield fewer than 3 vertices.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let n = pts.len();
    if n < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * n);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 3 {
        // fully collinear input: keep the two extreme points
        let mut ends = alloc::vec![pts[0], pts[n - 1]];
        ends.dedup();
        return ends;
    }
    hull
}

/// Minimum-area enclosing rectangle, found by scanning hull edges.
///
/// The optimal rectangle shares a side with some hull edge, so trying every
/// edge direction is exact. Ties are broken by hull edge order, which makes
/// the reported angle deterministic. Degenerate inputs yield zero width
/// and/or length.
pub fn min_bounding_rect(points: &[(f64, f64)]) -> BoundingRect {
    let hull = convex_hull(points);
    match hull.len() {
        0 => BoundingRect {
            length: 0.0,
            width: 0.0,
            angle: 0.0,
            center: (0.0, 0.0),
        },
        1 => BoundingRect {
            length: 0.0,
            width: 0.0,
            angle: 0.0,
            center: hull[0],
        },
        2 => {
            let (a, b) = (hull[0], hull[1]);
            let length = math::hypot(b.0 - a.0, b.1 - a.1);
            BoundingRect {
                length,
                width: 0.0,
                angle: normalize_angle(math::atan2(b.1 - a.1, b.0 - a.0)),
                center: ((a.0 + b.0) * 0.5, (a.1 + b.1) * 0.5),
            }
        }
        h => {
            let mut best_area = f64::INFINITY;
            let mut best = BoundingRect {
                length: 0.0,
                width: 0.0,
                angle: 0.0,
                center: (0.0, 0.0),
            };
            for i in 0..h {
                let a = hull[i];
                let b = hull[(i + 1) % h];
                let len = math::hypot(b.0 - a.0, b.1 - a.1);
                if len == 0.0 {
                    continue;
                }
                let u = ((b.0 - a.0) / len, (b.1 - a.1) / len);
                let v = (-u.1, u.0);
                let mut smin = f64::INFINITY;
                let mut smax = f64::NEG_INFINITY;
                let mut tmin = f64::INFINITY;
                let mut tmax = f64::NEG_INFINITY;
                for &p in &hull {
                    let s = p.0 * u.0 + p.1 * u.1;
                    let t = p.0 * v.0 + p.1 * v.1;
                    smin = smin.min(s);
                    smax = smax.max(s);
                    tmin = tmin.min(t);
                    tmax = tmax.max(t);
                }
                let ds = smax - smin;
                let dt = tmax - tmin;
                let area = ds * dt;
                if area < best_area {
                    best_area = area;
                    let sc = (smin + smax) * 0.5;
                    let tc = (tmin + tmax) * 0.5;
                    let axis = if ds >= dt { u } else { v };
                    best = BoundingRect {
                        length: ds.max(dt),
                        width: ds.min(dt),
                        angle: normalize_angle(math::atan2(axis.1, axis.0)),
                        center: (sc * u.0 + tc * v.0, sc * u.1 + tc * v.1),
                    };
                }
            }
            best
        }
    }
}

fn normalize_angle(a: f64) -> f64 {
    let pi = core::f64::consts::PI;
    let mut a = a % pi;
    if a < 0.0 {
        a += pi;
    }
    if a >= pi {
        a = 0.0;
    }
    a
}
