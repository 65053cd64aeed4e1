//! Polygon inflation: Minkowski sum with a disc.

use alloc::vec::Vec;

use crate::error::GeomError;
use crate::geom::polygon::{signed_area, Polygon2D};
use crate::math;

/// Maximum arc step when approximating round joins, 15 degrees.
const MAX_ARC_STEP_RAD: f64 = core::f64::consts::PI / 12.0;

/// Returns the polygon grown outward by `d` meters.
///
/// Convex corners become circular arcs approximated by segments every
/// <= 15 degrees (vertices on the true arc, so the output is inscribed and
/// the worst-case boundary shortfall is `d * (1 - cos 7.5deg)`). Reflex
/// corners are trimmed to the intersection of the adjacent offset edges.
/// Holes shrink by the same distance; holes swallowed entirely are dropped.
pub fn inflate_polygon(poly: &Polygon2D, d: f64) -> Result<Polygon2D, GeomError> {
    if d < 0.0 || !d.is_finite() {
        return Err(GeomError::NegativeOffset(d));
    }
    if d == 0.0 {
        return Ok(poly.clone());
    }
    let exterior = offset_ring(poly.exterior(), d);
    let mut holes = Vec::new();
    for hole in poly.holes() {
        let ring = offset_ring(hole, d);
        // Every boundary point of a properly shrunk hole lies at distance
        // >= d from the original ring; a swallowed hole everts and its
        // vertices end up closer than that.
        let collapsed = ring.len() < 3
            || signed_area(&ring) >= -1e-12
            || ring
                .iter()
                .any(|&p| ring_distance(hole, p) < d - 1e-6);
        if !collapsed {
            holes.push(ring);
        }
    }
    Ok(Polygon2D::from_rings_unchecked(exterior, holes))
}

/// Offsets a ring to the right of its travel direction by `d`.
///
/// For a counter-clockwise exterior that is outward; for a clockwise hole it
/// is toward the hole interior. Left turns get arcs, right turns a miter.
fn offset_ring(ring: &[(f64, f64)], d: f64) -> Vec<(f64, f64)> {
    let n = ring.len();
    let mut out = Vec::with_capacity(n * 2);
    for i in 0..n {
        let prev = ring[(i + n - 1) % n];
        let v = ring[i];
        let next = ring[(i + 1) % n];
        let e0 = (v.0 - prev.0, v.1 - prev.1);
        let e1 = (next.0 - v.0, next.1 - v.1);
        let n0 = right_normal(e0, d);
        let n1 = right_normal(e1, d);
        let cross = e0.0 * e1.1 - e0.1 * e1.0;
        let scale = math::hypot(e0.0, e0.1) * math::hypot(e1.0, e1.1);
        if cross > scale * 1e-12 {
            // left turn: join the two offset edges with an arc around v
            let a0 = math::atan2(n0.1, n0.0);
            let a1 = math::atan2(n1.1, n1.0);
            let mut sweep = a1 - a0;
            while sweep < 0.0 {
                sweep += 2.0 * core::f64::consts::PI;
            }
            let steps = math::ceil(sweep / MAX_ARC_STEP_RAD).max(1.0) as usize;
            for k in 0..=steps {
                let a = a0 + sweep * k as f64 / steps as f64;
                out.push((v.0 + d * math::cos(a), v.1 + d * math::sin(a)));
            }
        } else if cross < -scale * 1e-12 {
            // right turn: the offset edges cross; keep their intersection
            let p0 = (prev.0 + n0.0, prev.1 + n0.1);
            let p1 = (v.0 + n1.0, v.1 + n1.1);
            let denom = e0.0 * e1.1 - e0.1 * e1.0;
            let t = ((p1.0 - p0.0) * e1.1 - (p1.1 - p0.1) * e1.0) / denom;
            out.push((p0.0 + t * e0.0, p0.1 + t * e0.1));
        } else {
            // straight-through vertex
            out.push((v.0 + n0.0, v.1 + n0.1));
        }
    }
    out
}

fn right_normal(e: (f64, f64), d: f64) -> (f64, f64) {
    let len = math::hypot(e.0, e.1);
    if len == 0.0 {
        return (0.0, 0.0);
    }
    (e.1 / len * d, -e.0 / len * d)
}

/// Distance from a point to the closest segment of a ring.
fn ring_distance(ring: &[(f64, f64)], p: (f64, f64)) -> f64 {
    let n = ring.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        let (ex, ey) = (b.0 - a.0, b.1 - a.1);
        let len2 = ex * ex + ey * ey;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((p.0 - a.0) * ex + (p.1 - a.1) * ey) / len2).clamp(0.0, 1.0)
        };
        best = best.min(math::hypot(p.0 - (a.0 + t * ex), p.1 - (a.1 + t * ey)));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::point_in_polygon;

    fn square10() -> Polygon2D {
        Polygon2D::rect(0.0, 0.0, 10.0, 10.0)
    }

    #[test]
    fn zero_distance_returns_identical_vertices() {
        let p = square10();
        let q = inflate_polygon(&p, 0.0).unwrap();
        assert_eq!(p.exterior(), q.exterior());
    }

    #[test]
    fn negative_distance_is_rejected() {
        assert!(inflate_polygon(&square10(), -0.1).is_err());
    }

    #[test]
    fn point_outside_east_edge_lands_inside_inflated() {
        let q = inflate_polygon(&square10(), 0.5).unwrap();
        assert!(point_in_polygon(&q, 10.3, 5.0));
        assert!(!point_in_polygon(&q, 10.6, 5.0));
    }

    #[test]
    fn inflated_square_area_matches_closed_form() {
        // 10x10 square grown by 0.5: area = 100 + 4*10*0.5 + pi*0.25,
        // minus the small inscribed-arc deficit at the corners.
        let q = inflate_polygon(&square10(), 0.5).unwrap();
        let expected = 100.0 + 40.0 * 0.5 + core::f64::consts::PI * 0.25;
        assert!((q.area() - expected).abs() < 0.05, "area {}", q.area());
    }

    #[test]
    fn output_contains_input_vertices_and_edge_samples() {
        let p = Polygon2D::new(
            alloc::vec![(0.0, 0.0), (8.0, 1.0), (9.0, 6.0), (4.0, 9.0), (-1.0, 5.0)],
            alloc::vec![],
        )
        .unwrap();
        let q = inflate_polygon(&p, 0.7).unwrap();
        let ring = p.exterior();
        for i in 0..ring.len() {
            let a = ring[i];
            let b = ring[(i + 1) % ring.len()];
            for k in 0..=10 {
                let t = k as f64 / 10.0;
                let (x, y) = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
                assert!(point_in_polygon(&q, x, y), "lost point ({x}, {y})");
            }
        }
    }

    #[test]
    fn concave_polygon_keeps_notch_geometry() {
        // L-shape; the inner corner must be trimmed, not rounded
        let p = Polygon2D::new(
            alloc::vec![
                (0.0, 0.0),
                (10.0, 0.0),
                (10.0, 4.0),
                (6.0, 4.0),
                (6.0, 10.0),
                (0.0, 10.0)
            ],
            alloc::vec![],
        )
        .unwrap();
        let q = inflate_polygon(&p, 0.5).unwrap();
        // near the reflex corner the offset boundary passes through (6.5, 4.5)
        assert!(point_in_polygon(&q, 6.4, 4.4));
        assert!(!point_in_polygon(&q, 6.6, 4.6));
        // overall containment of the input corner region
        assert!(point_in_polygon(&q, 6.0, 4.0));
    }

    #[test]
    fn hole_shrinks_and_small_hole_disappears() {
        let p = Polygon2D::new(
            alloc::vec![(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)],
            alloc::vec![
                alloc::vec![(2.0, 2.0), (5.0, 2.0), (5.0, 5.0), (2.0, 5.0)],
                alloc::vec![(7.0, 7.0), (7.6, 7.0), (7.6, 7.6), (7.0, 7.6)],
            ],
        )
        .unwrap();
        let q = inflate_polygon(&p, 0.5).unwrap();
        assert_eq!(q.holes().len(), 1);
        // hole center still outside the material
        assert!(!point_in_polygon(&q, 3.5, 3.5));
        // ring of material gained inside the old hole edge
        assert!(point_in_polygon(&q, 2.2, 3.5));
        // the 0.6 m hole was swallowed
        assert!(point_in_polygon(&q, 7.3, 7.3));
    }
}
