//! Simple polygons with holes, and point-in-polygon tests.

use alloc::vec::Vec;

use crate::error::GeomError;

/// Distance (in meters) below which a point counts as lying on a boundary.
const BOUNDARY_EPS_M: f64 = 1e-9;

/// A simple polygon: one exterior ring and zero or more hole rings.
///
/// Rings are stored without a repeated closing vertex. On construction the
/// exterior is normalized to counter-clockwise and holes to clockwise, and
/// every ring is checked to be simple (non-self-intersecting).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon2D {
    exterior: Vec<(f64, f64)>,
    holes: Vec<Vec<(f64, f64)>>,
}

impl Polygon2D {
    pub fn new(
        exterior: Vec<(f64, f64)>,
        holes: Vec<Vec<(f64, f64)>>,
    ) -> Result<Polygon2D, GeomError> {
        let mut exterior = clean_ring(exterior)?;
        validate_simple(&exterior)?;
        if signed_area(&exterior) < 0.0 {
            exterior.reverse();
        }
        let mut out_holes = Vec::with_capacity(holes.len());
        for ring in holes {
            let mut ring = clean_ring(ring)?;
            validate_simple(&ring)?;
            if signed_area(&ring) > 0.0 {
                ring.reverse();
            }
            out_holes.push(ring);
        }
        Ok(Polygon2D {
            exterior,
            holes: out_holes,
        })
    }

    /// Constructor for geometry produced by our own algorithms; rings are
    /// only cleaned and oriented, not re-checked for simplicity.
    pub(crate) fn from_rings_unchecked(
        mut exterior: Vec<(f64, f64)>,
        holes: Vec<Vec<(f64, f64)>>,
    ) -> Polygon2D {
        dedup_ring(&mut exterior);
        if signed_area(&exterior) < 0.0 {
            exterior.reverse();
        }
        let holes = holes
            .into_iter()
            .map(|mut ring| {
                dedup_ring(&mut ring);
                if signed_area(&ring) > 0.0 {
                    ring.reverse();
                }
                ring
            })
            .collect();
        Polygon2D { exterior, holes }
    }

    /// Axis-aligned rectangle.
    pub fn rect(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Polygon2D {
        Polygon2D::new(
            alloc::vec![(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)],
            Vec::new(),
        )
        .expect("rectangle is a valid polygon")
    }

    pub fn exterior(&self) -> &[(f64, f64)] {
        &self.exterior
    }

    pub fn holes(&self) -> &[Vec<(f64, f64)>] {
        &self.holes
    }

    pub fn rings(&self) -> impl Iterator<Item = &[(f64, f64)]> {
        core::iter::once(self.exterior.as_slice()).chain(self.holes.iter().map(|h| h.as_slice()))
    }

    /// Exterior area minus hole areas.
    pub fn area(&self) -> f64 {
        let mut a = signed_area(&self.exterior);
        for h in &self.holes {
            a += signed_area(h); // holes are clockwise, negative area
        }
        a
    }

    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &self.exterior {
            b.0 = b.0.min(x);
            b.1 = b.1.min(y);
            b.2 = b.2.max(x);
            b.3 = b.3.max(y);
        }
        b
    }

    /// Even-odd containment; boundary points count as inside.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let mut inside = false;
        for ring in self.rings() {
            let n = ring.len();
            for i in 0..n {
                let a = ring[i];
                let b = ring[(i + 1) % n];
                if point_on_segment(x, y, a, b) {
                    return true;
                }
                if (a.1 > y) != (b.1 > y) {
                    let x_cross = a.0 + (y - a.1) * (b.0 - a.0) / (b.1 - a.1);
                    if x < x_cross {
                        inside = !inside;
                    }
                }
            }
        }
        inside
    }
}

/// Even-odd ray-casting test; boundary points count as inside.
pub fn point_in_polygon(poly: &Polygon2D, x: f64, y: f64) -> bool {
    poly.contains(x, y)
}

/// Shoelace formula; positive for counter-clockwise rings.
pub(crate) fn signed_area(ring: &[(f64, f64)]) -> f64 {
    let n = ring.len();
    let mut sum = 0.0;
    for i in 0..n {
        let (x0, y0) = ring[i];
        let (x1, y1) = ring[(i + 1) % n];
        sum += x0 * y1 - x1 * y0;
    }
    sum * 0.5
}

fn point_on_segment(x: f64, y: f64, a: (f64, f64), b: (f64, f64)) -> bool {
    let (abx, aby) = (b.0 - a.0, b.1 - a.1);
    let (apx, apy) = (x - a.0, y - a.1);
    let len = crate::math::hypot(abx, aby);
    if len == 0.0 {
        return crate::math::hypot(apx, apy) <= BOUNDARY_EPS_M;
    }
    let cross = abx * apy - aby * apx;
    if crate::math::fabs(cross) / len > BOUNDARY_EPS_M {
        return false;
    }
    let dot = apx * abx + apy * aby;
    dot >= -BOUNDARY_EPS_M * len && dot <= len * len + BOUNDARY_EPS_M * len
}

/// Drops repeated closing vertices and consecutive duplicates.
fn clean_ring(ring: Vec<(f64, f64)>) -> Result<Vec<(f64, f64)>, GeomError> {
    let mut ring = ring;
    dedup_ring(&mut ring);
    if ring.len() < 3 {
        return Err(GeomError::TooFewVertices);
    }
    Ok(ring)
}

fn dedup_ring(ring: &mut Vec<(f64, f64)>) {
    ring.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
}

/// Rejects rings whose non-adjacent segments intersect.
fn validate_simple(ring: &[(f64, f64)]) -> Result<(), GeomError> {
    let n = ring.len();
    for i in 0..n {
        let a0 = ring[i];
        let a1 = ring[(i + 1) % n];
        for j in (i + 1)..n {
            // skip adjacent segments, including the wrap-around pair
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let b0 = ring[j];
            let b1 = ring[(j + 1) % n];
            if segments_intersect(a0, a1, b0, b1) {
                return Err(GeomError::SelfIntersecting(i, j));
            }
        }
    }
    Ok(())
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn segments_intersect(a0: (f64, f64), a1: (f64, f64), b0: (f64, f64), b1: (f64, f64)) -> bool {
    let d1 = orient(a0, a1, b0);
    let d2 = orient(a0, a1, b1);
    let d3 = orient(b0, b1, a0);
    let d4 = orient(b0, b1, a1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: (f64, f64), q0: (f64, f64), q1: (f64, f64), d: f64| {
        d == 0.0
            && p.0 >= q0.0.min(q1.0)
            && p.0 <= q0.0.max(q1.0)
            && p.1 >= q0.1.min(q1.1)
            && p.1 <= q0.1.max(q1.1)
    };
    on(b0, a0, a1, d1) || on(b1, a0, a1, d2) || on(a0, b0, b1, d3) || on(a1, b0, b1, d4)
}
