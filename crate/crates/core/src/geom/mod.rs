//! 2D computational-geometry primitives.

mod mbr;
mod offset;
mod polygon;

pub use mbr::{convex_hull, min_bounding_rect, BoundingRect};
pub use offset::inflate_polygon;
pub use polygon::{point_in_polygon, Polygon2D};
