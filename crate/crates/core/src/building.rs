//! Building labelling from inflated footprints with a roof-height cutoff.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cloud::{LabelCode, LabeledCloud};
use crate::geom::{inflate_polygon, Polygon2D};
use crate::pointgrid::PointGrid;
use crate::raster::ElevationRaster;

/// How the roof height is sampled per point.
///
/// Roof edges are discontinuities; taking the maximum of the four
/// surrounding cells avoids interpolating the cutoff below legitimate
/// facade points. Bilinear is kept for sensitivity runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoofLookup {
    Max4,
    Bilinear,
}

/// Labels Unlabelled points inside the inflated footprints as Building.
///
/// A point inside an inflated footprint is labelled when the roof raster has
/// data at its location and `z <= roof_z + roof_margin`, or when the roof
/// raster has no data there (height unknown means no cutoff). Footprints
/// without a single roof data cell inside them are skipped entirely: the
/// elevation model predates that building, so there is no height evidence
/// to label against.
///
/// Returns the number of newly labelled points.
pub fn label_buildings(
    cloud: &mut LabeledCloud,
    footprints: &[Polygon2D],
    roof: &ElevationRaster,
    inflate_m: f64,
    roof_margin_m: f64,
    roof_lookup: RoofLookup,
) -> usize {
    let grid = PointGrid::build(cloud);
    let mut changed = 0;
    for footprint in footprints {
        if !has_roof_data_inside(footprint, roof) {
            continue;
        }
        let inflated = match inflate_polygon(footprint, inflate_m) {
            Ok(p) => p,
            Err(_) => continue, // negative inflate is rejected by config validation
        };
        let (xmin, ymin, xmax, ymax) = inflated.bbox();
        let mut hits: Vec<usize> = Vec::new();
        grid.for_each_candidate(xmin, ymin, xmax, ymax, |i| {
            if cloud.label[i] != LabelCode::Unlabelled {
                return;
            }
            let (x, y) = (cloud.x[i], cloud.y[i]);
            if !inflated.contains(x, y) {
                return;
            }
            let roof_z = match roof_lookup {
                RoofLookup::Max4 => roof.query_max4(x, y),
                RoofLookup::Bilinear => roof.query_z(x, y),
            };
            match roof_z {
                Some(rz) => {
                    if cloud.z[i] <= rz + roof_margin_m {
                        hits.push(i);
                    }
                }
                None => hits.push(i),
            }
        });
        changed += cloud.apply_to_indices(&hits, LabelCode::Building, false);
    }
    changed
}

/// True when at least one roof cell whose center lies inside the footprint
/// carries data.
fn has_roof_data_inside(footprint: &Polygon2D, roof: &ElevationRaster) -> bool {
    let (xmin, ymin, xmax, ymax) = footprint.bbox();
    let cs = roof.cell_size();
    let (ox, oy) = roof.origin();
    let c0 = (((xmin - ox) / cs).max(0.0)) as usize;
    let r0 = (((ymin - oy) / cs).max(0.0)) as usize;
    let c1 = ((((xmax - ox) / cs).max(0.0)) as usize).min(roof.ncols().saturating_sub(1));
    let r1 = ((((ymax - oy) / cs).max(0.0)) as usize).min(roof.nrows().saturating_sub(1));
    if c0 >= roof.ncols() || r0 >= roof.nrows() {
        return false;
    }
    for r in r0..=r1 {
        for c in c0..=c1 {
            if roof.is_data(r, c) {
                let (cx, cy) = roof.cell_center(r, c);
                if footprint.contains(cx, cy) {
                    return true;
                }
            }
        }
    }
    false
}
