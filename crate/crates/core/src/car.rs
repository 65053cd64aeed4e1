//! Car detection: cluster shape tests plus road-location tests.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cloud::{LabelCode, LabeledCloud};
use crate::geom::min_bounding_rect;
use crate::growing::ClusterIndex;
use crate::math;
use crate::raster::ElevationRaster;
use crate::topo::RoadPoly;

/// Expected car dimensions, `(min, max)` per axis in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarDims {
    pub length_m: (f64, f64),
    pub width_m: (f64, f64),
    pub height_m: (f64, f64),
}

impl Default for CarDims {
    fn default() -> CarDims {
        CarDims {
            length_m: (2.5, 5.8),
            width_m: (1.5, 2.1),
            height_m: (1.2, 2.1),
        }
    }
}

impl CarDims {
    pub fn ranges(&self) -> [(&'static str, (f64, f64)); 3] {
        [
            ("car.length_m", self.length_m),
            ("car.width_m", self.width_m),
            ("car.height_m", self.height_m),
        ]
    }
}

fn in_range(v: f64, range: (f64, f64)) -> bool {
    v >= range.0 && v <= range.1
}

/// Labels whole clusters as Car when they look and sit like a car.
///
/// A cluster passes when (1) its minimum bounding rectangle's length and
/// width fall in the expected ranges, (2) its vertical extent falls in the
/// height range, (3) its lowest point is within `max_base_clearance` of the
/// ground surface, and (4) the rectangle's centroid lies inside a road or
/// parking polygon. Labelling is per-cluster atomic. Returns the number of
/// newly labelled points.
pub fn label_cars(
    cloud: &mut LabeledCloud,
    clusters: &ClusterIndex,
    roads: &[RoadPoly],
    ground: &ElevationRaster,
    dims: &CarDims,
    max_base_clearance: f64,
) -> usize {
    let mut changed = 0;
    for members in clusters.cluster_points() {
        if members.is_empty() {
            continue;
        }
        let xy: Vec<(f64, f64)> = members
            .iter()
            .map(|&i| (cloud.x[i as usize], cloud.y[i as usize]))
            .collect();
        let rect = min_bounding_rect(&xy);
        if !in_range(rect.length, dims.length_m) || !in_range(rect.width, dims.width_m) {
            continue;
        }

        let mut z_min = f64::INFINITY;
        let mut z_max = f64::NEG_INFINITY;
        let mut lowest = members[0] as usize;
        for &i in &members {
            let i = i as usize;
            if cloud.z[i] < z_min {
                z_min = cloud.z[i];
                lowest = i;
            }
            z_max = z_max.max(cloud.z[i]);
        }
        if !in_range(z_max - z_min, dims.height_m) {
            continue;
        }

        let clearance = match ground.query_z(cloud.x[lowest], cloud.y[lowest]) {
            Some(s) => math::fabs(z_min - s),
            None => continue, // no surface evidence under the cluster
        };
        if clearance > max_base_clearance {
            continue;
        }

        if !roads
            .iter()
            .any(|r| r.poly.contains(rect.center.0, rect.center.1))
        {
            continue;
        }

        let indices: Vec<usize> = members.iter().map(|&i| i as usize).collect();
        changed += cloud.apply_to_indices(&indices, LabelCode::Car, false);
    }
    changed
}
