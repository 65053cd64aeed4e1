//! Targeted search for pole-like objects near their mapped coordinates.

use alloc::vec::Vec;

use crate::cloud::{LabelCode, LabeledCloud};
use crate::config::PoleConfig;
use crate::math;
use crate::pointgrid::PointGrid;
use crate::raster::ElevationRaster;
use crate::topo::{PointKind, PointObject, TopoMap};

/// A pole base may sit this far above the queried ground height and still
/// count as attached to the ground (the ground filter claims the lowest
/// points of the shaft).
const BASE_ATTACH_M: f64 = 0.5;
/// Trunk band used for radius estimation, relative to the detected base.
const TRUNK_BAND_LOW_M: f64 = 0.5;
const TRUNK_BAND_HIGH_M: f64 = 2.0;
/// Radius estimation needs at least this many trunk-band points.
const MIN_BAND_POINTS: usize = 10;
/// Safety factor applied to the estimated radius when seeding, to tolerate
/// scanner noise.
const RADIUS_SAFETY: f64 = 1.1;

/// A detected pole: axis location, vertical span, and (once estimated)
/// shaft radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleCandidate {
    pub kind: PointKind,
    pub axis: (f64, f64),
    pub z_base: f64,
    pub z_top: f64,
    /// Set by radius estimation; must be positive before seeding.
    pub radius: Option<f64>,
}

/// Per-cell statistics of z values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStat {
    pub count: u32,
    pub min_z: f64,
    pub max_z: f64,
    sum_z: f64,
}

impl CellStat {
    const EMPTY: CellStat = CellStat {
        count: 0,
        min_z: f64::INFINITY,
        max_z: f64::NEG_INFINITY,
        sum_z: 0.0,
    };

    pub fn mean_z(&self) -> f64 {
        self.sum_z / self.count as f64
    }
}

/// 2D grid of z statistics over a search area.
///
/// The grid is anchored at the minimum point coordinates; binning is
/// half-open (`[x_lo, x_hi)`), with the extreme maximum falling in the last
/// cell by construction.
#[derive(Debug, Clone)]
pub struct GridStats {
    pub origin: (f64, f64),
    pub cell_size: f64,
    pub ncols: usize,
    pub nrows: usize,
    cells: Vec<CellStat>,
}

impl GridStats {
    pub fn get(&self, row: usize, col: usize) -> &CellStat {
        &self.cells[row * self.ncols + col]
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Unlabelled points within the square window of half-width `half_extent`
/// around the object's mapped location (boundary inclusive).
pub fn extract_search_area(
    cloud: &LabeledCloud,
    obj: &PointObject,
    half_extent: f64,
) -> Vec<usize> {
    (0..cloud.len())
        .filter(|&i| {
            cloud.label[i] == LabelCode::Unlabelled
                && math::fabs(cloud.x[i] - obj.x) <= half_extent
                && math::fabs(cloud.y[i] - obj.y) <= half_extent
        })
        .collect()
}

/// Bins the given points into a 2D grid and records per-cell count, min,
/// max, and mean of z.
pub fn compute_grid_stats(cloud: &LabeledCloud, indices: &[usize], cell_size: f64) -> GridStats {
    assert!(cell_size > 0.0, "cell_size must be > 0");
    if indices.is_empty() {
        return GridStats {
            origin: (0.0, 0.0),
            cell_size,
            ncols: 0,
            nrows: 0,
            cells: Vec::new(),
        };
    }
    let mut xmin = f64::INFINITY;
    let mut ymin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for &i in indices {
        xmin = xmin.min(cloud.x[i]);
        ymin = ymin.min(cloud.y[i]);
        xmax = xmax.max(cloud.x[i]);
        ymax = ymax.max(cloud.y[i]);
    }
    let ncols = (math::floor((xmax - xmin) / cell_size) as usize) + 1;
    let nrows = (math::floor((ymax - ymin) / cell_size) as usize) + 1;
    let mut cells = alloc::vec![CellStat::EMPTY; ncols * nrows];
    for &i in indices {
        let col = ((math::floor((cloud.x[i] - xmin) / cell_size)) as usize).min(ncols - 1);
        let row = ((math::floor((cloud.y[i] - ymin) / cell_size)) as usize).min(nrows - 1);
        let cell = &mut cells[row * ncols + col];
        cell.count += 1;
        cell.min_z = cell.min_z.min(cloud.z[i]);
        cell.max_z = cell.max_z.max(cloud.z[i]);
        cell.sum_z += cloud.z[i];
    }
    GridStats {
        origin: (xmin, ymin),
        cell_size,
        ncols,
        nrows,
        cells,
    }
}

/// Searches the grid for a pole signature.
///
/// Every 2x2 cell block whose combined vertical span reaches `min_height`
/// and whose lowest point sits near the ground qualifies; the qualifying
/// block centroid nearest to the expected location wins, with ties broken
/// by (row, col) block order. Blocks are scanned one cell beyond the grid
/// so an object narrower than a cell still falls inside a block. Returns
/// `None` when nothing qualifies or the nearest match is farther than
/// `max_offset`.
pub fn detect_pole(
    stats: &GridStats,
    ground_z: f64,
    min_height: f64,
    max_offset: f64,
    expected: &PointObject,
) -> Option<PoleCandidate> {
    if stats.is_empty() {
        return None;
    }
    let mut best: Option<(f64, PoleCandidate)> = None;
    for block_row in -1..stats.nrows as i64 {
        for block_col in -1..stats.ncols as i64 {
            let mut min_z = f64::INFINITY;
            let mut max_z = f64::NEG_INFINITY;
            let mut occupied = false;
            for (r, c) in [
                (block_row, block_col),
                (block_row, block_col + 1),
                (block_row + 1, block_col),
                (block_row + 1, block_col + 1),
            ] {
                if r < 0 || c < 0 || r >= stats.nrows as i64 || c >= stats.ncols as i64 {
                    continue;
                }
                let cell = stats.get(r as usize, c as usize);
                if cell.count > 0 {
                    occupied = true;
                    min_z = min_z.min(cell.min_z);
                    max_z = max_z.max(cell.max_z);
                }
            }
            if !occupied || max_z - min_z < min_height || min_z > ground_z + BASE_ATTACH_M {
                continue;
            }
            let centroid = (
                stats.origin.0 + (block_col as f64 + 1.0) * stats.cell_size,
                stats.origin.1 + (block_row as f64 + 1.0) * stats.cell_size,
            );
            let dist = math::hypot(centroid.0 - expected.x, centroid.1 - expected.y);
            if best.as_ref().is_none_or(|(d, _)| dist < *d) {
                best = Some((
                    dist,
                    PoleCandidate {
                        kind: expected.kind,
                        axis: centroid,
                        z_base: min_z,
                        z_top: max_z,
                        radius: None,
                    },
                ));
            }
        }
    }
    match best {
        Some((dist, candidate)) if dist <= max_offset => Some(candidate),
        _ => None,
    }
}

/// Estimates the shaft radius as the 95th-percentile horizontal distance
/// from the candidate axis among trunk-band points
/// (`z_base + 0.5 .. z_base + 2.0`, clipped to the candidate's extent).
/// Returns `None` when fewer than 10 points fall in the band.
pub fn estimate_radius(
    cloud: &LabeledCloud,
    indices: &[usize],
    candidate: &PoleCandidate,
) -> Option<f64> {
    let lo = candidate.z_base + TRUNK_BAND_LOW_M;
    let hi = (candidate.z_base + TRUNK_BAND_HIGH_M).min(candidate.z_top);
    let mut dists: Vec<f64> = indices
        .iter()
        .filter(|&&i| cloud.z[i] >= lo && cloud.z[i] <= hi)
        .map(|&i| math::hypot(cloud.x[i] - candidate.axis.0, cloud.y[i] - candidate.axis.1))
        .collect();
    if dists.len() < MIN_BAND_POINTS {
        return None;
    }
    dists.sort_unstable_by(|a, b| a.total_cmp(b));
    let rank = math::ceil(0.95 * dists.len() as f64) as usize;
    Some(dists[rank - 1])
}

/// Labels every Unlabelled point inside the candidate's cylinder
/// (radius x 1.1, z between base and top) with the candidate's class.
/// Returns the number of newly labelled points.
pub fn seed_label_cylinder(cloud: &mut LabeledCloud, candidate: &PoleCandidate) -> usize {
    let Some(radius) = candidate.radius else {
        return 0;
    };
    let r = radius * RADIUS_SAFETY;
    let code = candidate.kind.label();
    let mut hits: Vec<usize> = Vec::new();
    for i in 0..cloud.len() {
        if cloud.label[i] != LabelCode::Unlabelled {
            continue;
        }
        if cloud.z[i] < candidate.z_base || cloud.z[i] > candidate.z_top {
            continue;
        }
        if math::hypot(cloud.x[i] - candidate.axis.0, cloud.y[i] - candidate.axis.1) <= r {
            hits.push(i);
        }
    }
    cloud.apply_to_indices(&hits, code, false)
}

/// Runs the full search for every mapped pole object and seeds the matches.
/// Returns the number of newly labelled points.
pub fn label_poles(
    cloud: &mut LabeledCloud,
    topo: &TopoMap,
    ground: &ElevationRaster,
    cfg: &PoleConfig,
) -> usize {
    let grid = PointGrid::build(cloud);
    let mut changed = 0;
    for obj in &topo.point_objects {
        // Same selection as extract_search_area, via the point grid.
        let mut indices: Vec<usize> = Vec::new();
        grid.for_each_candidate(
            obj.x - cfg.half_extent_m,
            obj.y - cfg.half_extent_m,
            obj.x + cfg.half_extent_m,
            obj.y + cfg.half_extent_m,
            |i| {
                if cloud.label[i] == LabelCode::Unlabelled
                    && math::fabs(cloud.x[i] - obj.x) <= cfg.half_extent_m
                    && math::fabs(cloud.y[i] - obj.y) <= cfg.half_extent_m
                {
                    indices.push(i);
                }
            },
        );
        if indices.is_empty() {
            continue;
        }
        indices.sort_unstable();

        let stats = compute_grid_stats(cloud, &indices, cfg.cell_m);
        let ground_z = match ground.query_z(obj.x, obj.y) {
            Some(z) => z,
            // no surface at the mapped location: fall back to the lowest
            // unlabelled point nearby
            None => indices
                .iter()
                .map(|&i| cloud.z[i])
                .fold(f64::INFINITY, f64::min),
        };
        let Some(mut candidate) =
            detect_pole(&stats, ground_z, cfg.min_height_m, cfg.max_offset_m, obj)
        else {
            continue;
        };
        let Some(radius) = estimate_radius(cloud, &indices, &candidate) else {
            continue;
        };
        if !cfg.accepts_radius(obj.kind, radius) {
            continue;
        }
        candidate.radius = Some(radius);
        changed += seed_label_cylinder(cloud, &candidate);
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cloud_from(pts: &[(f64, f64, f64)]) -> LabeledCloud {
        LabeledCloud::from_xyz(
            pts.iter().map(|p| p.0).collect(),
            pts.iter().map(|p| p.1).collect(),
            pts.iter().map(|p| p.2).collect(),
        )
        .unwrap()
    }

    /// Points on a vertical cylinder shell.
    fn shaft(cx: f64, cy: f64, r: f64, z0: f64, z1: f64, n: usize) -> Vec<(f64, f64, f64)> {
        (0..n)
            .map(|i| {
                let a = i as f64 * 2.399963; // golden angle, even coverage
                let z = z0 + (z1 - z0) * (i as f64 + 0.5) / n as f64;
                (cx + r * math::cos(a), cy + r * math::sin(a), z)
            })
            .collect()
    }

    fn obj(kind: PointKind, x: f64, y: f64) -> PointObject {
        PointObject { kind, x, y }
    }

    #[test]
    fn search_area_window_is_inclusive() {
        let cloud = cloud_from(&[(11.4, 10.0, 1.0), (11.6, 10.0, 1.0), (10.0, 11.5, 1.0)]);
        let idx = extract_search_area(&cloud, &obj(PointKind::Tree, 10.0, 10.0), 1.5);
        assert_eq!(idx, vec![0, 2]);
    }

    #[test]
    fn search_area_excludes_labelled_points() {
        let mut cloud = cloud_from(&[(10.0, 10.0, 1.0), (10.2, 10.0, 1.0)]);
        cloud.label[0] = LabelCode::Ground;
        let idx = extract_search_area(&cloud, &obj(PointKind::Tree, 10.0, 10.0), 1.5);
        assert_eq!(idx, vec![1]);
    }

    #[test]
    fn grid_stats_single_point() {
        let cloud = cloud_from(&[(1.0, 2.0, 3.5)]);
        let stats = compute_grid_stats(&cloud, &[0], 0.15);
        assert_eq!((stats.ncols, stats.nrows), (1, 1));
        let c = stats.get(0, 0);
        assert_eq!(c.count, 1);
        assert_eq!((c.min_z, c.max_z, c.mean_z()), (3.5, 3.5, 3.5));
    }

    #[test]
    fn grid_stats_two_points_in_one_cell() {
        let cloud = cloud_from(&[(1.0, 2.0, 1.0), (1.01, 2.01, 3.0)]);
        let stats = compute_grid_stats(&cloud, &[0, 1], 0.15);
        let c = stats.get(0, 0);
        assert_eq!(c.count, 2);
        assert_eq!((c.min_z, c.max_z, c.mean_z()), (1.0, 3.0, 2.0));
    }

    #[test]
    fn grid_stats_half_open_binning() {
        // second point exactly on the first interior boundary
        let cloud = cloud_from(&[(0.0, 0.0, 1.0), (0.15, 0.0, 2.0), (0.29, 0.0, 3.0)]);
        let stats = compute_grid_stats(&cloud, &[0, 1, 2], 0.15);
        assert_eq!(stats.ncols, 2);
        assert_eq!(stats.get(0, 0).count, 1);
        assert_eq!(stats.get(0, 1).count, 2);
    }

    #[test]
    fn detects_offset_shaft_within_a_cell_of_its_axis() {
        // 4 m shaft offset 0.8 m from the mapped location
        let pts = shaft(10.8, 10.0, 0.05, 0.25, 4.0, 600);
        let cloud = cloud_from(&pts);
        let expected = obj(PointKind::LampPost, 10.0, 10.0);
        let idx = extract_search_area(&cloud, &expected, 1.5);
        let stats = compute_grid_stats(&cloud, &idx, 0.15);
        let cand = detect_pole(&stats, 0.0, 2.0, 1.5, &expected).expect("should detect");
        assert!(math::hypot(cand.axis.0 - 10.8, cand.axis.1 - 10.0) <= 0.15 * 1.5);
        assert!(cand.z_top - cand.z_base >= 3.0);
    }

    #[test]
    fn offset_beyond_max_offset_is_missed() {
        let pts = shaft(12.0, 10.0, 0.05, 0.25, 4.0, 600);
        let cloud = cloud_from(&pts);
        let expected = obj(PointKind::LampPost, 10.0, 10.0);
        let idx = extract_search_area(&cloud, &expected, 1.5);
        // the 2.0 m offset leaves the +/-1.5 m window empty
        assert!(idx.is_empty());
        let stats = compute_grid_stats(&cloud, &idx, 0.15);
        assert!(detect_pole(&stats, 0.0, 2.0, 1.5, &expected).is_none());
    }

    #[test]
    fn empty_search_area_detects_nothing() {
        let cloud = cloud_from(&[]);
        let stats = compute_grid_stats(&cloud, &[], 0.15);
        assert!(detect_pole(&stats, 0.0, 2.0, 1.5, &obj(PointKind::Tree, 0.0, 0.0)).is_none());
    }

    #[test]
    fn shifting_the_expected_location_within_slack_does_not_change_detection() {
        let pts = shaft(10.8, 10.0, 0.05, 0.25, 4.0, 600);
        let cloud = cloud_from(&pts);
        for dx in [0.0, 0.2, 0.4, 0.6] {
            let expected = obj(PointKind::LampPost, 10.0 + dx, 10.0);
            let idx = extract_search_area(&cloud, &expected, 1.5);
            let stats = compute_grid_stats(&cloud, &idx, 0.15);
            assert!(
                detect_pole(&stats, 0.0, 2.0, 1.5, &expected).is_some(),
                "dx {dx}"
            );
        }
    }

    #[test]
    fn radius_of_an_analytic_circle() {
        let pts: Vec<(f64, f64, f64)> = (0..100)
            .map(|i| {
                let a = i as f64 / 100.0 * core::f64::consts::TAU;
                (5.0 + 0.15 * math::cos(a), 5.0 + 0.15 * math::sin(a), 1.0 + (i as f64) * 0.03)
            })
            .collect();
        let cloud = cloud_from(&pts);
        let idx: Vec<usize> = (0..100).collect();
        let cand = PoleCandidate {
            kind: PointKind::Tree,
            axis: (5.0, 5.0),
            z_base: 0.25,
            z_top: 4.0,
            radius: None,
        };
        let r = estimate_radius(&cloud, &idx, &cand).unwrap();
        assert!((r - 0.15).abs() <= 0.01, "r = {r}");
    }

    #[test]
    fn radius_estimation_needs_ten_band_points() {
        let pts = shaft(5.0, 5.0, 0.1, 0.8, 1.2, 9); // all inside the band, but only 9
        let cloud = cloud_from(&pts);
        let idx: Vec<usize> = (0..9).collect();
        let cand = PoleCandidate {
            kind: PointKind::Tree,
            axis: (5.0, 5.0),
            z_base: 0.25,
            z_top: 4.0,
            radius: None,
        };
        assert!(estimate_radius(&cloud, &idx, &cand).is_none());
    }

    #[test]
    fn axis_points_give_zero_radius() {
        let pts: Vec<(f64, f64, f64)> = (0..50).map(|i| (5.0, 5.0, 0.8 + i as f64 * 0.02)).collect();
        let cloud = cloud_from(&pts);
        let idx: Vec<usize> = (0..50).collect();
        let cand = PoleCandidate {
            kind: PointKind::LampPost,
            axis: (5.0, 5.0),
            z_base: 0.25,
            z_top: 4.0,
            radius: None,
        };
        let r = estimate_radius(&cloud, &idx, &cand).unwrap();
        assert_eq!(r, 0.0); // rejected downstream by the radius > 0 rule
    }

    #[test]
    fn cylinder_seeding_labels_inside_only() {
        let mut pts = shaft(5.0, 5.0, 0.1, 0.3, 4.0, 300);
        pts.push((5.25, 5.0, 2.0)); // outside radius*1.1
        pts.push((5.0, 5.0, 4.5)); // above z_top
        let mut cloud = cloud_from(&pts);
        let cand = PoleCandidate {
            kind: PointKind::Tree,
            axis: (5.0, 5.0),
            z_base: 0.3,
            z_top: 4.0,
            radius: Some(0.1),
        };
        let n = seed_label_cylinder(&mut cloud, &cand);
        assert_eq!(n, 300);
        assert_eq!(cloud.label[300], LabelCode::Unlabelled);
        assert_eq!(cloud.label[301], LabelCode::Unlabelled);
        // geometric containment of everything that was labelled
        for i in 0..cloud.len() {
            if cloud.label[i] == LabelCode::Tree {
                let d = math::hypot(cloud.x[i] - 5.0, cloud.y[i] - 5.0);
                assert!(d <= 0.1 * RADIUS_SAFETY + 1e-12);
                assert!(cloud.z[i] >= 0.3 && cloud.z[i] <= 4.0);
            }
        }
    }

    #[test]
    fn oversized_radius_is_rejected_per_kind() {
        use crate::config::PoleConfig;
        use crate::topo::TopoMap;
        // a 0.3 m shaft pretending to be a lamp post
        let pts = shaft(5.0, 5.0, 0.3, 0.25, 4.0, 2000);
        let mut cloud = cloud_from(&pts);
        let topo = TopoMap::new(
            vec![],
            vec![],
            vec![obj(PointKind::LampPost, 5.0, 5.0)],
        );
        let ground = crate::raster::ElevationRaster::new(
            (0.0, 0.0),
            1.0,
            10,
            10,
            vec![0.0; 100],
            vec![true; 100],
        )
        .unwrap();
        let n = label_poles(&mut cloud, &topo, &ground, &PoleConfig::default());
        assert_eq!(n, 0);

        // the same shaft as a tree is fine (0.3 < 0.5)
        let topo = TopoMap::new(vec![], vec![], vec![obj(PointKind::Tree, 5.0, 5.0)]);
        let n = label_poles(&mut cloud, &topo, &ground, &PoleConfig::default());
        assert!(n > 1900);
    }
}
