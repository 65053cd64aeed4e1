//! Ground labelling against the elevation surface, and below-ground noise.

use alloc::vec::Vec;

use crate::cloud::{LabelCode, LabeledCloud};
use crate::math;
use crate::raster::ElevationRaster;

/// Labels every Unlabelled point within `margin` of the ground surface as
/// Ground (boundary inclusive). Points over nodata cells are skipped.
/// Returns the number of newly labelled points.
pub fn label_ground(cloud: &mut LabeledCloud, ground: &ElevationRaster, margin: f64) -> usize {
    let mut hits: Vec<usize> = Vec::new();
    for i in 0..cloud.len() {
        if cloud.label[i] != LabelCode::Unlabelled {
            continue;
        }
        if let Some(surface) = ground.query_z(cloud.x[i], cloud.y[i]) {
            if math::fabs(cloud.z[i] - surface) <= margin {
                hits.push(i);
            }
        }
    }
    cloud.apply_to_indices(&hits, LabelCode::Ground, false)
}

/// Labels every Unlabelled point more than `margin` below the ground surface
/// as reflection Noise. Returns the number of newly labelled points.
pub fn label_noise_below(cloud: &mut LabeledCloud, ground: &ElevationRaster, margin: f64) -> usize {
    let mut hits: Vec<usize> = Vec::new();
    for i in 0..cloud.len() {
        if cloud.label[i] != LabelCode::Unlabelled {
            continue;
        }
        if let Some(surface) = ground.query_z(cloud.x[i], cloud.y[i]) {
            if cloud.z[i] < surface - margin {
                hits.push(i);
            }
        }
    }
    cloud.apply_to_indices(&hits, LabelCode::Noise, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::ElevationRaster;
    use alloc::vec;

    fn flat_raster(z: f64) -> ElevationRaster {
        ElevationRaster::new((0.0, 0.0), 1.0, 10, 10, vec![z; 100], vec![true; 100]).unwrap()
    }

    fn cloud_with_zs(zs: &[f64]) -> LabeledCloud {
        let n = zs.len();
        let xs: Vec<f64> = (0..n).map(|i| 2.0 + i as f64 * 0.3).collect();
        let ys = vec![5.0; n];
        LabeledCloud::from_xyz(xs, ys, zs.to_vec()).unwrap()
    }

    #[test]
    fn points_within_margin_become_ground() {
        let raster = flat_raster(2.0);
        let mut cloud = cloud_with_zs(&[2.2, 2.3, 1.8, 2.0, 1.74]);
        let n = label_ground(&mut cloud, &raster, 0.25);
        assert_eq!(n, 3);
        assert_eq!(cloud.label[0], LabelCode::Ground); // 2.2
        assert_eq!(cloud.label[1], LabelCode::Unlabelled); // 2.3
        assert_eq!(cloud.label[2], LabelCode::Ground); // 1.8
        assert_eq!(cloud.label[3], LabelCode::Ground); // exactly on surface
        assert_eq!(cloud.label[4], LabelCode::Unlabelled); // 1.74
    }

    #[test]
    fn boundary_is_inclusive() {
        let raster = flat_raster(2.0);
        let mut cloud = cloud_with_zs(&[2.25, 1.75]);
        let n = label_ground(&mut cloud, &raster, 0.25);
        assert_eq!(n, 2);
    }

    #[test]
    fn nodata_cells_are_skipped() {
        let mut raster = flat_raster(2.0);
        for r in 0..10 {
            for c in 0..10 {
                raster.set_nodata(r, c);
            }
        }
        let mut cloud = cloud_with_zs(&[2.0, 2.1]);
        assert_eq!(label_ground(&mut cloud, &raster, 0.25), 0);
        assert_eq!(label_noise_below(&mut cloud, &raster, 0.25), 0);
    }

    #[test]
    fn reflections_below_margin_become_noise() {
        let raster = flat_raster(2.0);
        let mut cloud = cloud_with_zs(&[1.5, 1.8, 2.5]);
        let n = label_noise_below(&mut cloud, &raster, 0.25);
        assert_eq!(n, 1);
        assert_eq!(cloud.label[0], LabelCode::Noise);
        assert_eq!(cloud.label[1], LabelCode::Unlabelled);
        assert_eq!(cloud.label[2], LabelCode::Unlabelled);
    }

    #[test]
    fn ground_and_noise_commute() {
        let raster = flat_raster(2.0);
        let zs = [1.0, 1.5, 1.74, 1.76, 2.0, 2.24, 2.26, 3.0];
        let mut a = cloud_with_zs(&zs);
        label_ground(&mut a, &raster, 0.25);
        label_noise_below(&mut a, &raster, 0.25);
        let mut b = cloud_with_zs(&zs);
        label_noise_below(&mut b, &raster, 0.25);
        label_ground(&mut b, &raster, 0.25);
        assert_eq!(a.label, b.label);
    }

    #[test]
    fn multi_level_ground_is_fully_labelled() {
        // two terraces at z = 0 and z = 3, step at x = 5
        let mut raster = ElevationRaster::empty((0.0, 0.0), 1.0, 10, 10).unwrap();
        for r in 0..10 {
            for c in 0..10 {
                raster.set(r, c, if c < 5 { 0.0 } else { 3.0 });
            }
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut zs = Vec::new();
        for i in 0..200 {
            // stay clear of the one-cell transition strip around x = 5
            let x = if i % 2 == 0 {
                0.3 + (i / 2) as f64 * 0.042
            } else {
                5.7 + (i / 2) as f64 * 0.042
            };
            xs.push(x);
            ys.push(0.5 + (i % 9) as f64);
            zs.push(if x < 5.0 { 0.0 } else { 3.0 });
        }
        let n = xs.len();
        let mut cloud = LabeledCloud::from_xyz(xs, ys, zs).unwrap();
        let labelled = label_ground(&mut cloud, &raster, 0.25);
        assert_eq!(labelled, n);
    }
}
