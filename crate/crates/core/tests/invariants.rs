//! Property tests over the core primitives.

use cloudlabel_core::cloud::{LabelCode, LabelMask, LabeledCloud};
use cloudlabel_core::geom::min_bounding_rect;
use cloudlabel_core::ElevationRaster;
use proptest::prelude::*;

fn label_strategy() -> impl Strategy<Value = LabelCode> {
    prop::sample::select(LabelCode::ALL.to_vec())
}

proptest! {
    /// Per-class counts always sum to N, and labelling without overwrite is
    /// idempotent.
    #[test]
    fn label_counts_are_conserved(
        labels in prop::collection::vec(label_strategy(), 1..200),
        mask_bits in prop::collection::vec(any::<bool>(), 1..200),
        code in label_strategy(),
    ) {
        let n = labels.len().min(mask_bits.len());
        let mut cloud = LabeledCloud::from_xyz(
            (0..n).map(|i| i as f64 * 0.01).collect(),
            vec![0.0; n],
            vec![0.0; n],
        ).unwrap();
        cloud.label = labels[..n].to_vec();
        let mask = LabelMask(mask_bits[..n].to_vec());

        let first = cloud.apply_labels(&mask, code, false).unwrap();
        prop_assert_eq!(cloud.label_counts().iter().sum::<usize>(), n);
        let second = cloud.apply_labels(&mask, code, false).unwrap();
        prop_assert_eq!(second, 0);
        prop_assert!(first <= n);
    }

    /// Minimum bounding rectangle area is invariant under rigid motion.
    #[test]
    fn mbr_area_is_rigid_motion_invariant(
        pts in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 3..60),
        theta in 0.0f64..std::f64::consts::PI,
        dx in -100.0f64..100.0,
        dy in -100.0f64..100.0,
    ) {
        let base = min_bounding_rect(&pts);
        let (s, c) = theta.sin_cos();
        let moved: Vec<(f64, f64)> = pts
            .iter()
            .map(|&(x, y)| (x * c - y * s + dx, x * s + y * c + dy))
            .collect();
        let rotated = min_bounding_rect(&moved);
        let a0 = base.length * base.width;
        let a1 = rotated.length * rotated.width;
        prop_assert!((a1 - a0).abs() <= 1e-6 * a0.max(1e-9) + 1e-9, "{a0} vs {a1}");
    }

    /// Bilinear queries never leave the range of the contributing cells.
    #[test]
    fn bilinear_query_respects_cell_bounds(
        values in prop::collection::vec(-50.0f64..50.0, 16..=16),
        fx in 0.0f64..4.0,
        fy in 0.0f64..4.0,
    ) {
        let raster = ElevationRaster::new(
            (0.0, 0.0), 1.0, 4, 4, values.clone(), vec![true; 16],
        ).unwrap();
        let z = raster.query_z(fx, fy).unwrap();
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(z >= lo - 1e-9 && z <= hi + 1e-9);
    }

    /// Gap filling never modifies data cells and never exceeds the data range
    /// (discrete maximum principle).
    #[test]
    fn fill_gaps_obeys_the_maximum_principle(
        seed_values in prop::collection::vec(-10.0f64..10.0, 36..=36),
        holes in prop::collection::vec(0usize..36, 1..12),
    ) {
        let mut raster = ElevationRaster::new(
            (0.0, 0.0), 1.0, 6, 6, seed_values.clone(), vec![true; 36],
        ).unwrap();
        for &h in &holes {
            raster.set_nodata(h / 6, h % 6);
        }
        let filled = raster.fill_gaps(10);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in 0..6 {
            for c in 0..6 {
                if let Some(v) = raster.get(r, c) {
                    lo = lo.min(v);
                    hi = hi.max(v);
                    // data cells never change
                    prop_assert_eq!(filled.get(r, c), Some(v));
                }
            }
        }
        for r in 0..6 {
            for c in 0..6 {
                if !raster.is_data(r, c) {
                    if let Some(v) = filled.get(r, c) {
                        prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
                    }
                }
            }
        }
    }
}
