//! Point-cloud container, label codes, and label bookkeeping.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::CloudError;

/// Semantic class of a point.
///
/// The numeric codes are fixed so that output files are bit-stable across
/// runs and across versions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum LabelCode {
    Unlabelled = 0,
    Ground = 1,
    Building = 2,
    Car = 3,
    Tree = 4,
    LampPost = 5,
    TrafficSign = 6,
    Noise = 99,
}

impl LabelCode {
    /// Every valid code, in code order.
    pub const ALL: [LabelCode; 8] = [
        LabelCode::Unlabelled,
        LabelCode::Ground,
        LabelCode::Building,
        LabelCode::Car,
        LabelCode::Tree,
        LabelCode::LampPost,
        LabelCode::TrafficSign,
        LabelCode::Noise,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    /// Strict decoder: anything outside the eight valid codes is rejected.
    pub fn from_code(code: u8) -> Option<LabelCode> {
        match code {
            0 => Some(LabelCode::Unlabelled),
            1 => Some(LabelCode::Ground),
            2 => Some(LabelCode::Building),
            3 => Some(LabelCode::Car),
            4 => Some(LabelCode::Tree),
            5 => Some(LabelCode::LampPost),
            6 => Some(LabelCode::TrafficSign),
            99 => Some(LabelCode::Noise),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LabelCode::Unlabelled => "unlabelled",
            LabelCode::Ground => "ground",
            LabelCode::Building => "building",
            LabelCode::Car => "car",
            LabelCode::Tree => "tree",
            LabelCode::LampPost => "lamp_post",
            LabelCode::TrafficSign => "traffic_sign",
            LabelCode::Noise => "noise",
        }
    }

    pub fn from_name(name: &str) -> Option<LabelCode> {
        LabelCode::ALL.iter().copied().find(|c| c.name() == name)
    }

    /// Index of this code within [`LabelCode::ALL`].
    pub fn ordinal(self) -> usize {
        LabelCode::ALL.iter().position(|c| *c == self).unwrap()
    }
}

/// Per-point boolean selection over a cloud.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMask(pub Vec<bool>);

impl LabelMask {
    pub fn all(n: usize) -> LabelMask {
        LabelMask(vec![true; n])
    }

    pub fn none(n: usize) -> LabelMask {
        LabelMask(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Columnar point set with one label per point.
///
/// All columns have the same length; only the label column is ever mutated
/// by the labelling modules. Coordinates are meters in a shared planar CRS.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCloud {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub rgb: Option<Vec<[u8; 3]>>,
    pub intensity: Option<Vec<f64>>,
    pub label: Vec<LabelCode>,
    /// Lower-left corner of the tile containing the points.
    pub tile_origin: (f64, f64),
    /// Tile edge length in meters.
    pub tile_size: f64,
}

pub const DEFAULT_TILE_SIZE: f64 = 50.0;

impl LabeledCloud {
    /// Builds a cloud from coordinate columns; every point starts Unlabelled.
    pub fn from_xyz(x: Vec<f64>, y: Vec<f64>, z: Vec<f64>) -> Result<LabeledCloud, CloudError> {
        let n = x.len();
        if y.len() != n {
            return Err(CloudError::LengthMismatch {
                column: "y",
                got: y.len(),
                expected: n,
            });
        }
        if z.len() != n {
            return Err(CloudError::LengthMismatch {
                column: "z",
                got: z.len(),
                expected: n,
            });
        }
        for i in 0..n {
            if !(x[i].is_finite() && y[i].is_finite() && z[i].is_finite()) {
                return Err(CloudError::NonFiniteCoordinate { index: i });
            }
        }
        let label = vec![LabelCode::Unlabelled; n];
        let (tile_origin, tile_size) = tile_of(&x, &y);
        Ok(LabeledCloud {
            x,
            y,
            z,
            rgb: None,
            intensity: None,
            label,
            tile_origin,
            tile_size,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Checks that every point lies inside the tile rectangle.
    pub fn check_tile_bounds(&self) -> Result<(), CloudError> {
        let (x0, y0) = self.tile_origin;
        let (x1, y1) = (x0 + self.tile_size, y0 + self.tile_size);
        for i in 0..self.len() {
            let (x, y) = (self.x[i], self.y[i]);
            if !(x >= x0 && x < x1 && y >= y0 && y < y1) {
                return Err(CloudError::OutsideTile {
                    index: i,
                    x,
                    y,
                    x0,
                    x0_hi: x1,
                    y0,
                    y0_hi: y1,
                });
            }
        }
        Ok(())
    }

    /// Axis-aligned bounds of the points, `None` for an empty cloud.
    pub fn bounds(&self) -> Option<(f64, f64, f64, f64)> {
        if self.is_empty() {
            return None;
        }
        let mut b = (self.x[0], self.y[0], self.x[0], self.y[0]);
        for i in 1..self.len() {
            b.0 = b.0.min(self.x[i]);
            b.1 = b.1.min(self.y[i]);
            b.2 = b.2.max(self.x[i]);
            b.3 = b.3.max(self.y[i]);
        }
        Some(b)
    }

    /// Applies `code` to the selected points and returns how many changed.
    ///
    /// With `overwrite = false` only points that are currently Unlabelled
    /// are touched, so module execution order defines label precedence.
    pub fn apply_labels(
        &mut self,
        mask: &LabelMask,
        code: LabelCode,
        overwrite: bool,
    ) -> Result<usize, CloudError> {
        if mask.len() != self.len() {
            return Err(CloudError::LengthMismatch {
                column: "mask",
                got: mask.len(),
                expected: self.len(),
            });
        }
        let mut changed = 0;
        for (i, selected) in mask.0.iter().enumerate() {
            if *selected
                && (overwrite || self.label[i] == LabelCode::Unlabelled)
                && self.label[i] != code
            {
                self.label[i] = code;
                changed += 1;
            }
        }
        Ok(changed)
    }

    /// Index-based variant of [`apply_labels`](Self::apply_labels) with the
    /// same precedence semantics. Indices must be in range.
    pub fn apply_to_indices(&mut self, indices: &[usize], code: LabelCode, overwrite: bool) -> usize {
        let mut changed = 0;
        for &i in indices {
            if (overwrite || self.label[i] == LabelCode::Unlabelled) && self.label[i] != code {
                self.label[i] = code;
                changed += 1;
            }
        }
        changed
    }

    /// Point counts per label code, aligned with [`LabelCode::ALL`].
    pub fn label_counts(&self) -> [usize; 8] {
        let mut counts = [0usize; 8];
        for l in &self.label {
            counts[l.ordinal()] += 1;
        }
        counts
    }

    pub fn count_of(&self, code: LabelCode) -> usize {
        self.label.iter().filter(|l| **l == code).count()
    }
}

/// Derives the 50 m tile containing the given coordinates.
///
/// The tile index convention is `origin = (tx * 50, ty * 50)`; the tile of a
/// cloud is the one containing its minimum corner.
fn tile_of(x: &[f64], y: &[f64]) -> ((f64, f64), f64) {
    if x.is_empty() {
        return ((0.0, 0.0), DEFAULT_TILE_SIZE);
    }
    let min_x = x.iter().copied().fold(f64::INFINITY, f64::min);
    let min_y = y.iter().copied().fold(f64::INFINITY, f64::min);
    let ox = crate::math::floor(min_x / DEFAULT_TILE_SIZE) * DEFAULT_TILE_SIZE;
    let oy = crate::math::floor(min_y / DEFAULT_TILE_SIZE) * DEFAULT_TILE_SIZE;
    ((ox, oy), DEFAULT_TILE_SIZE)
}

/// Tile index pair used in file naming, `<tx>_<ty>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TileIndexName {
    pub tx: i64,
    pub ty: i64,
}

impl TileIndexName {
    pub fn from_origin(origin: (f64, f64)) -> TileIndexName {
        TileIndexName {
            tx: crate::math::floor(origin.0 / DEFAULT_TILE_SIZE) as i64,
            ty: crate::math::floor(origin.1 / DEFAULT_TILE_SIZE) as i64,
        }
    }

    pub fn origin(&self) -> (f64, f64) {
        (
            self.tx as f64 * DEFAULT_TILE_SIZE,
            self.ty as f64 * DEFAULT_TILE_SIZE,
        )
    }
}

impl core::fmt::Display for TileIndexName {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}_{}", self.tx, self.ty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cloud(n: usize) -> LabeledCloud {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * 0.1).collect();
        let ys = vec![0.5; n];
        let zs = vec![1.0; n];
        LabeledCloud::from_xyz(xs, ys, zs).unwrap()
    }

    #[test]
    fn label_codes_round_trip_and_reject_invalid() {
        for code in LabelCode::ALL {
            assert_eq!(LabelCode::from_code(code.code()), Some(code));
            assert_eq!(LabelCode::from_name(code.name()), Some(code));
        }
        assert_eq!(LabelCode::from_code(7), None);
        assert_eq!(LabelCode::from_code(98), None);
    }

    #[test]
    fn apply_labels_full_mask_labels_everything() {
        let mut cloud = small_cloud(5);
        let n = cloud.apply_labels(&LabelMask::all(5), LabelCode::Ground, false).unwrap();
        assert_eq!(n, 5);
        assert!(cloud.label.iter().all(|l| *l == LabelCode::Ground));
    }

    #[test]
    fn apply_labels_without_overwrite_keeps_existing() {
        let mut cloud = small_cloud(10);
        cloud.label[0] = LabelCode::Building;
        cloud.label[4] = LabelCode::Building;
        cloud.label[9] = LabelCode::Building;
        let n = cloud.apply_labels(&LabelMask::all(10), LabelCode::Car, false).unwrap();
        assert_eq!(n, 7);
        assert_eq!(cloud.label[0], LabelCode::Building);
        assert_eq!(cloud.label[4], LabelCode::Building);
        assert_eq!(cloud.label[9], LabelCode::Building);
        assert_eq!(cloud.count_of(LabelCode::Car), 7);
    }

    #[test]
    fn apply_labels_empty_mask_is_a_no_op() {
        let mut cloud = small_cloud(4);
        let before = cloud.label.clone();
        let n = cloud.apply_labels(&LabelMask::none(4), LabelCode::Ground, false).unwrap();
        assert_eq!(n, 0);
        assert_eq!(cloud.label, before);
    }

    #[test]
    fn apply_labels_rejects_length_mismatch() {
        let mut cloud = small_cloud(4);
        let err = cloud.apply_labels(&LabelMask::all(3), LabelCode::Ground, false);
        assert!(err.is_err());
    }

    #[test]
    fn apply_labels_is_idempotent_without_overwrite() {
        let mut cloud = small_cloud(8);
        let mask = LabelMask(vec![true, false, true, false, true, false, true, false]);
        let first = cloud.apply_labels(&mask, LabelCode::Tree, false).unwrap();
        let second = cloud.apply_labels(&mask, LabelCode::Tree, false).unwrap();
        assert_eq!(first, 4);
        assert_eq!(second, 0);
    }

    #[test]
    fn counts_always_sum_to_n() {
        let mut cloud = small_cloud(20);
        cloud.apply_to_indices(&[0, 3, 5], LabelCode::Car, false);
        cloud.apply_to_indices(&[1, 2], LabelCode::Noise, false);
        let counts = cloud.label_counts();
        assert_eq!(counts.iter().sum::<usize>(), 20);
    }

    #[test]
    fn tile_name_round_trips() {
        let t = TileIndexName { tx: 3, ty: -2 };
        assert_eq!(t.origin(), (150.0, -100.0));
        assert_eq!(TileIndexName::from_origin(t.origin()), t);
        assert_eq!(alloc::format!("{t}"), "3_-2");
    }

    #[test]
    fn from_xyz_rejects_non_finite() {
        let err = LabeledCloud::from_xyz(vec![0.0], vec![0.0], vec![f64::NAN]);
        assert!(err.is_err());
    }
}
