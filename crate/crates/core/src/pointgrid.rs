//! Uniform binning of point indices for rectangular candidate queries.

use alloc::vec::Vec;

use crate::cloud::LabeledCloud;
use crate::math;

const CELL_M: f64 = 1.0;

/// Bins point indices into 1 m cells over the cloud bounds.
pub(crate) struct PointGrid {
    origin: (f64, f64),
    ncols: usize,
    nrows: usize,
    cells: Vec<Vec<u32>>,
}

impl PointGrid {
    pub(crate) fn build(cloud: &LabeledCloud) -> PointGrid {
        let Some((xmin, ymin, xmax, ymax)) = cloud.bounds() else {
            return PointGrid {
                origin: (0.0, 0.0),
                ncols: 0,
                nrows: 0,
                cells: Vec::new(),
            };
        };
        let ncols = ((xmax - xmin) / CELL_M) as usize + 1;
        let nrows = ((ymax - ymin) / CELL_M) as usize + 1;
        let mut cells = alloc::vec![Vec::new(); ncols * nrows];
        for i in 0..cloud.len() {
            let c = (math::floor((cloud.x[i] - xmin) / CELL_M) as usize).min(ncols - 1);
            let r = (math::floor((cloud.y[i] - ymin) / CELL_M) as usize).min(nrows - 1);
            cells[r * ncols + c].push(i as u32);
        }
        PointGrid {
            origin: (xmin, ymin),
            ncols,
            nrows,
            cells,
        }
    }

    /// Visits every point in cells overlapping the box (a superset of the
    /// points actually inside it).
    pub(crate) fn for_each_candidate(
        &self,
        xmin: f64,
        ymin: f64,
        xmax: f64,
        ymax: f64,
        mut f: impl FnMut(usize),
    ) {
        if self.cells.is_empty() {
            return;
        }
        let clamp_col = |x: f64| {
            (math::floor((x - self.origin.0) / CELL_M).max(0.0) as usize).min(self.ncols - 1)
        };
        let clamp_row = |y: f64| {
            (math::floor((y - self.origin.1) / CELL_M).max(0.0) as usize).min(self.nrows - 1)
        };
        if xmax < self.origin.0 || ymax < self.origin.1 {
            return;
        }
        let (c0, c1) = (clamp_col(xmin), clamp_col(xmax));
        let (r0, r1) = (clamp_row(ymin), clamp_row(ymax));
        for r in r0..=r1 {
            for c in c0..=c1 {
                for &i in &self.cells[r * self.ncols + c] {
                    f(i as usize);
                }
            }
        }
    }
}
