//! Elevation-grid queries and gap filling.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::RasterError;
use crate::math;

/// Regular grid of heights with a nodata mask.
///
/// `origin` is the lower-left corner of the grid extent; row 0 is the
/// southernmost row. Cell `(row, col)` covers
/// `[origin + (col, row) * cell_size, origin + (col+1, row+1) * cell_size)`
/// and its center carries the height value.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationRaster {
    origin: (f64, f64),
    cell_size: f64,
    ncols: usize,
    nrows: usize,
    values: Vec<f64>,
    /// true = data, false = nodata.
    mask: Vec<bool>,
}

impl ElevationRaster {
    pub fn new(
        origin: (f64, f64),
        cell_size: f64,
        ncols: usize,
        nrows: usize,
        values: Vec<f64>,
        mask: Vec<bool>,
    ) -> Result<ElevationRaster, RasterError> {
        if ncols == 0 || nrows == 0 {
            return Err(RasterError::EmptyGrid { ncols, nrows });
        }
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(RasterError::BadCellSize(cell_size));
        }
        let expected = ncols * nrows;
        if values.len() != expected {
            return Err(RasterError::BadBufferLength {
                got: values.len(),
                expected,
            });
        }
        if mask.len() != expected {
            return Err(RasterError::BadBufferLength {
                got: mask.len(),
                expected,
            });
        }
        for row in 0..nrows {
            for col in 0..ncols {
                let i = row * ncols + col;
                if mask[i] && !values[i].is_finite() {
                    return Err(RasterError::NonFiniteValue { row, col });
                }
            }
        }
        Ok(ElevationRaster {
            origin,
            cell_size,
            ncols,
            nrows,
            values,
            mask,
        })
    }

    /// All-nodata raster of the given shape.
    pub fn empty(
        origin: (f64, f64),
        cell_size: f64,
        ncols: usize,
        nrows: usize,
    ) -> Result<ElevationRaster, RasterError> {
        ElevationRaster::new(
            origin,
            cell_size,
            ncols,
            nrows,
            vec![0.0; ncols * nrows],
            vec![false; ncols * nrows],
        )
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// `(xmin, ymin, xmax, ymax)` of the grid extent.
    pub fn extent(&self) -> (f64, f64, f64, f64) {
        (
            self.origin.0,
            self.origin.1,
            self.origin.0 + self.ncols as f64 * self.cell_size,
            self.origin.1 + self.nrows as f64 * self.cell_size,
        )
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let i = row * self.ncols + col;
        if self.mask[i] {
            Some(self.values[i])
        } else {
            None
        }
    }

    pub fn is_data(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.ncols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        let i = row * self.ncols + col;
        self.values[i] = value;
        self.mask[i] = true;
    }

    pub fn set_nodata(&mut self, row: usize, col: usize) {
        let i = row * self.ncols + col;
        self.mask[i] = false;
    }

    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        (
            self.origin.0 + (col as f64 + 0.5) * self.cell_size,
            self.origin.1 + (row as f64 + 0.5) * self.cell_size,
        )
    }

    /// Cell containing `(x, y)`, or `None` outside the extent.
    pub fn cell_at(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let fx = (x - self.origin.0) / self.cell_size;
        let fy = (y - self.origin.1) / self.cell_size;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let col = math::floor(fx) as usize;
        let row = math::floor(fy) as usize;
        if col >= self.ncols || row >= self.nrows {
            return None;
        }
        Some((row, col))
    }

    /// Interpolation anchor along one axis: low index and fraction, with the
    /// outer half-cell margins clamped to the edge cell.
    fn axis_anchor(f: f64, n: usize) -> (usize, usize, f64) {
        let t = f - 0.5;
        if t <= 0.0 {
            return (0, 0, 0.0);
        }
        let i0 = math::floor(t) as usize;
        if i0 + 1 >= n {
            return (n - 1, n - 1, 0.0);
        }
        (i0, i0 + 1, t - i0 as f64)
    }

    /// Bilinear height among the 4 surrounding cell centers.
    ///
    /// Returns `None` outside the extent or when any contributing cell is
    /// nodata; the outer half-cell margin inside the extent degrades to the
    /// nearest edge cell so the surface is defined on the whole extent.
    pub fn query_z(&self, x: f64, y: f64) -> Option<f64> {
        let fx = (x - self.origin.0) / self.cell_size;
        let fy = (y - self.origin.1) / self.cell_size;
        if fx < 0.0 || fy < 0.0 || fx > self.ncols as f64 || fy > self.nrows as f64 {
            return None;
        }
        let (c0, c1, u) = Self::axis_anchor(fx, self.ncols);
        let (r0, r1, v) = Self::axis_anchor(fy, self.nrows);
        let z00 = self.get(r0, c0)?;
        let z01 = self.get(r0, c1)?;
        let z10 = self.get(r1, c0)?;
        let z11 = self.get(r1, c1)?;
        let low = z00 + (z01 - z00) * u;
        let high = z10 + (z11 - z10) * u;
        Some(low + (high - low) * v)
    }

    /// Maximum of the up-to-4 surrounding cell centers that carry data.
    ///
    /// Used for roof lookups, where interpolating across the roof edge would
    /// pull the cutoff below legitimate facade points.
    pub fn query_max4(&self, x: f64, y: f64) -> Option<f64> {
        let fx = (x - self.origin.0) / self.cell_size;
        let fy = (y - self.origin.1) / self.cell_size;
        if fx < 0.0 || fy < 0.0 || fx > self.ncols as f64 || fy > self.nrows as f64 {
            return None;
        }
        let (c0, c1, _) = Self::axis_anchor(fx, self.ncols);
        let (r0, r1, _) = Self::axis_anchor(fy, self.nrows);
        let mut best: Option<f64> = None;
        for (r, c) in [(r0, c0), (r0, c1), (r1, c0), (r1, c1)] {
            if let Some(z) = self.get(r, c) {
                best = Some(match best {
                    Some(b) => b.max(z),
                    None => z,
                });
            }
        }
        best
    }

    /// Fills nodata regions whose every cell is within `max_gap_cells`
    /// (Chebyshev metric) of a data cell, by Laplacian relaxation with the
    /// surrounding data cells as fixed boundary. Larger regions stay nodata;
    /// data cells are never modified.
    pub fn fill_gaps(&self, max_gap_cells: u32) -> ElevationRaster {
        let mut out = self.clone();
        if max_gap_cells == 0 {
            return out;
        }
        let n = self.ncols * self.nrows;
        if self.mask.iter().all(|m| !m) || self.mask.iter().all(|m| *m) {
            return out;
        }

        let dist = self.chebyshev_distance_to_data();

        // Group nodata cells into 8-connected regions and keep the small ones.
        let mut region = vec![u32::MAX; n];
        let mut fill_cells: Vec<Vec<usize>> = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if self.mask[start] || region[start] != u32::MAX {
                continue;
            }
            let id = fill_cells.len() as u32;
            let mut cells = Vec::new();
            let mut max_d = 0u32;
            region[start] = id;
            stack.push(start);
            while let Some(i) = stack.pop() {
                cells.push(i);
                max_d = max_d.max(dist[i]);
                let (r, c) = (i / self.ncols, i % self.ncols);
                for dr in -1i64..=1 {
                    for dc in -1i64..=1 {
                        if dr == 0 && dc == 0 {
                            continue;
                        }
                        let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                        if nr < 0 || nc < 0 || nr >= self.nrows as i64 || nc >= self.ncols as i64 {
                            continue;
                        }
                        let j = nr as usize * self.ncols + nc as usize;
                        if !self.mask[j] && region[j] == u32::MAX {
                            region[j] = id;
                            stack.push(j);
                        }
                    }
                }
            }
            if max_d <= max_gap_cells {
                cells.sort_unstable();
                fill_cells.push(cells);
            } else {
                fill_cells.push(Vec::new());
            }
        }

        for cells in fill_cells.iter().filter(|c| !c.is_empty()) {
            out.relax_region(cells);
        }
        out
    }

    /// Chebyshev distance to the nearest data cell, via a two-pass chamfer
    /// transform with 8-neighborhood and unit step cost.
    fn chebyshev_distance_to_data(&self) -> Vec<u32> {
        let inf = u32::MAX / 2;
        let mut d: Vec<u32> = self.mask.iter().map(|m| if *m { 0 } else { inf }).collect();
        let (nr, nc) = (self.nrows as i64, self.ncols as i64);
        let idx = |r: i64, c: i64| (r * nc + c) as usize;
        // forward pass
        for r in 0..nr {
            for c in 0..nc {
                let mut best = d[idx(r, c)];
                for (dr, dc) in [(-1, -1), (-1, 0), (-1, 1), (0, -1)] {
                    let (pr, pc) = (r + dr, c + dc);
                    if pr >= 0 && pc >= 0 && pc < nc {
                        best = best.min(d[idx(pr, pc)] + 1);
                    }
                }
                d[idx(r, c)] = best;
            }
        }
        // backward pass
        for r in (0..nr).rev() {
            for c in (0..nc).rev() {
                let mut best = d[idx(r, c)];
                for (dr, dc) in [(1, 1), (1, 0), (1, -1), (0, 1)] {
                    let (pr, pc) = (r + dr, c + dc);
                    if pr < nr && pc >= 0 && pc < nc {
                        best = best.min(d[idx(pr, pc)] + 1);
                    }
                }
                d[idx(r, c)] = best;
            }
        }
        d
    }

    /// Gauss-Seidel relaxation of the discrete Laplace equation over the
    /// given cells, with 4-neighbor data cells as fixed boundary. Converged
    /// when the largest per-iteration change drops below 1 mm.
    fn relax_region(&mut self, cells: &[usize]) {
        // Start from the mean of the data cells adjacent to the region so the
        // maximum principle holds from the first iterate.
        let mut boundary_sum = 0.0;
        let mut boundary_n = 0usize;
        for &i in cells {
            let (r, c) = (i / self.ncols, i % self.ncols);
            for (nr, nc) in self.neighbors4(r, c) {
                if self.is_data(nr, nc) {
                    boundary_sum += self.values[nr * self.ncols + nc];
                    boundary_n += 1;
                }
            }
        }
        if boundary_n == 0 {
            return; // isolated region with no data boundary: leave nodata
        }
        let init = boundary_sum / boundary_n as f64;
        let mut estimate: Vec<f64> = vec![init; cells.len()];
        let mut slot = hashbrown::HashMap::with_capacity(cells.len());
        for (k, &i) in cells.iter().enumerate() {
            slot.insert(i, k);
        }

        const TOLERANCE_M: f64 = 1e-3;
        const MAX_ITERATIONS: usize = 100_000;
        for _ in 0..MAX_ITERATIONS {
            let mut max_change = 0.0f64;
            for (k, &i) in cells.iter().enumerate() {
                let (r, c) = (i / self.ncols, i % self.ncols);
                let mut sum = 0.0;
                let mut n = 0usize;
                for (nr, nc) in self.neighbors4(r, c) {
                    let j = nr * self.ncols + nc;
                    if self.mask[j] {
                        sum += self.values[j];
                        n += 1;
                    } else if let Some(&kk) = slot.get(&j) {
                        sum += estimate[kk];
                        n += 1;
                    }
                }
                if n == 0 {
                    continue;
                }
                let new = sum / n as f64;
                max_change = max_change.max(math::fabs(new - estimate[k]));
                estimate[k] = new;
            }
            if max_change < TOLERANCE_M {
                break;
            }
        }
        for (k, &i) in cells.iter().enumerate() {
            self.values[i] = estimate[k];
            self.mask[i] = true;
        }
    }

    fn neighbors4(&self, r: usize, c: usize) -> impl Iterator<Item = (usize, usize)> {
        let (nr, nc) = (self.nrows, self.ncols);
        [
            (r.wrapping_sub(1), c),
            (r + 1, c),
            (r, c.wrapping_sub(1)),
            (r, c + 1),
        ]
        .into_iter()
        .filter(move |&(rr, cc)| rr < nr && cc < nc)
    }
}
