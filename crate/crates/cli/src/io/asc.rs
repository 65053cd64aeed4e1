//! Esri ASCII grid (`.asc`) elevation rasters.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use cloudlabel_core::ElevationRaster;

use super::FormatError;

const HEADER_KEYS: [&str; 6] = [
    "ncols",
    "nrows",
    "xllcorner",
    "yllcorner",
    "cellsize",
    "nodata_value",
];

/// Reads an Esri ASCII grid. Cells equal to the declared nodata value are
/// masked. The header must carry all six standard keys.
pub fn read_raster_asc(path: &Path) -> Result<ElevationRaster, FormatError> {
    let file = File::open(path).map_err(|e| FormatError::io(path, e))?;
    let reader = BufReader::new(file);

    let mut header: [Option<f64>; 6] = [None; 6];
    let mut values: Vec<f64> = Vec::new();
    let mut data_rows = 0usize;
    let mut expected_cols: Option<usize> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| FormatError::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let first = parts.next().unwrap();
        let key = first.to_ascii_lowercase();
        if let Some(slot) = HEADER_KEYS.iter().position(|k| *k == key) {
            let value = parts.next().ok_or_else(|| {
                FormatError::parse(path, line_no, format!("header `{key}` has no value"))
            })?;
            if parts.next().is_some() {
                return Err(FormatError::parse(
                    path,
                    line_no,
                    format!("header `{key}` has trailing tokens"),
                ));
            }
            let value: f64 = value.parse().map_err(|_| {
                FormatError::parse(path, line_no, format!("header `{key}` is not numeric"))
            })?;
            if header[slot].is_some() {
                return Err(FormatError::parse(path, line_no, format!("duplicate header `{key}`")));
            }
            header[slot] = Some(value);
            continue;
        }

        // data row
        let missing: Vec<&str> = HEADER_KEYS
            .iter()
            .enumerate()
            .filter(|(i, _)| header[*i].is_none())
            .map(|(_, k)| *k)
            .collect();
        if !missing.is_empty() {
            return Err(FormatError::parse(
                path,
                line_no,
                format!("data before complete header; missing {}", missing.join(", ")),
            ));
        }
        let ncols = header[0].unwrap() as usize;
        expected_cols = Some(ncols);
        let mut count = 0usize;
        for token in core::iter::once(first).chain(parts) {
            let v: f64 = token.parse().map_err(|_| {
                FormatError::parse(path, line_no, format!("non-numeric cell `{token}`"))
            })?;
            values.push(v);
            count += 1;
        }
        if count != ncols {
            return Err(FormatError::parse(
                path,
                line_no,
                format!("row has {count} values, expected {ncols}"),
            ));
        }
        data_rows += 1;
    }

    let get = |slot: usize| -> Result<f64, FormatError> {
        header[slot].ok_or_else(|| {
            FormatError::structure(path, format!("missing header `{}`", HEADER_KEYS[slot]))
        })
    };
    let dim = |slot: usize| -> Result<usize, FormatError> {
        let v = get(slot)?;
        if v < 1.0 || v.fract() != 0.0 || v > 1e9 {
            return Err(FormatError::structure(
                path,
                format!("header `{}` must be a positive integer, got {v}", HEADER_KEYS[slot]),
            ));
        }
        Ok(v as usize)
    };
    let ncols = dim(0)?;
    let nrows = dim(1)?;
    let xll = get(2)?;
    let yll = get(3)?;
    let cellsize = get(4)?;
    let nodata = get(5)?;
    let _ = expected_cols;

    if data_rows != nrows {
        return Err(FormatError::structure(
            path,
            format!("found {data_rows} data rows, header says nrows {nrows}"),
        ));
    }

    // File rows run north to south; storage has row 0 at the south edge.
    let mut flipped = vec![0.0f64; values.len()];
    let mut mask = vec![false; values.len()];
    for file_row in 0..nrows {
        let store_row = nrows - 1 - file_row;
        for col in 0..ncols {
            let v = values[file_row * ncols + col];
            let i = store_row * ncols + col;
            if v == nodata {
                flipped[i] = 0.0;
            } else {
                if !v.is_finite() {
                    return Err(FormatError::structure(
                        path,
                        format!("non-finite value in row {file_row}"),
                    ));
                }
                flipped[i] = v;
                mask[i] = true;
            }
        }
    }

    ElevationRaster::new((xll, yll), cellsize, ncols, nrows, flipped, mask)
        .map_err(|e| FormatError::structure(path, e.to_string()))
}

/// Writes an Esri ASCII grid with `-9999` as the nodata value.
pub fn write_raster_asc(raster: &ElevationRaster, path: &Path) -> Result<(), FormatError> {
    const NODATA: f64 = -9999.0;
    let file = File::create(path).map_err(|e| FormatError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let write = |res: std::io::Result<()>| res.map_err(|e| FormatError::io(path, e));

    write(writeln!(w, "ncols {}", raster.ncols()))?;
    write(writeln!(w, "nrows {}", raster.nrows()))?;
    write(writeln!(w, "xllcorner {}", raster.origin().0))?;
    write(writeln!(w, "yllcorner {}", raster.origin().1))?;
    write(writeln!(w, "cellsize {}", raster.cell_size()))?;
    write(writeln!(w, "NODATA_value {NODATA}"))?;
    for file_row in 0..raster.nrows() {
        let row = raster.nrows() - 1 - file_row;
        let mut line = String::with_capacity(raster.ncols() * 8);
        for col in 0..raster.ncols() {
            if col > 0 {
                line.push(' ');
            }
            match raster.get(row, col) {
                Some(v) => line.push_str(&format!("{v:.3}")),
                None => line.push_str(&format!("{NODATA}")),
            }
        }
        write(writeln!(w, "{line}"))?;
    }
    write(w.flush())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_a_small_grid() {
        let f = write_tmp(
            "ncols 2\nnrows 2\nxllcorner 0.0\nyllcorner 0.0\ncellsize 1.0\nNODATA_value -9999\n\
             1.5 1.5\n1.5 1.5\n",
        );
        let r = read_raster_asc(f.path()).unwrap();
        assert_eq!(r.query_z(1.0, 1.0), Some(1.5));
        assert_eq!(r.cell_size(), 1.0);
    }

    #[test]
    fn nodata_cells_are_masked() {
        let f = write_tmp(
            "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n\
             -9999 2.0\n2.0 2.0\n",
        );
        let r = read_raster_asc(f.path()).unwrap();
        // first file row is the north row: store row 1
        assert!(!r.is_data(1, 0));
        assert!(r.is_data(1, 1));
        assert!(r.is_data(0, 0));
    }

    #[test]
    fn cellsize_survives_exactly() {
        let f = write_tmp(
            "ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 0.1\nNODATA_value -9999\n1.0\n",
        );
        let r = read_raster_asc(f.path()).unwrap();
        assert_eq!(r.cell_size(), 0.1);
    }

    #[test]
    fn row_length_mismatch_is_rejected() {
        let f = write_tmp(
            "ncols 3\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n1.0 2.0\n",
        );
        let err = read_raster_asc(f.path()).unwrap_err();
        assert!(err.to_string().contains("expected 3"), "{err}");
    }

    #[test]
    fn missing_header_key_is_rejected() {
        let f = write_tmp("ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n1.0\n");
        assert!(read_raster_asc(f.path()).is_err());
    }

    #[test]
    fn row_count_mismatch_is_rejected() {
        let f = write_tmp(
            "ncols 1\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n1.0\n",
        );
        assert!(read_raster_asc(f.path()).is_err());
    }

    #[test]
    fn round_trip_preserves_grid_and_mask() {
        let mut r = ElevationRaster::empty((-1.0, 2.0), 0.5, 4, 3).unwrap();
        for row in 0..3 {
            for col in 0..4 {
                if (row + col) % 3 != 0 {
                    r.set(row, col, row as f64 * 0.25 + col as f64 * 1.5 - 2.0);
                }
            }
        }
        let out = tempfile::NamedTempFile::new().unwrap();
        write_raster_asc(&r, out.path()).unwrap();
        let again = read_raster_asc(out.path()).unwrap();
        assert_eq!(again.origin(), r.origin());
        assert_eq!(again.cell_size(), r.cell_size());
        for row in 0..3 {
            for col in 0..4 {
                assert_eq!(again.is_data(row, col), r.is_data(row, col));
                if let (Some(a), Some(b)) = (again.get(row, col), r.get(row, col)) {
                    assert!((a - b).abs() <= 1e-3);
                }
            }
        }
    }
}
