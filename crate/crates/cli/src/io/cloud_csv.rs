//! Point-cloud CSV: header `x,y,z[,red,green,blue][,intensity][,label]`,
//! comma-separated, `.` decimal point, UTF-8, LF line endings.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use cloudlabel_core::cloud::LabeledCloud;
use cloudlabel_core::LabelCode;

use super::FormatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    X,
    Y,
    Z,
    Red,
    Green,
    Blue,
    Intensity,
    Label,
}

impl Column {
    fn from_name(name: &str) -> Option<Column> {
        Some(match name {
            "x" => Column::X,
            "y" => Column::Y,
            "z" => Column::Z,
            "red" => Column::Red,
            "green" => Column::Green,
            "blue" => Column::Blue,
            "intensity" => Column::Intensity,
            "label" => Column::Label,
            _ => return None,
        })
    }
}

/// Reads a cloud tile. A missing label column leaves every point Unlabelled.
pub fn read_cloud_csv(path: &Path) -> Result<LabeledCloud, FormatError> {
    let file = File::open(path).map_err(|e| FormatError::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| FormatError::structure(path, "empty file, expected a header row"))?;
    let header = header.map_err(|e| FormatError::io(path, e))?;
    let mut columns = Vec::new();
    for name in header.split(',') {
        let name = name.trim();
        let column = Column::from_name(name)
            .ok_or_else(|| FormatError::parse(path, 1, format!("unknown column `{name}`")))?;
        if columns.contains(&column) {
            return Err(FormatError::parse(path, 1, format!("duplicate column `{name}`")));
        }
        columns.push(column);
    }
    for required in [Column::X, Column::Y, Column::Z] {
        if !columns.contains(&required) {
            return Err(FormatError::parse(path, 1, "missing mandatory column (x, y, z)"));
        }
    }
    let rgb_count = columns
        .iter()
        .filter(|c| matches!(c, Column::Red | Column::Green | Column::Blue))
        .count();
    if rgb_count != 0 && rgb_count != 3 {
        return Err(FormatError::parse(
            path,
            1,
            "red, green, blue must appear together",
        ));
    }

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut zs = Vec::new();
    let mut rgb: Vec<[u8; 3]> = Vec::new();
    let mut intensity: Vec<f64> = Vec::new();
    let mut labels: Vec<LabelCode> = Vec::new();

    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| FormatError::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(FormatError::parse(
                path,
                line_no,
                format!("expected {} fields, found {}", columns.len(), fields.len()),
            ));
        }
        let mut row_rgb = [0u8; 3];
        for (column, field) in columns.iter().zip(&fields) {
            let field = field.trim();
            match column {
                Column::X | Column::Y | Column::Z | Column::Intensity => {
                    let v: f64 = field.parse().map_err(|_| {
                        FormatError::parse(path, line_no, format!("non-numeric cell `{field}`"))
                    })?;
                    if !v.is_finite() {
                        return Err(FormatError::parse(
                            path,
                            line_no,
                            format!("non-finite value `{field}`"),
                        ));
                    }
                    match column {
                        Column::X => xs.push(v),
                        Column::Y => ys.push(v),
                        Column::Z => zs.push(v),
                        Column::Intensity => intensity.push(v),
                        _ => unreachable!(),
                    }
                }
                Column::Red | Column::Green | Column::Blue => {
                    let v: u8 = field.parse().map_err(|_| {
                        FormatError::parse(
                            path,
                            line_no,
                            format!("color value `{field}` is not an integer in [0, 255]"),
                        )
                    })?;
                    match column {
                        Column::Red => row_rgb[0] = v,
                        Column::Green => row_rgb[1] = v,
                        Column::Blue => row_rgb[2] = v,
                        _ => unreachable!(),
                    }
                }
                Column::Label => {
                    let v: u8 = field.parse().map_err(|_| {
                        FormatError::parse(path, line_no, format!("invalid label code `{field}`"))
                    })?;
                    let code = LabelCode::from_code(v).ok_or_else(|| {
                        FormatError::parse(path, line_no, format!("invalid label code `{field}`"))
                    })?;
                    labels.push(code);
                }
            }
        }
        if rgb_count == 3 {
            rgb.push(row_rgb);
        }
    }

    let n = xs.len();
    let mut cloud = LabeledCloud::from_xyz(xs, ys, zs)
        .map_err(|e| FormatError::structure(path, e.to_string()))?;
    if rgb_count == 3 {
        cloud.rgb = Some(rgb);
    }
    if columns.contains(&Column::Intensity) {
        cloud.intensity = Some(intensity);
    }
    if columns.contains(&Column::Label) {
        cloud.label = labels;
    }
    debug_assert_eq!(cloud.label.len(), n);
    cloud
        .check_tile_bounds()
        .map_err(|e| FormatError::structure(path, e.to_string()))?;
    Ok(cloud)
}

/// Writes a cloud tile. Coordinates carry three decimal places (millimeter
/// precision); the label column is always present.
pub fn write_cloud_csv(cloud: &LabeledCloud, path: &Path) -> Result<(), FormatError> {
    let file = File::create(path).map_err(|e| FormatError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let write = |res: std::io::Result<()>| res.map_err(|e| FormatError::io(path, e));

    let mut header = String::from("x,y,z");
    if cloud.rgb.is_some() {
        header.push_str(",red,green,blue");
    }
    if cloud.intensity.is_some() {
        header.push_str(",intensity");
    }
    header.push_str(",label");
    write(writeln!(w, "{header}"))?;

    for i in 0..cloud.len() {
        let mut line = format!("{:.3},{:.3},{:.3}", cloud.x[i], cloud.y[i], cloud.z[i]);
        if let Some(rgb) = &cloud.rgb {
            let [r, g, b] = rgb[i];
            line.push_str(&format!(",{r},{g},{b}"));
        }
        if let Some(intensity) = &cloud.intensity {
            line.push_str(&format!(",{:.3}", intensity[i]));
        }
        line.push_str(&format!(",{}", cloud.label[i].code()));
        write(writeln!(w, "{line}"))?;
    }
    write(w.flush())
}
