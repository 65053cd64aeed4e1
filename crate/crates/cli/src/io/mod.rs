//! Text file formats: cloud CSV, Esri ASCII grids, topo GeoJSON.
//!
//! All readers are strict: a row or feature that cannot be interpreted
//! aborts the load with an error naming the offending line or feature.

mod asc;
mod cloud_csv;
mod geojson;

pub use asc::{read_raster_asc, write_raster_asc};
pub use cloud_csv::{read_cloud_csv, write_cloud_csv};
pub use geojson::{read_topo_geojson, write_topo_geojson};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("{path} feature {feature}: {reason}")]
    Feature {
        path: String,
        feature: usize,
        reason: String,
    },
    #[error("{path}: {reason}")]
    Structure { path: String, reason: String },
}

impl FormatError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> FormatError {
        FormatError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn parse(path: &std::path::Path, line: usize, reason: impl Into<String>) -> FormatError {
        FormatError::Parse {
            path: path.display().to_string(),
            line,
            reason: reason.into(),
        }
    }

    pub(crate) fn feature(path: &std::path::Path, feature: usize, reason: impl Into<String>) -> FormatError {
        FormatError::Feature {
            path: path.display().to_string(),
            feature,
            reason: reason.into(),
        }
    }

    pub(crate) fn structure(path: &std::path::Path, reason: impl Into<String>) -> FormatError {
        FormatError::Structure {
            path: path.display().to_string(),
            reason: reason.into(),
        }
    }
}
