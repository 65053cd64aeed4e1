//! Error types shared across the crate.

use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CloudError {
    #[error("column `{column}` has {got} entries, expected {expected}")]
    LengthMismatch {
        column: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("non-finite coordinate at point {index}")]
    NonFiniteCoordinate { index: usize },
    #[error("point {index} at ({x}, {y}) lies outside tile [{x0}, {x0_hi}) x [{y0}, {y0_hi})")]
    OutsideTile {
        index: usize,
        x: f64,
        y: f64,
        x0: f64,
        x0_hi: f64,
        y0: f64,
        y0_hi: f64,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("ring has fewer than 3 distinct vertices")]
    TooFewVertices,
    #[error("ring is self-intersecting (segments {0} and {1} cross)")]
    SelfIntersecting(usize, usize),
    #[error("offset distance must be >= 0, got {0}")]
    NegativeOffset(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RasterError {
    #[error("raster dimensions must be >= 1, got {ncols}x{nrows}")]
    EmptyGrid { ncols: usize, nrows: usize },
    #[error("cell size must be > 0, got {0}")]
    BadCellSize(f64),
    #[error("value buffer has {got} entries, expected {expected}")]
    BadBufferLength { got: usize, expected: usize },
    #[error("non-finite value in data cell ({row}, {col})")]
    NonFiniteValue { row: usize, col: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("config key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("{raster} raster extent [{rx0}, {rx1}) x [{ry0}, {ry1}) does not cover the points' bounds [{px0}, {px1}] x [{py0}, {py1}]")]
    ExtentMismatch {
        raster: &'static str,
        rx0: f64,
        rx1: f64,
        ry0: f64,
        ry1: f64,
        px0: f64,
        px1: f64,
        py0: f64,
        py1: f64,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("clouds have different sizes: {pred} predicted vs {truth} truth points")]
    SizeMismatch { pred: usize, truth: usize },
    #[error("coordinate mismatch at point {index}: clouds differ by more than 1 mm")]
    CoordinateMismatch { index: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("building footprints {0} and {1} overlap")]
    OverlappingFootprints(usize, usize),
    #[error("car {index} is marked on_road={on_road} but its center does not match the road layer")]
    CarRoadMismatch { index: usize, on_road: bool },
    #[error("invalid scene spec: {0}")]
    Invalid(String),
}
