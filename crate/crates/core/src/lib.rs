//! Labelling algorithms for urban street-level point clouds.
//!
//! The crate fuses a point cloud with two external data sources — an
//! elevation raster (ground surface and building-top heights) and a
//! topographical vector map (building footprints, road/parking polygons,
//! pole-object coordinates) — to assign semantic labels to points, and then
//! completes partially labelled objects with cluster-based region growing.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm`
//! feature instead of the default `std` feature for `no_std` builds. File
//! formats and the command-line interface live in the companion
//! `cloudlabel-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("cloudlabel-core needs either the `std` or the `libm` feature");

pub mod building;
pub mod car;
pub mod cloud;
pub mod config;
pub mod error;
pub mod geom;
pub mod ground;
pub mod growing;
mod math;
pub mod pipeline;
mod pointgrid;
pub mod pole;
pub mod raster;
pub mod report;
pub mod synth;
pub mod topo;

pub use cloud::{LabelCode, LabelMask, LabeledCloud};
pub use config::PipelineConfig;
pub use raster::ElevationRaster;
pub use report::ClassReport;
pub use topo::TopoMap;
