//! Scene spec loading and scene output files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

use cloudlabel_core::cloud::{LabelCode, TileIndexName};
use cloudlabel_core::synth::{Scene, SceneSpec};

use crate::io::{write_cloud_csv, write_raster_asc, write_topo_geojson};

pub fn load_scene_spec(path: &Path) -> anyhow::Result<SceneSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: SceneSpec =
        toml::from_str(&text).with_context(|| format!("{}: invalid scene spec", path.display()))?;
    Ok(spec)
}

/// Writes the five scene files and returns their paths:
/// truth and unlabelled clouds, ground and roof rasters, topo map.
pub fn write_scene_files(scene: &Scene, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let tile = TileIndexName::from_origin(scene.truth.tile_origin);

    let truth_path = out_dir.join(format!("truth_{tile}.csv"));
    let cloud_path = out_dir.join(format!("cloud_{tile}.csv"));
    let ground_path = out_dir.join(format!("ground_{tile}.asc"));
    let roof_path = out_dir.join(format!("roof_{tile}.asc"));
    let topo_path = out_dir.join(format!("topo_{tile}.geojson"));

    write_cloud_csv(&scene.truth, &truth_path)?;
    let mut unlabelled = scene.truth.clone();
    unlabelled.label.fill(LabelCode::Unlabelled);
    write_cloud_csv(&unlabelled, &cloud_path)?;
    write_raster_asc(&scene.ground, &ground_path)?;
    write_raster_asc(&scene.roof, &roof_path)?;
    write_topo_geojson(&scene.topo, &topo_path)?;

    Ok(vec![truth_path, cloud_path, ground_path, roof_path, topo_path])
}
