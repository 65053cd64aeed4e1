//! Tile-level orchestration of the labelling modules.

use crate::building::label_buildings;
use crate::car::label_cars;
use crate::cloud::{LabelCode, LabelMask, LabeledCloud};
use crate::config::{PipelineConfig, Stage};
use crate::error::PipelineError;
use crate::ground::{label_ground, label_noise_below};
use crate::growing::{connected_components, grow_banded};
use crate::pole::label_poles;
use crate::raster::ElevationRaster;
use crate::report::{stats, ClassReport};
use crate::topo::{PointKind, TopoMap};

/// Runs the configured stages over one tile, in order:
/// gap filling, ground, below-ground noise, buildings, cars, pole seeding,
/// building growing, pole growing. Identical inputs and configuration give
/// a byte-identical label column.
///
/// Fails before touching any label when either raster does not cover the
/// cloud's points.
pub fn run_tile(
    cloud: &mut LabeledCloud,
    ground: &ElevationRaster,
    roof: &ElevationRaster,
    topo: &TopoMap,
    config: &PipelineConfig,
) -> Result<ClassReport, PipelineError> {
    config.validate()?;
    if let Some(bounds) = cloud.bounds() {
        check_covers("ground", ground, bounds)?;
        check_covers("roof", roof, bounds)?;
    }

    let ground = ground.fill_gaps(config.raster.max_gap_cells);

    for stage in &config.pipeline.stages {
        match stage {
            Stage::Ground => {
                label_ground(cloud, &ground, config.ground.margin_m);
            }
            Stage::Noise => {
                label_noise_below(cloud, &ground, config.ground.noise_margin_m);
            }
            Stage::Building => {
                label_buildings(
                    cloud,
                    &topo.footprints,
                    roof,
                    config.building.inflate_m,
                    config.building.roof_margin_m,
                    config.building.roof_lookup,
                );
            }
            Stage::Car => {
                let mask = LabelMask(
                    cloud
                        .label
                        .iter()
                        .map(|l| *l == LabelCode::Unlabelled)
                        .collect(),
                );
                let clusters = connected_components(
                    cloud,
                    &mask,
                    config.car.cc_voxel_m,
                    config.car.min_cluster_points,
                );
                label_cars(
                    cloud,
                    &clusters,
                    &topo.roads,
                    &ground,
                    &config.car.dims(),
                    config.car.base_clearance_m,
                );
            }
            Stage::Pole => {
                label_poles(cloud, topo, &ground, &config.pole);
            }
            Stage::GrowBuilding => {
                grow_banded(cloud, &ground, LabelCode::Building, &config.grow.building.bands);
            }
            Stage::GrowPole => {
                for kind in PointKind::ALL {
                    grow_banded(cloud, &ground, kind.label(), &config.grow.pole.bands);
                }
            }
        }
    }
    Ok(stats(cloud))
}

fn check_covers(
    name: &'static str,
    raster: &ElevationRaster,
    bounds: (f64, f64, f64, f64),
) -> Result<(), PipelineError> {
    let (px0, py0, px1, py1) = bounds;
    let (rx0, ry0, rx1, ry1) = raster.extent();
    if px0 < rx0 || py0 < ry0 || px1 > rx1 || py1 > ry1 {
        return Err(PipelineError::ExtentMismatch {
            raster: name,
            rx0,
            rx1,
            ry0,
            ry1,
            px0,
            px1,
            py0,
            py1,
        });
    }
    Ok(())
}
