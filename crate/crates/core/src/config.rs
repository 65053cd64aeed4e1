//! Run configuration: every labelling threshold, band, and stage switch.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::building::RoofLookup;
use crate::car::CarDims;
use crate::error::ConfigError;
use crate::growing::GrowBand;
use crate::topo::PointKind;

/// One stage of the labelling pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Ground,
    Noise,
    Building,
    Car,
    Pole,
    GrowBuilding,
    GrowPole,
}

impl Stage {
    pub const DEFAULT_ORDER: [Stage; 7] = [
        Stage::Ground,
        Stage::Noise,
        Stage::Building,
        Stage::Car,
        Stage::Pole,
        Stage::GrowBuilding,
        Stage::GrowPole,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ground => "ground",
            Stage::Noise => "noise",
            Stage::Building => "building",
            Stage::Car => "car",
            Stage::Pole => "pole",
            Stage::GrowBuilding => "grow_building",
            Stage::GrowPole => "grow_pole",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineStages {
    /// Stages to run, in execution order. Remove entries to disable modules.
    pub stages: Vec<Stage>,
}

impl Default for PipelineStages {
    fn default() -> Self {
        PipelineStages {
            stages: Stage::DEFAULT_ORDER.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RasterConfig {
    /// Nodata regions up to this many cells from data are interpolated.
    pub max_gap_cells: u32,
}

impl Default for RasterConfig {
    fn default() -> Self {
        RasterConfig { max_gap_cells: 25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GroundConfig {
    pub margin_m: f64,
    pub noise_margin_m: f64,
}

impl Default for GroundConfig {
    fn default() -> Self {
        GroundConfig {
            margin_m: 0.25,
            noise_margin_m: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BuildingConfig {
    pub inflate_m: f64,
    pub roof_margin_m: f64,
    pub roof_lookup: RoofLookup,
}

impl Default for BuildingConfig {
    fn default() -> Self {
        BuildingConfig {
            inflate_m: 0.5,
            roof_margin_m: 0.25,
            roof_lookup: RoofLookup::Max4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CarConfig {
    pub length_m: (f64, f64),
    pub width_m: (f64, f64),
    pub height_m: (f64, f64),
    pub base_clearance_m: f64,
    pub cc_voxel_m: f64,
    pub min_cluster_points: usize,
}

impl Default for CarConfig {
    fn default() -> Self {
        let dims = CarDims::default();
        CarConfig {
            length_m: dims.length_m,
            width_m: dims.width_m,
            height_m: dims.height_m,
            base_clearance_m: 0.5,
            cc_voxel_m: 0.3,
            min_cluster_points: 100,
        }
    }
}

impl CarConfig {
    pub fn dims(&self) -> CarDims {
        CarDims {
            length_m: self.length_m,
            width_m: self.width_m,
            height_m: self.height_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PoleRadiusMax {
    pub lamp_post: f64,
    pub traffic_sign: f64,
    pub tree: f64,
}

impl Default for PoleRadiusMax {
    fn default() -> Self {
        PoleRadiusMax {
            lamp_post: 0.2,
            traffic_sign: 0.2,
            tree: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PoleConfig {
    pub half_extent_m: f64,
    pub cell_m: f64,
    pub min_height_m: f64,
    pub max_offset_m: f64,
    pub radius_max_m: PoleRadiusMax,
}

impl Default for PoleConfig {
    fn default() -> Self {
        PoleConfig {
            half_extent_m: 1.5,
            cell_m: 0.15,
            min_height_m: 2.0,
            max_offset_m: 1.5,
            radius_max_m: PoleRadiusMax::default(),
        }
    }
}

impl PoleConfig {
    pub fn radius_max(&self, kind: PointKind) -> f64 {
        match kind {
            PointKind::Tree => self.radius_max_m.tree,
            PointKind::LampPost => self.radius_max_m.lamp_post,
            PointKind::TrafficSign => self.radius_max_m.traffic_sign,
        }
    }

    /// An estimated shaft radius is acceptable when positive and strictly
    /// below the per-kind bound.
    pub fn accepts_radius(&self, kind: PointKind, radius: f64) -> bool {
        radius > 0.0 && radius < self.radius_max(kind)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct GrowBands {
    pub bands: Vec<GrowBand>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowConfig {
    pub building: GrowBands,
    pub pole: GrowBands,
}

impl Default for GrowConfig {
    fn default() -> Self {
        GrowConfig {
            building: GrowBands {
                bands: alloc::vec![
                    GrowBand {
                        z_min_m: 0.0,
                        z_max_m: Some(3.0),
                        voxel_m: 0.1,
                        threshold: 0.8,
                    },
                    GrowBand {
                        z_min_m: 3.0,
                        z_max_m: None,
                        voxel_m: 0.3,
                        threshold: 0.5,
                    },
                ],
            },
            pole: GrowBands {
                bands: alloc::vec![
                    GrowBand {
                        z_min_m: 0.0,
                        z_max_m: Some(2.5),
                        voxel_m: 0.1,
                        threshold: 0.8,
                    },
                    GrowBand {
                        z_min_m: 2.5,
                        z_max_m: None,
                        voxel_m: 0.25,
                        threshold: 0.4,
                    },
                ],
            },
        }
    }
}

/// Full run configuration. Unknown keys are rejected when deserializing;
/// ranges are checked by [`PipelineConfig::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub pipeline: PipelineStages,
    pub raster: RasterConfig,
    pub ground: GroundConfig,
    pub building: BuildingConfig,
    pub car: CarConfig,
    pub pole: PoleConfig,
    pub grow: GrowConfig,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |key: &str, v: f64| -> Result<(), ConfigError> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::Invalid {
                    key: key.to_string(),
                    reason: format!("must be > 0, got {v}"),
                })
            }
        };
        let range = |key: &str, (lo, hi): (f64, f64)| -> Result<(), ConfigError> {
            if !(lo > 0.0 && lo.is_finite() && hi.is_finite()) {
                return Err(ConfigError::Invalid {
                    key: key.to_string(),
                    reason: format!("bounds must be positive and finite, got ({lo}, {hi})"),
                });
            }
            if lo > hi {
                return Err(ConfigError::Invalid {
                    key: key.to_string(),
                    reason: format!("min {lo} exceeds max {hi}"),
                });
            }
            Ok(())
        };

        for (i, stage) in self.pipeline.stages.iter().enumerate() {
            if self.pipeline.stages[..i].contains(stage) {
                return Err(ConfigError::Invalid {
                    key: "pipeline.stages".to_string(),
                    reason: format!("stage `{}` appears twice", stage.name()),
                });
            }
        }

        positive("ground.margin_m", self.ground.margin_m)?;
        positive("ground.noise_margin_m", self.ground.noise_margin_m)?;

        if !(self.building.inflate_m >= 0.0 && self.building.inflate_m.is_finite()) {
            return Err(ConfigError::Invalid {
                key: "building.inflate_m".to_string(),
                reason: format!("must be >= 0, got {}", self.building.inflate_m),
            });
        }
        if !(self.building.roof_margin_m >= 0.0 && self.building.roof_margin_m.is_finite()) {
            return Err(ConfigError::Invalid {
                key: "building.roof_margin_m".to_string(),
                reason: format!("must be >= 0, got {}", self.building.roof_margin_m),
            });
        }

        range("car.length_m", self.car.length_m)?;
        range("car.width_m", self.car.width_m)?;
        range("car.height_m", self.car.height_m)?;
        positive("car.base_clearance_m", self.car.base_clearance_m)?;
        positive("car.cc_voxel_m", self.car.cc_voxel_m)?;

        positive("pole.half_extent_m", self.pole.half_extent_m)?;
        positive("pole.cell_m", self.pole.cell_m)?;
        positive("pole.min_height_m", self.pole.min_height_m)?;
        positive("pole.max_offset_m", self.pole.max_offset_m)?;
        positive("pole.radius_max_m.lamp_post", self.pole.radius_max_m.lamp_post)?;
        positive("pole.radius_max_m.traffic_sign", self.pole.radius_max_m.traffic_sign)?;
        positive("pole.radius_max_m.tree", self.pole.radius_max_m.tree)?;

        validate_bands("grow.building.bands", &self.grow.building.bands)?;
        validate_bands("grow.pole.bands", &self.grow.pole.bands)?;
        Ok(())
    }
}

fn validate_bands(key: &str, bands: &[GrowBand]) -> Result<(), ConfigError> {
    let invalid = |reason: String| ConfigError::Invalid {
        key: key.to_string(),
        reason,
    };
    for band in bands {
        if !(band.voxel_m > 0.0 && band.voxel_m.is_finite()) {
            return Err(invalid(format!("voxel_m must be > 0, got {}", band.voxel_m)));
        }
        if !(band.threshold > 0.0 && band.threshold <= 1.0) {
            return Err(invalid(format!(
                "threshold must be in (0, 1], got {}",
                band.threshold
            )));
        }
        if band.z_min_m >= band.z_max() {
            return Err(invalid(format!(
                "band [{}, {:?}) is empty",
                band.z_min_m, band.z_max_m
            )));
        }
    }
    let mut sorted: Vec<&GrowBand> = bands.iter().collect();
    sorted.sort_by(|a, b| a.z_min_m.total_cmp(&b.z_min_m));
    for pair in sorted.windows(2) {
        if pair[0].z_max() > pair[1].z_min_m {
            return Err(invalid(format!(
                "bands overlap around z = {}",
                pair[1].z_min_m
            )));
        }
    }
    Ok(())
}
