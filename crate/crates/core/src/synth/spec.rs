//! Scene description consumed by the generator.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::topo::{PointKind, RoadKind};

/// Terrain model of a scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroundSpec {
    Plane { z: f64 },
    /// Two levels split at `step_x`: `z_low` west of it, `z_high` east.
    Terrace { z_low: f64, z_high: f64, step_x: f64 },
}

impl Default for GroundSpec {
    fn default() -> Self {
        GroundSpec::Plane { z: 0.0 }
    }
}

impl GroundSpec {
    /// Terrain height at a location.
    pub fn height_at(&self, x: f64) -> f64 {
        match *self {
            GroundSpec::Plane { z } => z,
            GroundSpec::Terrace { z_low, z_high, step_x } => {
                if x < step_x {
                    z_low
                } else {
                    z_high
                }
            }
        }
    }
}

/// Below-ground reflection artifacts to scatter over the scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectionSpec {
    pub count: usize,
    pub min_depth_m: f64,
    pub max_depth_m: f64,
}

/// Box protruding from a facade (balcony, canopy). Heights are relative to
/// the building base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtrusionSpec {
    /// `(xmin, ymin, xmax, ymax)` of the protruding box footprint.
    pub rect: (f64, f64, f64, f64),
    pub z_min_m: f64,
    pub z_max_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingSpec {
    /// `(xmin, ymin, xmax, ymax)` footprint rectangle.
    pub footprint: (f64, f64, f64, f64),
    pub height_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protrusion: Option<ProtrusionSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadSpec {
    /// `(xmin, ymin, xmax, ymax)` surface rectangle.
    pub rect: (f64, f64, f64, f64),
    pub kind: RoadKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarSpec {
    pub center: (f64, f64),
    pub length_m: f64,
    pub width_m: f64,
    /// Body height; the body floats `clearance_m` above the terrain.
    pub height_m: f64,
    #[serde(default)]
    pub yaw_rad: f64,
    #[serde(default = "default_clearance")]
    pub clearance_m: f64,
    /// Declares whether the car sits over the road layer; checked during
    /// generation so scenes stay honest.
    #[serde(default = "default_true")]
    pub on_road: bool,
}

fn default_clearance() -> f64 {
    0.3
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleSpec {
    pub kind: PointKind,
    pub x: f64,
    pub y: f64,
    /// Shaft length along its axis.
    pub height_m: f64,
    pub radius_m: f64,
    /// Lean from vertical, toward +x.
    #[serde(default)]
    pub lean_deg: f64,
    /// Tree crown radius; defaults to 1.15 x shaft radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crown_radius_m: Option<f64>,
    /// Lamp head box (length, width, height); defaults to 0.25 x 0.15 x 0.15.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head_m: Option<(f64, f64, f64)>,
    /// Traffic-sign plate edge; defaults to 0.3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plate_m: Option<f64>,
}

/// Unmapped obstacle (parked bicycle, container): a box that stays
/// Unlabelled in the truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClutterSpec {
    pub center: (f64, f64),
    pub length_m: f64,
    pub width_m: f64,
    pub height_m: f64,
    #[serde(default)]
    pub yaw_rad: f64,
}

/// Controlled data-quality degradations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PerturbSpec {
    /// Displaces every mapped pole coordinate by this distance (direction is
    /// seeded per object). The scene itself is unchanged.
    pub pole_offset_m: f64,
    /// Buildings (by index) to omit from the elevation rasters, modelling
    /// elevation data that predates them.
    pub stale_buildings: Vec<usize>,
}

/// Full description of a synthetic scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SceneSpec {
    pub seed: u64,
    /// Scene origin in CRS meters.
    pub origin_m: (f64, f64),
    /// Scene width and height in meters.
    pub extent_m: (f64, f64),
    /// Surface sampling density.
    pub density_pts_m2: f64,
    /// Gaussian measurement noise per axis.
    pub noise_sigma_m: f64,
    pub ground: GroundSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflections: Option<ReflectionSpec>,
    pub buildings: Vec<BuildingSpec>,
    pub roads: Vec<RoadSpec>,
    pub cars: Vec<CarSpec>,
    pub poles: Vec<PoleSpec>,
    pub clutter: Vec<ClutterSpec>,
    pub perturb: PerturbSpec,
}

impl Default for SceneSpec {
    fn default() -> Self {
        SceneSpec {
            seed: 0,
            origin_m: (0.0, 0.0),
            extent_m: (24.0, 24.0),
            density_pts_m2: 1500.0,
            noise_sigma_m: 0.02,
            ground: GroundSpec::default(),
            reflections: None,
            buildings: Vec::new(),
            roads: Vec::new(),
            cars: Vec::new(),
            poles: Vec::new(),
            clutter: Vec::new(),
            perturb: PerturbSpec::default(),
        }
    }
}
