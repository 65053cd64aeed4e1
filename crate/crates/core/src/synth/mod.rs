//! Deterministic synthetic-scene generation: a point cloud with exact truth
//! labels, plus matching elevation rasters and a topographical map.
//!
//! Scenes are pure functions of their spec; the same spec produces
//! byte-identical output. Randomness comes from a counter-based generator
//! keyed on (seed, object id, point index), so adding an object to a scene
//! does not disturb the points of existing objects.

mod generate;
mod rng;
mod spec;

pub use generate::{generate, Scene};
pub use rng::PointRng;
pub use spec::{
    BuildingSpec, CarSpec, ClutterSpec, GroundSpec, PerturbSpec, PoleSpec, ProtrusionSpec,
    ReflectionSpec, RoadSpec, SceneSpec,
};
