//! Scene generation: truth cloud, rasters, and topographical map.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::cloud::{LabelCode, LabeledCloud};
use crate::error::SynthError;
use crate::geom::Polygon2D;
use crate::math;
use crate::raster::ElevationRaster;
use crate::synth::rng::PointRng;
use crate::synth::spec::{GroundSpec, SceneSpec};
use crate::topo::{PointKind, PointObject, RoadPoly, TopoMap};

/// Raster resolution of the generated elevation grids.
pub const RASTER_CELL_M: f64 = 0.1;

/// Generated scene: exact truth plus the reference data a pipeline run needs.
#[derive(Debug, Clone)]
pub struct Scene {
    pub truth: LabeledCloud,
    pub ground: ElevationRaster,
    pub roof: ElevationRaster,
    pub topo: TopoMap,
}

/// One sampleable surface.
enum Primitive {
    Quad {
        origin: [f64; 3],
        e1: [f64; 3],
        e2: [f64; 3],
    },
    /// Lateral cylinder surface; `axis`, `u`, `v` form an orthonormal frame.
    Cylinder {
        base: [f64; 3],
        axis: [f64; 3],
        u: [f64; 3],
        v: [f64; 3],
        radius: f64,
        length: f64,
    },
    Sphere {
        center: [f64; 3],
        radius: f64,
    },
}

impl Primitive {
    fn area(&self) -> f64 {
        match self {
            Primitive::Quad { e1, e2, .. } => {
                let cx = e1[1] * e2[2] - e1[2] * e2[1];
                let cy = e1[2] * e2[0] - e1[0] * e2[2];
                let cz = e1[0] * e2[1] - e1[1] * e2[0];
                math::sqrt(cx * cx + cy * cy + cz * cz)
            }
            Primitive::Cylinder { radius, length, .. } => core::f64::consts::TAU * radius * length,
            Primitive::Sphere { radius, .. } => 4.0 * core::f64::consts::PI * radius * radius,
        }
    }

    fn sample(&self, rng: &mut PointRng) -> [f64; 3] {
        match self {
            Primitive::Quad { origin, e1, e2 } => {
                let a = rng.uniform();
                let b = rng.uniform();
                [
                    origin[0] + a * e1[0] + b * e2[0],
                    origin[1] + a * e1[1] + b * e2[1],
                    origin[2] + a * e1[2] + b * e2[2],
                ]
            }
            Primitive::Cylinder {
                base,
                axis,
                u,
                v,
                radius,
                length,
            } => {
                let theta = rng.uniform() * core::f64::consts::TAU;
                let h = rng.uniform() * length;
                let (ct, st) = (math::cos(theta), math::sin(theta));
                [
                    base[0] + h * axis[0] + radius * (ct * u[0] + st * v[0]),
                    base[1] + h * axis[1] + radius * (ct * u[1] + st * v[1]),
                    base[2] + h * axis[2] + radius * (ct * u[2] + st * v[2]),
                ]
            }
            Primitive::Sphere { center, radius } => {
                let cos_t = 1.0 - 2.0 * rng.uniform();
                let sin_t = math::sqrt((1.0 - cos_t * cos_t).max(0.0));
                let phi = rng.uniform() * core::f64::consts::TAU;
                [
                    center[0] + radius * sin_t * math::cos(phi),
                    center[1] + radius * sin_t * math::sin(phi),
                    center[2] + radius * cos_t,
                ]
            }
        }
    }
}

struct SceneObject {
    id: u64,
    label: LabelCode,
    primitives: Vec<Primitive>,
}

/// Vertical quad between two heights along a horizontal segment.
fn wall(x0: f64, y0: f64, x1: f64, y1: f64, z0: f64, z1: f64) -> Primitive {
    Primitive::Quad {
        origin: [x0, y0, z0],
        e1: [x1 - x0, y1 - y0, 0.0],
        e2: [0.0, 0.0, z1 - z0],
    }
}

/// Horizontal quad at a fixed height.
fn horizontal(x0: f64, y0: f64, x1: f64, y1: f64, z: f64) -> Primitive {
    Primitive::Quad {
        origin: [x0, y0, z],
        e1: [x1 - x0, 0.0, 0.0],
        e2: [0.0, y1 - y0, 0.0],
    }
}

/// Sides and top of a yawed box (no bottom face).
fn box_shell(
    cx: f64,
    cy: f64,
    length: f64,
    width: f64,
    z0: f64,
    z1: f64,
    yaw: f64,
) -> Vec<Primitive> {
    let (s, c) = (math::sin(yaw), math::cos(yaw));
    let u = (c, s);
    let v = (-s, c);
    let corner = |du: f64, dv: f64| {
        (
            cx + du * length / 2.0 * u.0 + dv * width / 2.0 * v.0,
            cy + du * length / 2.0 * u.1 + dv * width / 2.0 * v.1,
        )
    };
    let c00 = corner(-1.0, -1.0);
    let c10 = corner(1.0, -1.0);
    let c11 = corner(1.0, 1.0);
    let c01 = corner(-1.0, 1.0);
    alloc::vec![
        wall(c00.0, c00.1, c10.0, c10.1, z0, z1),
        wall(c10.0, c10.1, c11.0, c11.1, z0, z1),
        wall(c11.0, c11.1, c01.0, c01.1, z0, z1),
        wall(c01.0, c01.1, c00.0, c00.1, z0, z1),
        Primitive::Quad {
            origin: [c00.0, c00.1, z1],
            e1: [c10.0 - c00.0, c10.1 - c00.1, 0.0],
            e2: [c01.0 - c00.0, c01.1 - c00.1, 0.0],
        },
    ]
}

fn rects_overlap(a: (f64, f64, f64, f64), b: (f64, f64, f64, f64)) -> bool {
    a.0 < b.2 && b.0 < a.2 && a.1 < b.3 && b.1 < a.3
}

/// Finite and strictly positive (rejects NaN).
fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

fn non_negative(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

fn check_rect(name: &str, index: usize, r: (f64, f64, f64, f64)) -> Result<(), SynthError> {
    let finite = [r.0, r.1, r.2, r.3].iter().all(|v| v.is_finite());
    if !finite || r.0 >= r.2 || r.1 >= r.3 {
        return Err(SynthError::Invalid(format!(
            "{name} {index} has an empty rectangle ({}, {}, {}, {})",
            r.0, r.1, r.2, r.3
        )));
    }
    Ok(())
}

fn validate(spec: &SceneSpec) -> Result<(), SynthError> {
    if !positive(spec.extent_m.0) || !positive(spec.extent_m.1) {
        return Err(SynthError::Invalid("extent_m must be positive".to_string()));
    }
    if !positive(spec.density_pts_m2) {
        return Err(SynthError::Invalid("density_pts_m2 must be > 0".to_string()));
    }
    if !non_negative(spec.noise_sigma_m) {
        return Err(SynthError::Invalid("noise_sigma_m must be >= 0".to_string()));
    }
    for (i, b) in spec.buildings.iter().enumerate() {
        check_rect("building", i, b.footprint)?;
        if !positive(b.height_m) {
            return Err(SynthError::Invalid(format!("building {i} height must be > 0")));
        }
        for (j, other) in spec.buildings.iter().enumerate().skip(i + 1) {
            if rects_overlap(b.footprint, other.footprint) {
                return Err(SynthError::OverlappingFootprints(i, j));
            }
        }
    }
    for (i, r) in spec.roads.iter().enumerate() {
        check_rect("road", i, r.rect)?;
    }
    for (i, car) in spec.cars.iter().enumerate() {
        if !positive(car.length_m)
            || !positive(car.width_m)
            || !positive(car.height_m)
            || !non_negative(car.clearance_m)
        {
            return Err(SynthError::Invalid(format!("car {i} has non-positive dimensions")));
        }
        let on_some_road = spec
            .roads
            .iter()
            .any(|r| {
                car.center.0 >= r.rect.0
                    && car.center.0 <= r.rect.2
                    && car.center.1 >= r.rect.1
                    && car.center.1 <= r.rect.3
            });
        if on_some_road != car.on_road {
            return Err(SynthError::CarRoadMismatch {
                index: i,
                on_road: car.on_road,
            });
        }
    }
    for (i, p) in spec.poles.iter().enumerate() {
        if !positive(p.height_m) || !positive(p.radius_m) {
            return Err(SynthError::Invalid(format!(
                "pole {i} must have positive height and radius"
            )));
        }
    }
    for (i, c) in spec.clutter.iter().enumerate() {
        if !positive(c.length_m) || !positive(c.width_m) || !positive(c.height_m) {
            return Err(SynthError::Invalid(format!("clutter {i} has non-positive dimensions")));
        }
    }
    if let Some(refl) = &spec.reflections {
        if !non_negative(refl.min_depth_m) || refl.min_depth_m > refl.max_depth_m {
            return Err(SynthError::Invalid("reflection depth range is invalid".to_string()));
        }
    }
    for &i in &spec.perturb.stale_buildings {
        if i >= spec.buildings.len() {
            return Err(SynthError::Invalid(format!(
                "stale building index {i} out of range"
            )));
        }
    }
    Ok(())
}

fn scene_objects(spec: &SceneSpec) -> Vec<SceneObject> {
    let (ox, oy) = spec.origin_m;
    let (w, h) = spec.extent_m;
    let terrain = |x: f64| spec.ground.height_at(x);
    let mut objects = Vec::new();

    // terrain, object 0
    let mut ground_prims = Vec::new();
    match spec.ground {
        GroundSpec::Plane { z } => ground_prims.push(horizontal(ox, oy, ox + w, oy + h, z)),
        GroundSpec::Terrace { z_low, z_high, step_x } => {
            if step_x > ox && step_x < ox + w {
                ground_prims.push(horizontal(ox, oy, step_x, oy + h, z_low));
                ground_prims.push(horizontal(step_x, oy, ox + w, oy + h, z_high));
                let (lo, hi) = if z_low < z_high { (z_low, z_high) } else { (z_high, z_low) };
                ground_prims.push(wall(step_x, oy, step_x, oy + h, lo, hi));
            } else {
                let z = spec.ground.height_at(ox + w / 2.0);
                ground_prims.push(horizontal(ox, oy, ox + w, oy + h, z));
            }
        }
    }
    objects.push(SceneObject {
        id: 0,
        label: LabelCode::Ground,
        primitives: ground_prims,
    });

    for (i, b) in spec.buildings.iter().enumerate() {
        let (x0, y0, x1, y1) = b.footprint;
        let base = terrain((x0 + x1) / 2.0);
        let top = base + b.height_m;
        let mut prims = alloc::vec![
            wall(x0, y0, x1, y0, base, top),
            wall(x1, y0, x1, y1, base, top),
            wall(x1, y1, x0, y1, base, top),
            wall(x0, y1, x0, y0, base, top),
            horizontal(x0, y0, x1, y1, top),
        ];
        if let Some(p) = &b.protrusion {
            let (px0, py0, px1, py1) = p.rect;
            let (bz0, bz1) = (base + p.z_min_m, base + p.z_max_m);
            prims.extend(box_shell(
                (px0 + px1) / 2.0,
                (py0 + py1) / 2.0,
                px1 - px0,
                py1 - py0,
                bz0,
                bz1,
                0.0,
            ));
            // underside of the protruding box is visible from the street
            prims.push(horizontal(px0, py0, px1, py1, bz0));
        }
        objects.push(SceneObject {
            id: 1000 + i as u64,
            label: LabelCode::Building,
            primitives: prims,
        });
    }

    for (i, car) in spec.cars.iter().enumerate() {
        let base = terrain(car.center.0) + car.clearance_m;
        objects.push(SceneObject {
            id: 2000 + i as u64,
            label: LabelCode::Car,
            primitives: box_shell(
                car.center.0,
                car.center.1,
                car.length_m,
                car.width_m,
                base,
                base + car.height_m,
                car.yaw_rad,
            ),
        });
    }

    for (i, pole) in spec.poles.iter().enumerate() {
        let base_z = terrain(pole.x);
        let lean = pole.lean_deg.to_radians();
        let axis = [math::sin(lean), 0.0, math::cos(lean)];
        let u = [math::cos(lean), 0.0, -math::sin(lean)];
        let v = [0.0, 1.0, 0.0];
        let top = [
            pole.x + pole.height_m * axis[0],
            pole.y,
            base_z + pole.height_m * axis[2],
        ];
        let mut prims = alloc::vec![Primitive::Cylinder {
            base: [pole.x, pole.y, base_z],
            axis,
            u,
            v,
            radius: pole.radius_m,
            length: pole.height_m,
        }];
        match pole.kind {
            PointKind::Tree => {
                let crown = pole.crown_radius_m.unwrap_or(pole.radius_m * 1.15);
                prims.push(Primitive::Sphere {
                    center: top,
                    radius: crown,
                });
            }
            PointKind::LampPost => {
                let (hl, hw, hh) = pole.head_m.unwrap_or((0.25, 0.15, 0.15));
                prims.extend(box_shell(top[0], top[1], hl, hw, top[2], top[2] + hh, 0.0));
                prims.push(horizontal(
                    top[0] - hl / 2.0,
                    top[1] - hw / 2.0,
                    top[0] + hl / 2.0,
                    top[1] + hw / 2.0,
                    top[2],
                ));
            }
            PointKind::TrafficSign => {
                let size = pole.plate_m.unwrap_or(0.3);
                let half_t = 0.01;
                let z1 = top[2] - 0.05;
                let z0 = z1 - size;
                for side in [-1.0, 1.0] {
                    prims.push(wall(
                        top[0] - size / 2.0,
                        top[1] + side * half_t,
                        top[0] + size / 2.0,
                        top[1] + side * half_t,
                        z0,
                        z1,
                    ));
                }
            }
        }
        objects.push(SceneObject {
            id: 3000 + i as u64,
            label: pole.kind.label(),
            primitives: prims,
        });
    }

    for (i, c) in spec.clutter.iter().enumerate() {
        let base = terrain(c.center.0);
        objects.push(SceneObject {
            id: 4000 + i as u64,
            label: LabelCode::Unlabelled,
            primitives: box_shell(
                c.center.0,
                c.center.1,
                c.length_m,
                c.width_m,
                base,
                base + c.height_m,
                c.yaw_rad,
            ),
        });
    }

    objects
}

/// Generates the scene: a truth-labelled cloud, ground and roof rasters at
/// 0.1 m, and the topographical map (with perturbations applied to the map,
/// never to the scene itself).
pub fn generate(spec: &SceneSpec) -> Result<Scene, SynthError> {
    validate(spec)?;
    let (ox, oy) = spec.origin_m;
    let (w, h) = spec.extent_m;
    let (x_hi, y_hi) = (ox + w, oy + h);

    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    let mut zs: Vec<f64> = Vec::new();
    let mut labels: Vec<LabelCode> = Vec::new();

    for object in scene_objects(spec) {
        for (prim_idx, prim) in object.primitives.iter().enumerate() {
            let count = math::round(prim.area() * spec.density_pts_m2) as u64;
            for p in 0..count {
                let mut rng = PointRng::new(spec.seed, object.id, prim_idx as u64, p);
                let pos = prim.sample(&mut rng);
                let x = pos[0] + rng.gauss(spec.noise_sigma_m);
                let y = pos[1] + rng.gauss(spec.noise_sigma_m);
                let z = pos[2] + rng.gauss(spec.noise_sigma_m);
                if x >= ox && x < x_hi && y >= oy && y < y_hi {
                    xs.push(x);
                    ys.push(y);
                    zs.push(z);
                    labels.push(object.label);
                }
            }
        }
    }

    if let Some(refl) = &spec.reflections {
        for p in 0..refl.count {
            let mut rng = PointRng::new(spec.seed, 5000, 0, p as u64);
            let x = rng.uniform_in(ox, x_hi);
            let y = rng.uniform_in(oy, y_hi);
            let depth = rng.uniform_in(refl.min_depth_m, refl.max_depth_m);
            xs.push(x);
            ys.push(y);
            zs.push(spec.ground.height_at(x) - depth);
            labels.push(LabelCode::Noise);
        }
    }

    let mut truth = LabeledCloud::from_xyz(xs, ys, zs)
        .map_err(|e| SynthError::Invalid(format!("generated cloud invalid: {e}")))?;
    truth.label = labels;

    // Rasters cover the scene plus a one-cell margin.
    let ncols = math::round(w / RASTER_CELL_M) as usize + 2;
    let nrows = math::round(h / RASTER_CELL_M) as usize + 2;
    let raster_origin = (ox - RASTER_CELL_M, oy - RASTER_CELL_M);
    let mut ground = ElevationRaster::empty(raster_origin, RASTER_CELL_M, ncols, nrows)
        .map_err(|e| SynthError::Invalid(format!("raster shape invalid: {e}")))?;
    let mut roof = ElevationRaster::empty(raster_origin, RASTER_CELL_M, ncols, nrows).unwrap();
    for row in 0..nrows {
        for col in 0..ncols {
            let (cx, cy) = ground.cell_center(row, col);
            ground.set(row, col, spec.ground.height_at(cx));
            for (i, b) in spec.buildings.iter().enumerate() {
                if spec.perturb.stale_buildings.contains(&i) {
                    continue;
                }
                let (x0, y0, x1, y1) = b.footprint;
                if cx >= x0 && cx <= x1 && cy >= y0 && cy <= y1 {
                    let base = spec.ground.height_at((x0 + x1) / 2.0);
                    roof.set(row, col, base + b.height_m);
                }
            }
        }
    }

    let footprints: Vec<Polygon2D> = spec
        .buildings
        .iter()
        .map(|b| Polygon2D::rect(b.footprint.0, b.footprint.1, b.footprint.2, b.footprint.3))
        .collect();
    let roads: Vec<RoadPoly> = spec
        .roads
        .iter()
        .map(|r| RoadPoly {
            kind: r.kind,
            poly: Polygon2D::rect(r.rect.0, r.rect.1, r.rect.2, r.rect.3),
        })
        .collect();
    let point_objects: Vec<PointObject> = spec
        .poles
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (mut x, mut y) = (p.x, p.y);
            if spec.perturb.pole_offset_m > 0.0 {
                let mut rng = PointRng::new(spec.seed, 6000 + i as u64, 0, 0);
                let angle = rng.uniform() * core::f64::consts::TAU;
                x += spec.perturb.pole_offset_m * math::cos(angle);
                y += spec.perturb.pole_offset_m * math::sin(angle);
            }
            PointObject {
                kind: p.kind,
                x,
                y,
            }
        })
        .collect();

    Ok(Scene {
        truth,
        ground,
        roof,
        topo: TopoMap::new(footprints, roads, point_objects),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::spec::{CarSpec, PoleSpec, ReflectionSpec, RoadSpec};
    use crate::topo::RoadKind;

    fn flat_scene() -> SceneSpec {
        SceneSpec {
            seed: 7,
            extent_m: (10.0, 10.0),
            density_pts_m2: 400.0,
            noise_sigma_m: 0.0,
            ground: GroundSpec::Plane { z: 1.0 },
            ..SceneSpec::default()
        }
    }

    #[test]
    fn flat_scene_is_all_ground_at_the_right_density() {
        let scene = generate(&flat_scene()).unwrap();
        let n = scene.truth.len();
        let expected = 10.0 * 10.0 * 400.0;
        assert!((n as f64 - expected).abs() / expected < 0.05, "{n} points");
        assert!(scene.truth.label.iter().all(|l| *l == LabelCode::Ground));
        assert_eq!(scene.ground.query_z(5.0, 5.0), Some(1.0));
    }

    #[test]
    fn generation_is_reproducible() {
        let mut spec = flat_scene();
        spec.noise_sigma_m = 0.02;
        spec.poles.push(PoleSpec {
            kind: PointKind::Tree,
            x: 5.0,
            y: 5.0,
            height_m: 4.0,
            radius_m: 0.2,
            lean_deg: 0.0,
            crown_radius_m: None,
            head_m: None,
            plate_m: None,
        });
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.truth, b.truth);
        assert_eq!(a.ground, b.ground);
        assert_eq!(a.roof, b.roof);
    }

    #[test]
    fn adding_an_object_does_not_move_existing_points() {
        let base = generate(&flat_scene()).unwrap();
        let mut with_car = flat_scene();
        with_car.roads.push(RoadSpec {
            rect: (2.0, 2.0, 8.0, 6.0),
            kind: RoadKind::Road,
        });
        with_car.cars.push(CarSpec {
            center: (5.0, 4.0),
            length_m: 4.2,
            width_m: 1.8,
            height_m: 1.3,
            yaw_rad: 0.2,
            clearance_m: 0.3,
            on_road: true,
        });
        let extended = generate(&with_car).unwrap();
        let n = base.truth.len();
        assert!(extended.truth.len() > n);
        assert_eq!(&extended.truth.x[..n], &base.truth.x[..]);
        assert_eq!(&extended.truth.z[..n], &base.truth.z[..]);
    }

    #[test]
    fn overlapping_footprints_are_rejected() {
        let mut spec = flat_scene();
        spec.buildings.push(crate::synth::spec::BuildingSpec {
            footprint: (1.0, 1.0, 5.0, 5.0),
            height_m: 6.0,
            protrusion: None,
        });
        spec.buildings.push(crate::synth::spec::BuildingSpec {
            footprint: (4.0, 4.0, 8.0, 8.0),
            height_m: 5.0,
            protrusion: None,
        });
        assert!(matches!(
            generate(&spec),
            Err(SynthError::OverlappingFootprints(0, 1))
        ));
    }

    #[test]
    fn car_road_declaration_is_checked() {
        let mut spec = flat_scene();
        spec.cars.push(CarSpec {
            center: (5.0, 5.0),
            length_m: 4.0,
            width_m: 1.8,
            height_m: 1.3,
            yaw_rad: 0.0,
            clearance_m: 0.3,
            on_road: true, // but there are no roads
        });
        assert!(matches!(
            generate(&spec),
            Err(SynthError::CarRoadMismatch { index: 0, .. })
        ));
    }

    #[test]
    fn pole_offset_moves_the_map_not_the_scene() {
        let mut spec = flat_scene();
        spec.poles.push(PoleSpec {
            kind: PointKind::LampPost,
            x: 5.0,
            y: 5.0,
            height_m: 4.0,
            radius_m: 0.05,
            lean_deg: 0.0,
            crown_radius_m: None,
            head_m: None,
            plate_m: None,
        });
        let unperturbed = generate(&spec).unwrap();
        spec.perturb.pole_offset_m = 2.0;
        let perturbed = generate(&spec).unwrap();
        assert_eq!(unperturbed.truth, perturbed.truth);
        let obj = perturbed.topo.point_objects[0];
        let off = math::hypot(obj.x - 5.0, obj.y - 5.0);
        assert!((off - 2.0).abs() < 1e-9, "offset {off}");
    }

    #[test]
    fn stale_building_is_missing_from_the_roof_raster_only() {
        let mut spec = flat_scene();
        spec.buildings.push(crate::synth::spec::BuildingSpec {
            footprint: (2.0, 2.0, 6.0, 6.0),
            height_m: 5.0,
            protrusion: None,
        });
        let fresh = generate(&spec).unwrap();
        assert_eq!(fresh.roof.query_max4(4.0, 4.0), Some(6.0));
        spec.perturb.stale_buildings.push(0);
        let stale = generate(&spec).unwrap();
        assert_eq!(stale.roof.query_max4(4.0, 4.0), None);
        assert_eq!(stale.ground, fresh.ground);
        assert_eq!(stale.topo.footprints.len(), 1);
    }

    #[test]
    fn truth_labels_match_scene_geometry() {
        let mut spec = flat_scene();
        spec.reflections = Some(ReflectionSpec {
            count: 100,
            min_depth_m: 0.5,
            max_depth_m: 2.0,
        });
        let scene = generate(&spec).unwrap();
        for i in 0..scene.truth.len() {
            match scene.truth.label[i] {
                LabelCode::Ground => assert!((scene.truth.z[i] - 1.0).abs() < 1e-9),
                LabelCode::Noise => assert!(scene.truth.z[i] < 1.0 - 0.5 + 1e-9),
                other => panic!("unexpected label {other:?}"),
            }
        }
    }
}
