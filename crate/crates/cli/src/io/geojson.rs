//! Topographical map GeoJSON. Coordinates are CRS meters, not lon/lat.
//!
//! Every feature carries a `kind` property: `building`, `road`, and
//! `parking` features are Polygon or MultiPolygon; `tree`, `lamp_post`, and
//! `traffic_sign` features are Point.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use cloudlabel_core::geom::Polygon2D;
use cloudlabel_core::topo::{PointKind, PointObject, RoadKind, RoadPoly};
use cloudlabel_core::TopoMap;

use super::FormatError;

pub fn read_topo_geojson(path: &Path) -> Result<TopoMap, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let root: Value = serde_json::from_str(&text)
        .map_err(|e| FormatError::structure(path, format!("invalid JSON: {e}")))?;

    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(FormatError::structure(path, "expected a FeatureCollection"));
    }
    let features = root
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| FormatError::structure(path, "missing `features` array"))?;

    let mut footprints = Vec::new();
    let mut roads = Vec::new();
    let mut point_objects = Vec::new();

    for (i, feature) in features.iter().enumerate() {
        let fail = |reason: String| FormatError::feature(path, i, reason);
        if feature.get("type").and_then(Value::as_str) != Some("Feature") {
            return Err(fail("expected type `Feature`".into()));
        }
        let kind = feature
            .pointer("/properties/kind")
            .and_then(Value::as_str)
            .ok_or_else(|| fail("missing string property `kind`".into()))?;
        let geometry = feature
            .get("geometry")
            .and_then(Value::as_object)
            .ok_or_else(|| fail("missing geometry object".into()))?;
        let geom_type = geometry
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| fail("geometry has no type".into()))?;
        let coords = geometry
            .get("coordinates")
            .ok_or_else(|| fail("geometry has no coordinates".into()))?;

        if let Some(road_kind) = RoadKind::from_name(kind) {
            for poly in parse_polygons(path, i, geom_type, coords)? {
                roads.push(RoadPoly {
                    kind: road_kind,
                    poly,
                });
            }
        } else if kind == "building" {
            footprints.extend(parse_polygons(path, i, geom_type, coords)?);
        } else if let Some(point_kind) = PointKind::from_name(kind) {
            if geom_type != "Point" {
                return Err(fail(format!(
                    "kind `{kind}` expects Point geometry, got {geom_type}"
                )));
            }
            let (x, y) = parse_position(coords)
                .ok_or_else(|| fail("invalid Point coordinates".into()))?;
            point_objects.push(PointObject {
                kind: point_kind,
                x,
                y,
            });
        } else {
            return Err(fail(format!("unknown kind `{kind}`")));
        }
    }

    Ok(TopoMap::new(footprints, roads, point_objects))
}

fn parse_position(value: &Value) -> Option<(f64, f64)> {
    let arr = value.as_array()?;
    if arr.len() < 2 || arr.len() > 3 {
        return None;
    }
    let x = arr[0].as_f64()?;
    let y = arr[1].as_f64()?;
    (x.is_finite() && y.is_finite()).then_some((x, y))
}

fn parse_ring(path: &Path, feature: usize, value: &Value) -> Result<Vec<(f64, f64)>, FormatError> {
    let fail = |reason: &str| FormatError::feature(path, feature, reason.to_string());
    let positions = value.as_array().ok_or_else(|| fail("ring is not an array"))?;
    if positions.len() < 4 {
        return Err(fail("ring has fewer than 4 positions"));
    }
    let mut ring = Vec::with_capacity(positions.len());
    for pos in positions {
        ring.push(parse_position(pos).ok_or_else(|| fail("invalid ring position"))?);
    }
    if ring.first() != ring.last() {
        return Err(fail("ring is not closed"));
    }
    ring.pop();
    Ok(ring)
}

fn parse_polygon_rings(
    path: &Path,
    feature: usize,
    value: &Value,
) -> Result<Polygon2D, FormatError> {
    let rings = value
        .as_array()
        .ok_or_else(|| FormatError::feature(path, feature, "polygon coordinates must be an array"))?;
    if rings.is_empty() {
        return Err(FormatError::feature(path, feature, "polygon has no rings"));
    }
    let exterior = parse_ring(path, feature, &rings[0])?;
    let mut holes = Vec::new();
    for ring in &rings[1..] {
        holes.push(parse_ring(path, feature, ring)?);
    }
    Polygon2D::new(exterior, holes)
        .map_err(|e| FormatError::feature(path, feature, e.to_string()))
}

fn parse_polygons(
    path: &Path,
    feature: usize,
    geom_type: &str,
    coords: &Value,
) -> Result<Vec<Polygon2D>, FormatError> {
    match geom_type {
        "Polygon" => Ok(vec![parse_polygon_rings(path, feature, coords)?]),
        "MultiPolygon" => {
            let polys = coords.as_array().ok_or_else(|| {
                FormatError::feature(path, feature, "MultiPolygon coordinates must be an array")
            })?;
            polys
                .iter()
                .map(|p| parse_polygon_rings(path, feature, p))
                .collect()
        }
        other => Err(FormatError::feature(
            path,
            feature,
            format!("kind expects Polygon or MultiPolygon geometry, got {other}"),
        )),
    }
}

fn ring_to_json(ring: &[(f64, f64)]) -> Value {
    let mut positions: Vec<Value> = ring.iter().map(|(x, y)| json!([x, y])).collect();
    if let Some(first) = positions.first().cloned() {
        positions.push(first); // GeoJSON rings are explicitly closed
    }
    Value::Array(positions)
}

fn polygon_to_json(poly: &Polygon2D) -> Value {
    let rings: Vec<Value> = poly.rings().map(ring_to_json).collect();
    Value::Array(rings)
}

pub fn write_topo_geojson(topo: &TopoMap, path: &Path) -> Result<(), FormatError> {
    let mut features = Vec::new();
    for poly in &topo.footprints {
        features.push(json!({
            "type": "Feature",
            "properties": { "kind": "building" },
            "geometry": { "type": "Polygon", "coordinates": polygon_to_json(poly) },
        }));
    }
    for road in &topo.roads {
        features.push(json!({
            "type": "Feature",
            "properties": { "kind": road.kind.name() },
            "geometry": { "type": "Polygon", "coordinates": polygon_to_json(&road.poly) },
        }));
    }
    for obj in &topo.point_objects {
        features.push(json!({
            "type": "Feature",
            "properties": { "kind": obj.kind.name() },
            "geometry": { "type": "Point", "coordinates": [obj.x, obj.y] },
        }));
    }
    let doc = json!({ "type": "FeatureCollection", "features": features });
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| FormatError::structure(path, e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| FormatError::io(path, e))
}
