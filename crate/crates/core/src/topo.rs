//! Topographical map layers and their spatial index.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cloud::LabelCode;
use crate::geom::Polygon2D;
use crate::math;

/// Pole-like object class as recorded in the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Tree,
    LampPost,
    TrafficSign,
}

impl PointKind {
    pub const ALL: [PointKind; 3] = [PointKind::Tree, PointKind::LampPost, PointKind::TrafficSign];

    pub fn name(self) -> &'static str {
        match self {
            PointKind::Tree => "tree",
            PointKind::LampPost => "lamp_post",
            PointKind::TrafficSign => "traffic_sign",
        }
    }

    pub fn from_name(name: &str) -> Option<PointKind> {
        PointKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    pub fn label(self) -> LabelCode {
        match self {
            PointKind::Tree => LabelCode::Tree,
            PointKind::LampPost => LabelCode::LampPost,
            PointKind::TrafficSign => LabelCode::TrafficSign,
        }
    }
}

/// Mapped location of a pole-like object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointObject {
    pub kind: PointKind,
    pub x: f64,
    pub y: f64,
}

/// Tag of a traversable-surface polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoadKind {
    Road,
    Parking,
}

impl RoadKind {
    pub fn name(self) -> &'static str {
        match self {
            RoadKind::Road => "road",
            RoadKind::Parking => "parking",
        }
    }

    pub fn from_name(name: &str) -> Option<RoadKind> {
        match name {
            "road" => Some(RoadKind::Road),
            "parking" => Some(RoadKind::Parking),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoadPoly {
    pub kind: RoadKind,
    pub poly: Polygon2D,
}

/// Identifier of one geometry within a [`TopoMap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeomId {
    Footprint(usize),
    Road(usize),
    PointObject(usize),
}

/// Vector layers plus a uniform-grid index over their bounding boxes.
///
/// The index is conservative: a query returns a superset of the geometries
/// whose bounding box intersects the query box, never missing one.
#[derive(Debug, Clone)]
pub struct TopoMap {
    pub footprints: Vec<Polygon2D>,
    pub roads: Vec<RoadPoly>,
    pub point_objects: Vec<PointObject>,
    index: UniformGrid,
}

impl TopoMap {
    pub fn new(
        footprints: Vec<Polygon2D>,
        roads: Vec<RoadPoly>,
        point_objects: Vec<PointObject>,
    ) -> TopoMap {
        let mut entries: Vec<(GeomId, Bbox)> = Vec::new();
        for (i, p) in footprints.iter().enumerate() {
            entries.push((GeomId::Footprint(i), Bbox::from_tuple(p.bbox())));
        }
        for (i, r) in roads.iter().enumerate() {
            entries.push((GeomId::Road(i), Bbox::from_tuple(r.poly.bbox())));
        }
        for (i, o) in point_objects.iter().enumerate() {
            entries.push((
                GeomId::PointObject(i),
                Bbox {
                    xmin: o.x,
                    ymin: o.y,
                    xmax: o.x,
                    ymax: o.y,
                },
            ));
        }
        let index = UniformGrid::build(entries);
        TopoMap {
            footprints,
            roads,
            point_objects,
            index,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.footprints.is_empty() && self.roads.is_empty() && self.point_objects.is_empty()
    }

    /// Candidate geometries whose bounding box intersects the query box.
    pub fn query_index(&self, xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Vec<GeomId> {
        self.index.query(Bbox {
            xmin,
            ymin,
            xmax,
            ymax,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bbox {
    xmin: f64,
    ymin: f64,
    xmax: f64,
    ymax: f64,
}

impl Bbox {
    fn from_tuple(t: (f64, f64, f64, f64)) -> Bbox {
        Bbox {
            xmin: t.0,
            ymin: t.1,
            xmax: t.2,
            ymax: t.3,
        }
    }

    fn intersects(&self, other: &Bbox) -> bool {
        self.xmin <= other.xmax
            && other.xmin <= self.xmax
            && self.ymin <= other.ymax
            && other.ymin <= self.ymax
    }
}

const GRID_TARGET_CELLS: usize = 32;
const GRID_MIN_CELL_M: f64 = 0.5;

#[derive(Debug, Clone)]
struct UniformGrid {
    entries: Vec<(GeomId, Bbox)>,
    origin: (f64, f64),
    cell: f64,
    ncols: usize,
    nrows: usize,
    /// entry indices per cell
    cells: Vec<Vec<u32>>,
}

impl UniformGrid {
    fn build(entries: Vec<(GeomId, Bbox)>) -> UniformGrid {
        if entries.is_empty() {
            return UniformGrid {
                entries,
                origin: (0.0, 0.0),
                cell: 1.0,
                ncols: 0,
                nrows: 0,
                cells: Vec::new(),
            };
        }
        let mut extent = entries[0].1;
        for (_, b) in &entries {
            extent.xmin = extent.xmin.min(b.xmin);
            extent.ymin = extent.ymin.min(b.ymin);
            extent.xmax = extent.xmax.max(b.xmax);
            extent.ymax = extent.ymax.max(b.ymax);
        }
        let span = (extent.xmax - extent.xmin).max(extent.ymax - extent.ymin);
        let cell = (span / GRID_TARGET_CELLS as f64).max(GRID_MIN_CELL_M);
        let ncols = ((extent.xmax - extent.xmin) / cell) as usize + 1;
        let nrows = ((extent.ymax - extent.ymin) / cell) as usize + 1;
        let mut grid = UniformGrid {
            entries,
            origin: (extent.xmin, extent.ymin),
            cell,
            ncols,
            nrows,
            cells: alloc::vec![Vec::new(); ncols * nrows],
        };
        for i in 0..grid.entries.len() {
            let b = grid.entries[i].1;
            let (r0, c0) = grid.cell_of(b.xmin, b.ymin);
            let (r1, c1) = grid.cell_of(b.xmax, b.ymax);
            for r in r0..=r1 {
                for c in c0..=c1 {
                    grid.cells[r * grid.ncols + c].push(i as u32);
                }
            }
        }
        grid
    }

    /// Clamped cell coordinates of a point.
    fn cell_of(&self, x: f64, y: f64) -> (usize, usize) {
        let c = math::floor((x - self.origin.0) / self.cell).max(0.0) as usize;
        let r = math::floor((y - self.origin.1) / self.cell).max(0.0) as usize;
        (r.min(self.nrows - 1), c.min(self.ncols - 1))
    }

    fn query(&self, b: Bbox) -> Vec<GeomId> {
        if self.entries.is_empty() {
            return Vec::new();
        }
        let grid_extent = Bbox {
            xmin: self.origin.0,
            ymin: self.origin.1,
            xmax: self.origin.0 + self.ncols as f64 * self.cell,
            ymax: self.origin.1 + self.nrows as f64 * self.cell,
        };
        if !b.intersects(&grid_extent) {
            return Vec::new();
        }
        let (r0, c0) = self.cell_of(b.xmin, b.ymin);
        let (r1, c1) = self.cell_of(b.xmax, b.ymax);
        let mut hits: Vec<u32> = Vec::new();
        for r in r0..=r1 {
            for c in c0..=c1 {
                hits.extend_from_slice(&self.cells[r * self.ncols + c]);
            }
        }
        hits.sort_unstable();
        hits.dedup();
        hits.into_iter()
            .map(|i| &self.entries[i as usize])
            .filter(|(_, eb)| eb.intersects(&b))
            .map(|(id, _)| *id)
            .collect()
    }
}
