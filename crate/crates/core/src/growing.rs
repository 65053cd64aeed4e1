//! Voxel connected components and cluster-based region growing.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use crate::cloud::{LabelCode, LabelMask, LabeledCloud};
use crate::math;
use crate::raster::ElevationRaster;

/// Disjoint-set forest with path compression and union by rank.
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, x: u32, y: u32) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return;
        }
        match self.rank[rx as usize].cmp(&self.rank[ry as usize]) {
            core::cmp::Ordering::Less => self.parent[rx as usize] = ry,
            core::cmp::Ordering::Greater => self.parent[ry as usize] = rx,
            core::cmp::Ordering::Equal => {
                self.parent[ry as usize] = rx;
                self.rank[rx as usize] += 1;
            }
        }
    }
}

/// Sentinel for points outside every cluster (masked out or in a cluster
/// smaller than the minimum size).
pub const UNCLUSTERED: u32 = u32::MAX;

/// Per-point cluster assignment from voxel connected components.
///
/// Two points share a cluster id iff they are connected through a chain of
/// occupied voxels adjacent under 26-connectivity. Ids are contiguous and
/// assigned in order of each cluster's first point, so the partition is
/// independent of hash-map iteration order.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterIndex {
    assignment: Vec<u32>,
    n_clusters: u32,
    voxel_size: f64,
}

impl ClusterIndex {
    pub fn cluster_of(&self, point: usize) -> Option<u32> {
        match self.assignment[point] {
            UNCLUSTERED => None,
            id => Some(id),
        }
    }

    pub fn n_clusters(&self) -> u32 {
        self.n_clusters
    }

    pub fn voxel_size(&self) -> f64 {
        self.voxel_size
    }

    pub fn assignments(&self) -> &[u32] {
        &self.assignment
    }

    /// Point indices per cluster, in point order.
    pub fn cluster_points(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.n_clusters as usize];
        for (i, &id) in self.assignment.iter().enumerate() {
            if id != UNCLUSTERED {
                out[id as usize].push(i as u32);
            }
        }
        out
    }
}

/// Clusters the masked points by voxel connected components.
///
/// The voxel grid has edge length `voxel_size`; occupied voxels touching
/// under 26-connectivity belong to the same component. Components holding
/// fewer than `min_points` points are marked unclustered.
///
/// A voxel edge of `tile_size / 2^level` reproduces an octree-level
/// clustering of the tile (e.g. 50 m tiles at level 9 give ~0.1 m voxels).
pub fn connected_components(
    cloud: &LabeledCloud,
    mask: &LabelMask,
    voxel_size: f64,
    min_points: usize,
) -> ClusterIndex {
    assert!(voxel_size > 0.0, "voxel_size must be > 0");
    assert_eq!(mask.len(), cloud.len(), "mask length must match cloud");
    let n = cloud.len();
    let mut assignment = vec![UNCLUSTERED; n];

    let selected: Vec<u32> = (0..n as u32).filter(|&i| mask.0[i as usize]).collect();
    if selected.is_empty() {
        return ClusterIndex {
            assignment,
            n_clusters: 0,
            voxel_size,
        };
    }

    // Voxel coordinates, rebased so they pack into 21 bits per axis.
    let mut coords: Vec<(i64, i64, i64)> = Vec::with_capacity(selected.len());
    let inv = 1.0 / voxel_size;
    let (mut minx, mut miny, mut minz) = (i64::MAX, i64::MAX, i64::MAX);
    for &i in &selected {
        let i = i as usize;
        let v = (
            math::floor(cloud.x[i] * inv) as i64,
            math::floor(cloud.y[i] * inv) as i64,
            math::floor(cloud.z[i] * inv) as i64,
        );
        minx = minx.min(v.0);
        miny = miny.min(v.1);
        minz = minz.min(v.2);
        coords.push(v);
    }
    let pack = |v: (i64, i64, i64)| -> u64 {
        let (dx, dy, dz) = (
            (v.0 - minx) as u64,
            (v.1 - miny) as u64,
            (v.2 - minz) as u64,
        );
        // 21 bits per axis: extents up to ~2M voxels, far beyond a tile
        debug_assert!(dx < (1u64 << 21) && dy < (1u64 << 21) && dz < (1u64 << 21));
        (dx << 42) | (dy << 21) | dz
    };

    let mut voxel_ids: HashMap<u64, u32> = HashMap::with_capacity(selected.len());
    let mut voxel_coords: Vec<(i64, i64, i64)> = Vec::new();
    let mut point_voxel: Vec<u32> = Vec::with_capacity(selected.len());
    for &v in &coords {
        let key = pack(v);
        let next = voxel_coords.len() as u32;
        let id = *voxel_ids.entry(key).or_insert_with(|| {
            voxel_coords.push(v);
            next
        });
        point_voxel.push(id);
    }

    // Half of the 26 neighbor offsets; unions are symmetric.
    const HALF_OFFSETS: [(i64, i64, i64); 13] = [
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (1, 1, 0),
        (1, -1, 0),
        (1, 0, 1),
        (1, 0, -1),
        (0, 1, 1),
        (0, 1, -1),
        (1, 1, 1),
        (1, 1, -1),
        (1, -1, 1),
        (1, -1, -1),
    ];
    let mut uf = UnionFind::new(voxel_coords.len());
    for (id, &(vx, vy, vz)) in voxel_coords.iter().enumerate() {
        for &(dx, dy, dz) in &HALF_OFFSETS {
            let nb = (vx + dx, vy + dy, vz + dz);
            if nb.0 < minx || nb.1 < miny || nb.2 < minz {
                continue;
            }
            if let Some(&other) = voxel_ids.get(&pack(nb)) {
                uf.union(id as u32, other);
            }
        }
    }

    // Relabel roots to contiguous ids in order of first point occurrence.
    let mut root_to_cluster: HashMap<u32, u32> = HashMap::new();
    let mut cluster_sizes: Vec<usize> = Vec::new();
    let mut point_cluster: Vec<u32> = Vec::with_capacity(selected.len());
    for &vid in &point_voxel {
        let root = uf.find(vid);
        let next = cluster_sizes.len() as u32;
        let cid = *root_to_cluster.entry(root).or_insert_with(|| {
            cluster_sizes.push(0);
            next
        });
        cluster_sizes[cid as usize] += 1;
        point_cluster.push(cid);
    }

    // Apply the minimum size, renumbering the survivors contiguously.
    let mut remap: Vec<u32> = vec![UNCLUSTERED; cluster_sizes.len()];
    let mut n_clusters = 0u32;
    for (cid, &size) in cluster_sizes.iter().enumerate() {
        if size >= min_points {
            remap[cid] = n_clusters;
            n_clusters += 1;
        }
    }
    for (k, &i) in selected.iter().enumerate() {
        assignment[i as usize] = remap[point_cluster[k] as usize];
    }

    ClusterIndex {
        assignment,
        n_clusters,
        voxel_size,
    }
}

/// Promotes whole clusters to `target` when their already-labelled fraction
/// strictly exceeds `threshold`. Only Unlabelled members are changed.
/// Returns the number of newly labelled points.
pub fn grow_label(
    cloud: &mut LabeledCloud,
    clusters: &ClusterIndex,
    target: LabelCode,
    threshold: f64,
) -> usize {
    assert!(threshold > 0.0 && threshold <= 1.0, "threshold must be in (0, 1]");
    let k = clusters.n_clusters() as usize;
    let mut size = vec![0u64; k];
    let mut labelled = vec![0u64; k];
    for i in 0..cloud.len() {
        if let Some(c) = clusters.cluster_of(i) {
            size[c as usize] += 1;
            if cloud.label[i] == target {
                labelled[c as usize] += 1;
            }
        }
    }
    let grow: Vec<bool> = (0..k)
        .map(|c| size[c] > 0 && (labelled[c] as f64) / (size[c] as f64) > threshold)
        .collect();
    let mut changed = 0;
    for i in 0..cloud.len() {
        if cloud.label[i] != LabelCode::Unlabelled {
            continue;
        }
        if let Some(c) = clusters.cluster_of(i) {
            if grow[c as usize] {
                cloud.label[i] = target;
                changed += 1;
            }
        }
    }
    changed
}

/// One height band of a banded growing pass.
///
/// `z_min_m..z_max_m` is relative to the local ground surface and half-open;
/// omit `z_max_m` for an unbounded band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowBand {
    pub z_min_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_max_m: Option<f64>,
    pub voxel_m: f64,
    pub threshold: f64,
}

impl GrowBand {
    pub fn z_max(&self) -> f64 {
        self.z_max_m.unwrap_or(f64::INFINITY)
    }
}

/// Runs cluster growing per height band, in order of ascending band.
///
/// Each band restricts to points that are Unlabelled or already `target`
/// and whose height above the local ground surface falls in the band, then
/// clusters at the band's voxel size and grows at the band's threshold.
/// Points over nodata ground cells are left alone. Returns the number of
/// newly labelled points.
pub fn grow_banded(
    cloud: &mut LabeledCloud,
    ground: &ElevationRaster,
    target: LabelCode,
    bands: &[GrowBand],
) -> usize {
    let mut bands: Vec<GrowBand> = bands.to_vec();
    bands.sort_by(|a, b| a.z_min_m.total_cmp(&b.z_min_m));

    // Height above local ground, fixed for the whole pass. Points that can
    // never join a band (already holding some other label) are skipped.
    let rel_z: Vec<f64> = (0..cloud.len())
        .map(|i| {
            if cloud.label[i] != LabelCode::Unlabelled && cloud.label[i] != target {
                return f64::NAN;
            }
            match ground.query_z(cloud.x[i], cloud.y[i]) {
                Some(s) => cloud.z[i] - s,
                None => f64::NAN,
            }
        })
        .collect();

    let mut changed = 0;
    for band in &bands {
        let mask = LabelMask(
            (0..cloud.len())
                .map(|i| {
                    (cloud.label[i] == LabelCode::Unlabelled || cloud.label[i] == target)
                        && rel_z[i] >= band.z_min_m
                        && rel_z[i] < band.z_max()
                })
                .collect(),
        );
        if !mask.0.iter().any(|&m| m) {
            continue;
        }
        let clusters = connected_components(cloud, &mask, band.voxel_m, 1);
        changed += grow_label(cloud, &clusters, target, band.threshold);
    }
    changed
}
