//! Indexed triangle meshes, canonical edges and the shared-midpoint cache.
//!
//! Every refinement scheme in this crate inserts vertices only at edge midpoints. Two
//! triangles that share an edge must agree on the index *and* the coordinates of that
//! midpoint, otherwise the refined mesh cracks. [`MidpointCache`] keys midpoints by the
//! undirected [`EdgeKey`] and always averages the endpoints in canonical order, so the
//! inserted vertex is bit-identical whichever neighbour asks first.

use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Index into a mesh vertex buffer.
pub type VertexId = u32;

/// A position (or displacement) in model units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Self) -> f64 {
        (other - self).norm()
    }

    /// Component-wise mean of two points.
    pub fn midpoint(self, other: Self) -> Self {
        Self::new(
            (self.x + other.x) * 0.5,
            (self.y + other.y) * 0.5,
            (self.z + other.z) * 0.5,
        )
    }

    pub fn min(self, other: Self) -> Self {
        Self::new(
            self.x.min(other.x),
            self.y.min(other.y),
            self.z.min(other.z),
        )
    }

    pub fn max(self, other: Self) -> Self {
        Self::new(
            self.x.max(other.x),
            self.y.max(other.y),
            self.z.max(other.z),
        )
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

/// Three vertex indices in winding order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triangle(pub [VertexId; 3]);

impl Triangle {
    pub const fn new(v0: VertexId, v1: VertexId, v2: VertexId) -> Self {
        Self([v0, v1, v2])
    }

    /// Edges in winding order: `(v0,v1)`, `(v1,v2)`, `(v2,v0)`.
    ///
    /// Edge `i` is opposite corner `(i + 2) % 3`.
    pub fn edges(&self) -> [EdgeKey; 3] {
        let [a, b, c] = self.0;
        [EdgeKey::new(a, b), EdgeKey::new(b, c), EdgeKey::new(c, a)]
    }

    /// Same triangle with its corners rotated so that `self.0[start]` comes first.
    pub fn rotated(&self, start: usize) -> Self {
        Self::new(
            self.0[start % 3],
            self.0[(start + 1) % 3],
            self.0[(start + 2) % 3],
        )
    }

    fn has_repeated_index(&self) -> bool {
        let [a, b, c] = self.0;
        a == b || b == c || a == c
    }
}

/// Undirected edge with its endpoints in ascending index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    a: VertexId,
    b: VertexId,
}

impl EdgeKey {
    pub fn new(i: VertexId, j: VertexId) -> Self {
        if i <= j {
            Self { a: i, b: j }
        } else {
            Self { a: j, b: i }
        }
    }

    pub fn a(&self) -> VertexId {
        self.a
    }

    pub fn b(&self) -> VertexId {
        self.b
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }
}

/// An indexed triangle mesh.
///
/// Construction through [`TriangleMesh::new`] guarantees finite coordinates, in-range
/// indices and three distinct indices per triangle.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Point3>,
    triangles: Vec<Triangle>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Point3>, triangles: Vec<Triangle>) -> Result<Self> {
        if let Some((i, p)) = vertices.iter().enumerate().find(|(_, p)| !p.is_finite()) {
            return Err(Error::Input(format!(
                "vertex {i} has non-finite coordinates {p:?}"
            )));
        }
        let n = vertices.len();
        if n > VertexId::MAX as usize {
            return Err(Error::Structural(format!(
                "{n} vertices exceed the index range"
            )));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&v) = tri.0.iter().find(|&&v| v as usize >= n) {
                return Err(Error::Structural(format!(
                    "triangle {t} references vertex {v}, but the mesh has {n} vertices"
                )));
            }
            if tri.has_repeated_index() {
                return Err(Error::Structural(format!(
                    "triangle {t} repeats a vertex index: {:?}",
                    tri.0
                )));
            }
        }
        Ok(Self {
            vertices,
            triangles,
        })
    }

    /// Builds an unwelded mesh with three fresh vertices per input triangle.
    pub fn from_soup(soup: &[[Point3; 3]]) -> Result<Self> {
        let mut vertices = Vec::with_capacity(soup.len() * 3);
        let mut triangles = Vec::with_capacity(soup.len());
        for corners in soup {
            let base = vertices.len() as VertexId;
            vertices.extend_from_slice(corners);
            triangles.push(Triangle::new(base, base + 1, base + 2));
        }
        Self::new(vertices, triangles)
    }

    pub(crate) fn from_parts_unchecked(vertices: Vec<Point3>, triangles: Vec<Triangle>) -> Self {
        Self {
            vertices,
            triangles,
        }
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn into_parts(self) -> (Vec<Point3>, Vec<Triangle>) {
        (self.vertices, self.triangles)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn vertex(&self, v: VertexId) -> Result<Point3> {
        self.vertices.get(v as usize).copied().ok_or_else(|| {
            Error::Structural(format!(
                "vertex {v} out of range ({} vertices)",
                self.vertices.len()
            ))
        })
    }

    /// Position of a vertex known to be in range.
    #[inline]
    pub(crate) fn pos(&self, v: VertexId) -> Point3 {
        self.vertices[v as usize]
    }

    pub fn corners(&self, tri: Triangle) -> Result<[Point3; 3]> {
        Ok([
            self.vertex(tri.0[0])?,
            self.vertex(tri.0[1])?,
            self.vertex(tri.0[2])?,
        ])
    }

    pub(crate) fn push_vertex(&mut self, p: Point3) -> VertexId {
        let id = self.vertices.len() as VertexId;
        self.vertices.push(p);
        id
    }

    pub(crate) fn take_triangles(&mut self) -> Vec<Triangle> {
        std::mem::take(&mut self.triangles)
    }

    pub(crate) fn set_triangles(&mut self, triangles: Vec<Triangle>) {
        self.triangles = triangles;
    }

    /// Axis-aligned bounds over all vertices, `None` for an empty vertex buffer.
    pub fn bounding_box(&self) -> Option<(Point3, Point3)> {
        let first = *self.vertices.first()?;
        Some(
            self.vertices
                .iter()
                .fold((first, first), |(lo, hi), &p| (lo.min(p), hi.max(p))),
        )
    }

    pub fn bbox_diagonal(&self) -> f64 {
        self.bounding_box()
            .map(|(lo, hi)| lo.distance(hi))
            .unwrap_or(0.0)
    }

    /// Unnormalised normal `(p1 - p0) x (p2 - p0)`; its length is twice the area.
    pub fn area_vector(&self, tri: Triangle) -> Point3 {
        let [p0, p1, p2] = tri.0.map(|v| self.pos(v));
        (p1 - p0).cross(p2 - p0)
    }

    /// Number of distinct vertices referenced by at least one triangle.
    pub fn referenced_vertex_count(&self) -> usize {
        let mut seen = vec![false; self.vertices.len()];
        for tri in &self.triangles {
            for &v in &tri.0 {
                seen[v as usize] = true;
            }
        }
        seen.into_iter().filter(|&s| s).count()
    }

    /// Longest edge over all triangles.
    pub fn max_edge_length(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| t.edges())
            .map(|e| self.edge_len(e))
            .fold(0.0, f64::max)
    }

    #[inline]
    pub(crate) fn edge_len(&self, e: EdgeKey) -> f64 {
        self.pos(e.a).distance(self.pos(e.b))
    }
}

/// Euclidean length of an edge, measured from the lower to the higher index.
pub fn edge_length(mesh: &TriangleMesh, e: EdgeKey) -> Result<f64> {
    Ok(mesh.vertex(e.a)?.distance(mesh.vertex(e.b)?))
}

/// Maps each split edge to the vertex inserted at its midpoint.
#[derive(Debug, Clone, Default)]
pub struct MidpointCache {
    entries: HashMap<EdgeKey, VertexId>,
}

impl MidpointCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, e: EdgeKey) -> Option<VertexId> {
        self.entries.get(&e).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Returns the midpoint vertex of `e`, appending it to `mesh` on first request.
    pub fn get_or_create(&mut self, mesh: &mut TriangleMesh, e: EdgeKey) -> Result<VertexId> {
        if let Some(v) = self.get(e) {
            return Ok(v);
        }
        let m = mesh.vertex(e.a)?.midpoint(mesh.vertex(e.b)?);
        let v = mesh.push_vertex(m);
        self.entries.insert(e, v);
        Ok(v)
    }

    /// Unchecked variant used inside the subdivision loop, where every key comes from a
    /// validated triangle.
    #[inline]
    pub(crate) fn midpoint(&mut self, mesh: &mut TriangleMesh, e: EdgeKey) -> VertexId {
        *self.entries.entry(e).or_insert_with(|| {
            let m = mesh.pos(e.a).midpoint(mesh.pos(e.b));
            mesh.push_vertex(m)
        })
    }
}

/// Free-function form of [`MidpointCache::get_or_create`].
pub fn get_or_create_midpoint(
    mesh: &mut TriangleMesh,
    cache: &mut MidpointCache,
    e: EdgeKey,
) -> Result<VertexId> {
    cache.get_or_create(mesh, e)
}

/// Result of [`weld_vertices`].
#[derive(Debug, Clone)]
pub struct WeldOutcome {
    pub mesh: TriangleMesh,
    /// Input vertices folded into an earlier representative.
    pub merged_vertices: usize,
    /// Triangles that lost a corner to welding and were removed.
    pub dropped_triangles: usize,
}

/// Tolerance used when none is given: `1e-9` of the bounding-box diagonal.
pub fn default_weld_tolerance(mesh: &TriangleMesh) -> f64 {
    1e-9 * mesh.bbox_diagonal()
}

/// Merges vertices closer than `tolerance` into the first one seen, remaps triangles and
/// drops the ones that collapse.
///
/// A zero tolerance merges bit-identical positions only (`-0.0` and `0.0` are treated as
/// equal). Positive tolerances use a uniform hash grid with cell size `tolerance`.
pub fn weld_vertices(mesh: &TriangleMesh, tolerance: f64) -> Result<WeldOutcome> {
    if !(tolerance >= 0.0) || !tolerance.is_finite() {
        return Err(Error::Config(format!(
            "weld tolerance must be finite and >= 0, got {tolerance}"
        )));
    }
    let mut remap = Vec::with_capacity(mesh.vertices.len());
    let mut kept: Vec<Point3> = Vec::new();

    if tolerance == 0.0 {
        let mut exact: HashMap<[u64; 3], VertexId> = HashMap::new();
        for &p in &mesh.vertices {
            let key = [p.x, p.y, p.z].map(|c| (c + 0.0).to_bits());
            let id = *exact.entry(key).or_insert_with(|| {
                kept.push(p);
                (kept.len() - 1) as VertexId
            });
            remap.push(id);
        }
    } else {
        let cell = |c: f64| (c / tolerance).floor() as i64;
        let mut grid: HashMap<[i64; 3], Vec<VertexId>> = HashMap::new();
        for &p in &mesh.vertices {
            let home = [cell(p.x), cell(p.y), cell(p.z)];
            // Lowest-index representative within reach, so the first-seen vertex wins.
            let mut found: Option<VertexId> = None;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        let key = [home[0] + dx, home[1] + dy, home[2] + dz];
                        let Some(bucket) = grid.get(&key) else {
                            continue;
                        };
                        for &cand in bucket {
                            if kept[cand as usize].distance(p) <= tolerance {
                                found = Some(found.map_or(cand, |f| f.min(cand)));
                            }
                        }
                    }
                }
            }
            let id = match found {
                Some(id) => id,
                None => {
                    kept.push(p);
                    let id = (kept.len() - 1) as VertexId;
                    grid.entry(home).or_default().push(id);
                    id
                }
            };
            remap.push(id);
        }
    }

    let mut triangles = Vec::with_capacity(mesh.triangles.len());
    let mut dropped = 0;
    for tri in &mesh.triangles {
        let t = Triangle(tri.0.map(|v| remap[v as usize]));
        if t.has_repeated_index() {
            dropped += 1;
        } else {
            triangles.push(t);
        }
    }
    let merged = mesh.vertices.len() - kept.len();
    Ok(WeldOutcome {
        mesh: TriangleMesh::from_parts_unchecked(kept, triangles),
        merged_vertices: merged,
        dropped_triangles: dropped,
    })
}

/// Number of triangles incident to each undirected edge.
pub fn undirected_edge_uses(mesh: &TriangleMesh) -> HashMap<EdgeKey, usize> {
    let mut uses = HashMap::with_capacity(mesh.triangles.len() * 3 / 2);
    for tri in &mesh.triangles {
        for e in tri.edges() {
            *uses.entry(e).or_insert(0) += 1;
        }
    }
    uses
}
