//! Shape metrics and the histogram report used to compare refinement methods.
//!
//! * `q = (a+b-c)(a+c-b)(b+c-a) / abc`: twice the inradius over the circumradius,
//!   1 for an equilateral triangle and 0 for a degenerate one.
//! * per-vertex `b = shortest incident edge / limit`: close to 1 means the refinement
//!   did not leave needlessly short edges around the vertex.
//! * interior angles, binned as `<15°`, `<30°`, `>90°`, `>120°` and the `40°..=80°`
//!   band. Angle fractions are taken over all `3·T` angles of non-degenerate triangles.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{Point3, Triangle, TriangleMesh};

/// A triangle is degenerate when its quality drops below this value.
pub const DEGENERATE_Q: f64 = 1e-12;
/// ...or when one of its sides is shorter than this fraction of the bbox diagonal.
pub const DEGENERATE_SIDE_FRACTION: f64 = 1e-12;
/// Number of bins in the default `b` histogram over `[0, 1]`.
pub const DEFAULT_B_BINS: usize = 20;

/// Side lengths and interior angles (degrees) of one triangle.
///
/// `alpha` is the angle at the first corner and is opposite side `a`, which joins the
/// second and third corners; likewise for `beta`/`b` and `gamma`/`c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGeometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl TriangleGeometry {
    pub fn from_points(p0: Point3, p1: Point3, p2: Point3) -> Result<Self> {
        let [alpha, beta, gamma] = triangle_angles(p0, p1, p2)?;
        Ok(Self {
            a: p1.distance(p2),
            b: p2.distance(p0),
            c: p0.distance(p1),
            alpha,
            beta,
            gamma,
        })
    }

    pub fn quality(&self) -> Result<f64> {
        quality_q(self.a, self.b, self.c)
    }
}

/// Inscribed/circumscribed radius ratio `(a+b-c)(a+c-b)(b+c-a)/abc`.
///
/// Side triples that violate the triangle inequality by more than a relative `1e-12`
/// are rejected; smaller violations are rounding noise and clamp to `q = 0`.
pub fn quality_q(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) || !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::Domain(format!(
            "side lengths must be positive and finite, got ({a}, {b}, {c})"
        )));
    }
    let slack = 1e-12 * (a + b + c);
    let factors = [a + b - c, a + c - b, b + c - a];
    if factors.iter().any(|&f| f < -slack) {
        return Err(Error::Domain(format!(
            "({a}, {b}, {c}) violates the triangle inequality"
        )));
    }
    let [x, y, z] = factors.map(|f| f.max(0.0));
    Ok((x * y * z / (a * b * c)).min(1.0))
}

fn corner_angle(apex: Point3, p: Point3, q: Point3) -> f64 {
    let u = p - apex;
    let v = q - apex;
    u.cross(v).norm().atan2(u.dot(v)).to_degrees()
}

/// Interior angles in degrees at `p0`, `p1` and `p2`.
///
/// Each angle is `atan2(|u x v|, u . v)` of the two edge vectors leaving the corner,
/// which stays accurate for slivers close to 0° and 180°.
pub fn triangle_angles(p0: Point3, p1: Point3, p2: Point3) -> Result<[f64; 3]> {
    let longest = p0.distance(p1).max(p1.distance(p2)).max(p2.distance(p0));
    let doubled_area = (p1 - p0).cross(p2 - p0).norm();
    if !(longest > 0.0) || doubled_area <= 1e-12 * longest * longest {
        return Err(Error::Domain(format!(
            "degenerate triangle {p0:?} {p1:?} {p2:?}"
        )));
    }
    Ok([
        corner_angle(p0, p1, p2),
        corner_angle(p1, p2, p0),
        corner_angle(p2, p0, p1),
    ])
}

/// `shortest incident edge / limit` for each vertex used by at least one triangle, in
/// ascending vertex order.
pub fn vertex_b_values(mesh: &TriangleMesh, limit: f64) -> Result<Vec<f64>> {
    if !(limit > 0.0) || !limit.is_finite() {
        return Err(Error::Domain(format!(
            "edge-length limit must be > 0, got {limit}"
        )));
    }
    let mut shortest = vec![f64::INFINITY; mesh.vertex_count()];
    for tri in mesh.triangles() {
        for e in tri.edges() {
            let len = mesh.edge_len(e);
            for v in [e.a(), e.b()] {
                let s = &mut shortest[v as usize];
                *s = s.min(len);
            }
        }
    }
    Ok(shortest
        .into_iter()
        .filter(|s| s.is_finite())
        .map(|s| s / limit)
        .collect())
}

/// Counts `values` into `bins` uniform bins over `[0, 1]`; values at or beyond 1 land in
/// the last bin.
pub fn b_histogram(values: &[f64], bins: usize) -> Vec<u64> {
    let mut hist = vec![0u64; bins];
    if bins == 0 {
        return hist;
    }
    for &b in values {
        let i = ((b.max(0.0) * bins as f64) as usize).min(bins - 1);
        hist[i] += 1;
    }
    hist
}

/// Geometric state of a mesh after a refinement run, in the shape of one comparison
/// table row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub method: String,
    pub limit: f64,
    pub vertices: u64,
    #[serde(rename = "meshes")]
    pub triangles: u64,
    pub degenerate: u64,
    pub angle_lt15: f64,
    pub angle_lt30: f64,
    pub angle_gt90: f64,
    pub angle_gt120: f64,
    pub angle_ideal_40_80: f64,
    pub q_lt03: f64,
    pub q_lt05: f64,
    pub q_gt08: f64,
    pub b_histogram: Vec<u64>,
    pub time_sec: Option<f64>,
    pub created_total: Option<u64>,
    pub stack_high_water: Option<u64>,
    /// Population the angle fractions are taken over.
    pub angle_basis: String,
}

impl QualityReport {
    /// Fills the run counters that only a subdivision outcome knows about.
    pub fn with_run_counters(mut self, created_total: u64, stack_high_water: u64) -> Self {
        self.created_total = Some(created_total);
        self.stack_high_water = Some(stack_high_water);
        self
    }
}

fn valid_shape(mesh: &TriangleMesh, tri: Triangle, min_side: f64) -> Option<(f64, [f64; 3])> {
    let [p0, p1, p2] = tri.0.map(|v| mesh.pos(v));
    let (a, b, c) = (p1.distance(p2), p2.distance(p0), p0.distance(p1));
    if a < min_side || b < min_side || c < min_side {
        return None;
    }
    let q = quality_q(a, b, c).ok()?;
    if q < DEGENERATE_Q {
        return None;
    }
    let angles = triangle_angles(p0, p1, p2).ok()?;
    Some((q, angles))
}

pub fn build_report(
    mesh: &TriangleMesh,
    limit: f64,
    elapsed: Option<Duration>,
    label: &str,
) -> Result<QualityReport> {
    build_report_with_bins(mesh, limit, elapsed, label, DEFAULT_B_BINS)
}

pub fn build_report_with_bins(
    mesh: &TriangleMesh,
    limit: f64,
    elapsed: Option<Duration>,
    label: &str,
    b_bins: usize,
) -> Result<QualityReport> {
    let b_values = vertex_b_values(mesh, limit)?;
    let min_side = DEGENERATE_SIDE_FRACTION * mesh.bbox_diagonal();

    let mut valid = 0u64;
    let mut degenerate = 0u64;
    let mut angle_counts = [0u64; 5];
    let mut q_counts = [0u64; 3];
    for &tri in mesh.triangles() {
        let Some((q, angles)) = valid_shape(mesh, tri, min_side) else {
            degenerate += 1;
            continue;
        };
        valid += 1;
        for a in angles {
            angle_counts[0] += (a < 15.0) as u64;
            angle_counts[1] += (a < 30.0) as u64;
            angle_counts[2] += (a > 90.0) as u64;
            angle_counts[3] += (a > 120.0) as u64;
            angle_counts[4] += (40.0..=80.0).contains(&a) as u64;
        }
        q_counts[0] += (q < 0.3) as u64;
        q_counts[1] += (q < 0.5) as u64;
        q_counts[2] += (q > 0.8) as u64;
    }

    let frac = |count: u64, total: u64| {
        if total == 0 {
            0.0
        } else {
            count as f64 / total as f64
        }
    };
    let angles = 3 * valid;
    Ok(QualityReport {
        method: label.to_string(),
        limit,
        vertices: b_values.len() as u64,
        triangles: mesh.triangle_count() as u64,
        degenerate,
        angle_lt15: frac(angle_counts[0], angles),
        angle_lt30: frac(angle_counts[1], angles),
        angle_gt90: frac(angle_counts[2], angles),
        angle_gt120: frac(angle_counts[3], angles),
        angle_ideal_40_80: frac(angle_counts[4], angles),
        q_lt03: frac(q_counts[0], valid),
        q_lt05: frac(q_counts[1], valid),
        q_gt08: frac(q_counts[2], valid),
        b_histogram: b_histogram(&b_values, b_bins),
        time_sec: elapsed.map(|d| d.as_secs_f64()),
        created_total: None,
        stack_high_water: None,
        angle_basis: "all_angles".to_string(),
    })
}
