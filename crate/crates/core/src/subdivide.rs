//! Edge-length driven local subdivision.
//!
//! A triangle is refined while any of its edges is *unqualified*, i.e. strictly longer
//! than the active limit. Four methods are provided:
//!
//! * **classic**: every triangle with an unqualified edge is quartered through its three
//!   edge midpoints, even when some of its edges are already short enough. Neighbours
//!   that do not need refinement are left alone, which leaves hanging vertices.
//! * **novel**: the stencil depends on how many edges are unqualified. One is bisected
//!   from its midpoint to the opposite corner, two are split into three by joining the
//!   midpoint of the longest edge to the opposite corner and to the midpoint of the
//!   second edge, and three are quartered. Qualified edges are never cut, so whether an
//!   edge is split depends on its length alone and shared edges stay conforming.
//! * **multistage**: the novel method applied repeatedly with a shrinking limit
//!   `L_k = L_0 / f^k`, clamped to the final limit.
//! * **angle-restricted**: like novel, except that a triangle with three unqualified
//!   edges whose two smallest angles are both below `theta_0` is split by joining the
//!   midpoints of the two sides enclosing the largest angle to the midpoint of the
//!   longest edge (plus the corner-to-midpoint diagonal). Only the two corner children
//!   keep the parent's shape.
//!
//! Refinement runs on an explicit last-in-first-out stack, so depth is bounded by memory
//! rather than by the call stack.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{EdgeKey, MidpointCache, Triangle, TriangleMesh, VertexId};
use crate::metrics::{quality_q, triangle_angles, DEGENERATE_Q, DEGENERATE_SIDE_FRACTION};

/// Default multistage initial limit as a multiple of the final limit.
pub const DEFAULT_INITIAL_LIMIT_FACTOR: f64 = 4.0;

/// Refinement method without its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Classic,
    Novel,
    Multistage,
    #[serde(alias = "angle-restricted")]
    AngleRestricted,
}

impl MethodKind {
    pub const ALL: [MethodKind; 4] = [
        MethodKind::Classic,
        MethodKind::Novel,
        MethodKind::Multistage,
        MethodKind::AngleRestricted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Classic => "classic",
            MethodKind::Novel => "novel",
            MethodKind::Multistage => "multistage",
            MethodKind::AngleRestricted => "angle-restricted",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(MethodKind::Classic),
            "novel" => Ok(MethodKind::Novel),
            "multistage" => Ok(MethodKind::Multistage),
            "angle-restricted" | "angle_restricted" => Ok(MethodKind::AngleRestricted),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

/// Refinement method with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Classic,
    Novel,
    Multistage {
        /// Limit of the first stage, `L_0`.
        initial_limit: f64,
        /// Divisor applied to the limit between stages, `f > 1`.
        fold_factor: f64,
    },
    AngleRestricted {
        /// Angle threshold in degrees, `0 < theta_0 < 60`.
        theta0: f64,
    },
}

impl Method {
    pub fn kind(&self) -> MethodKind {
        match self {
            Method::Classic => MethodKind::Classic,
            Method::Novel => MethodKind::Novel,
            Method::Multistage { .. } => MethodKind::Multistage,
            Method::AngleRestricted { .. } => MethodKind::AngleRestricted,
        }
    }

    /// Short label used in reports, e.g. `multistage(1.8)` or `restricted(30)`.
    pub fn label(&self) -> String {
        match self {
            Method::Classic => "classic".into(),
            Method::Novel => "novel".into(),
            Method::Multistage { fold_factor, .. } => format!("multistage({fold_factor})"),
            Method::AngleRestricted { theta0 } => format!("restricted({theta0})"),
        }
    }

    /// The method's tuning parameter (fold factor or angle threshold), if any.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            Method::Multistage { fold_factor, .. } => Some(fold_factor),
            Method::AngleRestricted { theta0 } => Some(theta0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubdivisionConfig {
    pub method: Method,
    /// Final edge-length limit; every output edge is at most this long.
    pub limit: f64,
}

impl SubdivisionConfig {
    pub fn classic(limit: f64) -> Self {
        Self {
            method: Method::Classic,
            limit,
        }
    }

    pub fn novel(limit: f64) -> Self {
        Self {
            method: Method::Novel,
            limit,
        }
    }

    pub fn multistage(limit: f64, initial_limit: f64, fold_factor: f64) -> Self {
        Self {
            method: Method::Multistage {
                initial_limit,
                fold_factor,
            },
            limit,
        }
    }

    pub fn angle_restricted(limit: f64, theta0: f64) -> Self {
        Self {
            method: Method::AngleRestricted { theta0 },
            limit,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let limit = self.limit;
        if !(limit > 0.0) || !limit.is_finite() {
            return Err(Error::Config(format!(
                "edge-length limit must be > 0, got {limit}"
            )));
        }
        match self.method {
            Method::Multistage {
                initial_limit,
                fold_factor,
            } => {
                if !(initial_limit >= limit) || !initial_limit.is_finite() {
                    return Err(Error::Config(format!(
                        "initial limit {initial_limit} must be finite and >= final limit {limit}"
                    )));
                }
                if !(fold_factor > 1.0) || !fold_factor.is_finite() {
                    return Err(Error::Config(format!(
                        "fold factor must be > 1, got {fold_factor}"
                    )));
                }
            }
            Method::AngleRestricted { theta0 } => {
                if !(theta0 > 0.0 && theta0 < 60.0) {
                    return Err(Error::Config(format!(
                        "angle threshold must lie in (0, 60) degrees, got {theta0}"
                    )));
                }
            }
            Method::Classic | Method::Novel => {}
        }
        Ok(())
    }
}

/// One edge of a classified triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeInfo {
    pub key: EdgeKey,
    pub length: f64,
    /// Corner (0..3, in the triangle's winding) opposite this edge.
    pub opposite: usize,
}

/// Edge lengths of a triangle sorted by `(length desc, key asc)`, plus derived flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleClass {
    pub edges: [EdgeInfo; 3],
    /// Number of edges strictly longer than the limit. They are `edges[..count]`.
    pub unqualified_count: usize,
    /// Both of the two smallest interior angles are below the angle threshold.
    pub two_acute_below_theta0: bool,
    /// Zero-area or vanishing-edge triangle; such triangles are never subdivided.
    pub degenerate: bool,
}

impl TriangleClass {
    pub fn unqualified(&self) -> &[EdgeInfo] {
        &self.edges[..self.unqualified_count]
    }

    pub fn longest(&self) -> EdgeInfo {
        self.edges[0]
    }
}

/// Classification parameters, with the degeneracy threshold resolved once per mesh.
#[derive(Debug, Clone, Copy)]
pub struct Classifier {
    limit: f64,
    theta0: Option<f64>,
    min_side: f64,
}

impl Classifier {
    pub fn new(mesh: &TriangleMesh, limit: f64, theta0: Option<f64>) -> Self {
        Self {
            limit,
            theta0,
            min_side: DEGENERATE_SIDE_FRACTION * mesh.bbox_diagonal(),
        }
    }

    pub fn classify(&self, mesh: &TriangleMesh, tri: Triangle) -> TriangleClass {
        let keys = tri.edges();
        let mut edges = [0, 1, 2].map(|i| EdgeInfo {
            key: keys[i],
            length: mesh.edge_len(keys[i]),
            opposite: (i + 2) % 3,
        });
        edges.sort_unstable_by(|x, y| {
            y.length
                .total_cmp(&x.length)
                .then_with(|| x.key.cmp(&y.key))
        });

        let [l0, l1, l2] = edges.map(|e| e.length);
        let degenerate =
            l2 < self.min_side || quality_q(l0, l1, l2).map_or(true, |q| q < DEGENERATE_Q);
        let unqualified_count = edges.iter().filter(|e| e.length > self.limit).count();

        let two_acute_below_theta0 = match self.theta0 {
            Some(theta0) if !degenerate => {
                let [p0, p1, p2] = tri.0.map(|v| mesh.pos(v));
                triangle_angles(p0, p1, p2).is_ok_and(|mut angles| {
                    angles.sort_unstable_by(f64::total_cmp);
                    angles[1] < theta0
                })
            }
            _ => false,
        };

        TriangleClass {
            edges,
            unqualified_count,
            two_acute_below_theta0,
            degenerate,
        }
    }
}

/// Classifies a single triangle against `limit` and, when given, the angle threshold.
pub fn classify(
    mesh: &TriangleMesh,
    tri: Triangle,
    limit: f64,
    theta0: Option<f64>,
) -> Result<TriangleClass> {
    mesh.corners(tri)?;
    if !(limit > 0.0) {
        return Err(Error::Domain(format!(
            "edge-length limit must be > 0, got {limit}"
        )));
    }
    Ok(Classifier::new(mesh, limit, theta0).classify(mesh, tri))
}

fn check_triangle(mesh: &TriangleMesh, tri: Triangle) -> Result<()> {
    mesh.corners(tri).map(|_| ())
}

/// `tri` rotated so that the corner opposite `edge` comes first: `(O, P, Q)` with the
/// edge running from `P` to `Q` in winding order.
fn opposite_first(tri: Triangle, edge: &EdgeInfo) -> [VertexId; 3] {
    tri.rotated(edge.opposite).0
}

/// Quarters `tri` through its three edge midpoints: three corner children and the medial
/// triangle, all with the parent's winding.
pub fn split_quarter(
    mesh: &mut TriangleMesh,
    cache: &mut MidpointCache,
    tri: Triangle,
) -> Result<[Triangle; 4]> {
    check_triangle(mesh, tri)?;
    Ok(quarter(mesh, cache, tri))
}

fn quarter(mesh: &mut TriangleMesh, cache: &mut MidpointCache, tri: Triangle) -> [Triangle; 4] {
    let [v0, v1, v2] = tri.0;
    let m01 = cache.midpoint(mesh, EdgeKey::new(v0, v1));
    let m12 = cache.midpoint(mesh, EdgeKey::new(v1, v2));
    let m20 = cache.midpoint(mesh, EdgeKey::new(v2, v0));
    [
        Triangle::new(v0, m01, m20),
        Triangle::new(m01, v1, m12),
        Triangle::new(m20, m12, v2),
        Triangle::new(m01, m12, m20),
    ]
}

/// Splits a triangle with exactly two unqualified edges into three.
///
/// The midpoint of the longest edge is joined to the opposite corner and to the midpoint
/// of the second unqualified edge. The qualified edge is left whole.
pub fn split_three(
    mesh: &mut TriangleMesh,
    cache: &mut MidpointCache,
    tri: Triangle,
    class: &TriangleClass,
) -> Result<[Triangle; 3]> {
    check_triangle(mesh, tri)?;
    if class.unqualified_count != 2 {
        return Err(Error::Logic(format!(
            "three-way split needs 2 unqualified edges, triangle has {}",
            class.unqualified_count
        )));
    }
    Ok(three(mesh, cache, tri, class))
}

fn three(
    mesh: &mut TriangleMesh,
    cache: &mut MidpointCache,
    tri: Triangle,
    class: &TriangleClass,
) -> [Triangle; 3] {
    let longest = class.edges[0];
    let second = class.edges[1];
    let [o, p, q] = opposite_first(tri, &longest);
    let m1 = cache.midpoint(mesh, longest.key);
    let m2 = cache.midpoint(mesh, second.key);
    if second.key == EdgeKey::new(o, p) {
        [
            Triangle::new(o, m2, m1),
            Triangle::new(m2, p, m1),
            Triangle::new(o, m1, q),
        ]
    } else {
        [
            Triangle::new(o, p, m1),
            Triangle::new(m1, q, m2),
            Triangle::new(o, m1, m2),
        ]
    }
}

/// Bisects a triangle with exactly one unqualified edge from that edge's midpoint to the
/// opposite corner.
pub fn split_bisect(
    mesh: &mut TriangleMesh,
    cache: &mut MidpointCache,
    tri: Triangle,
    class: &TriangleClass,
) -> Result<[Triangle; 2]> {
    check_triangle(mesh, tri)?;
    if class.unqualified_count != 1 {
        return Err(Error::Logic(format!(
            "bisection needs 1 unqualified edge, triangle has {}",
            class.unqualified_count
        )));
    }
    Ok(bisect(mesh, cache, tri, class))
}

fn bisect(
    mesh: &mut TriangleMesh,
    cache: &mut MidpointCache,
    tri: Triangle,
    class: &TriangleClass,
) -> [Triangle; 2] {
    let longest = class.edges[0];
    let [o, p, q] = opposite_first(tri, &longest);
    let m = cache.midpoint(mesh, longest.key);
    [Triangle::new(o, p, m), Triangle::new(o, m, q)]
}

/// Angle-restricted quartering of a sliver with three unqualified edges.
///
/// With `C` the corner opposite the longest edge `AB` (and so the largest angle), the
/// midpoints `M1` of `CA` and `M2` of `CB` are joined to the midpoint `M3` of `AB`, and
/// `C` is joined to `M3`. Children are `(A, M3, M1)`, `(M1, M3, C)`, `(C, M3, M2)` and
/// `(M2, M3, B)` up to the parent's winding. Only the two corner children at `A` and `B`
/// are similar to the parent.
pub fn split_angle_restricted(
    mesh: &mut TriangleMesh,
    cache: &mut MidpointCache,
    tri: Triangle,
    class: &TriangleClass,
) -> Result<[Triangle; 4]> {
    check_triangle(mesh, tri)?;
    if class.unqualified_count != 3 || !class.two_acute_below_theta0 {
        return Err(Error::Logic(format!(
            "angle-restricted split needs 3 unqualified edges and two angles below the \
             threshold, triangle has {} unqualified (acute flag {})",
            class.unqualified_count, class.two_acute_below_theta0
        )));
    }
    Ok(angle_restricted(mesh, cache, tri, class))
}

fn angle_restricted(
    mesh: &mut TriangleMesh,
    cache: &mut MidpointCache,
    tri: Triangle,
    class: &TriangleClass,
) -> [Triangle; 4] {
    let [c, a, b] = opposite_first(tri, &class.edges[0]);
    let m1 = cache.midpoint(mesh, EdgeKey::new(c, a));
    let m3 = cache.midpoint(mesh, EdgeKey::new(a, b));
    let m2 = cache.midpoint(mesh, EdgeKey::new(b, c));
    [
        Triangle::new(a, m3, m1),
        Triangle::new(m1, m3, c),
        Triangle::new(c, m3, m2),
        Triangle::new(m2, m3, b),
    ]
}

/// Counters for one pass of the stack-driven refinement loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageSummary {
    pub limit: f64,
    /// Triangles the stage received.
    pub input_triangles: usize,
    /// Children materialised by stencils during the stage, intermediates included.
    pub children_created: u64,
    pub final_triangles: usize,
    pub new_vertices: usize,
    pub stack_high_water: usize,
    pub degenerate_passed: usize,
    pub elapsed: Duration,
}

/// Result of a refinement run.
#[derive(Debug, Clone)]
pub struct SubdivisionOutcome {
    pub mesh: TriangleMesh,
    /// Every triangle that ever existed during the run: the input triangles plus all
    /// children, intermediate ones included.
    pub triangles_created_total: u64,
    pub final_triangle_count: usize,
    pub new_vertex_count: usize,
    pub stack_high_water: usize,
    /// Degenerate triangles passed through without refinement.
    pub degenerate_passed: usize,
    pub elapsed: Duration,
    /// One entry per stage; a single entry unless the method is multistage.
    pub stages: Vec<StageSummary>,
}

#[derive(Debug, Clone, Copy)]
enum Stencils {
    Classic,
    Novel,
    AngleRestricted(f64),
}

fn run_stage(
    mesh: &mut TriangleMesh,
    stencils: Stencils,
    limit: f64,
    min_side: f64,
) -> StageSummary {
    let start = Instant::now();
    let theta0 = match stencils {
        Stencils::AngleRestricted(theta0) => Some(theta0),
        _ => None,
    };
    let classifier = Classifier {
        limit,
        theta0,
        min_side,
    };
    let vertices_before = mesh.vertex_count();
    let input = mesh.take_triangles();
    let input_triangles = input.len();

    let mut cache = MidpointCache::new();
    let mut stack: Vec<Triangle> = input.into_iter().rev().collect();
    let mut output = Vec::with_capacity(stack.len());
    let mut high_water = stack.len();
    let mut children_created = 0u64;
    let mut degenerate_passed = 0;

    while let Some(tri) = stack.pop() {
        let class = classifier.classify(mesh, tri);
        if class.degenerate {
            degenerate_passed += 1;
            output.push(tri);
            continue;
        }
        let before = stack.len();
        match (stencils, class.unqualified_count) {
            (_, 0) => {
                output.push(tri);
                continue;
            }
            (Stencils::Classic, _) | (Stencils::Novel, 3) => {
                stack.extend(quarter(mesh, &mut cache, tri).into_iter().rev());
            }
            (Stencils::AngleRestricted(_), 3) if class.two_acute_below_theta0 => {
                stack.extend(
                    angle_restricted(mesh, &mut cache, tri, &class)
                        .into_iter()
                        .rev(),
                );
            }
            (_, 3) => stack.extend(quarter(mesh, &mut cache, tri).into_iter().rev()),
            (_, 2) => stack.extend(three(mesh, &mut cache, tri, &class).into_iter().rev()),
            (_, _) => stack.extend(bisect(mesh, &mut cache, tri, &class).into_iter().rev()),
        }
        children_created += (stack.len() - before) as u64;
        high_water = high_water.max(stack.len());
    }

    let final_triangles = output.len();
    mesh.set_triangles(output);
    StageSummary {
        limit,
        input_triangles,
        children_created,
        final_triangles,
        new_vertices: mesh.vertex_count() - vertices_before,
        stack_high_water: high_water,
        degenerate_passed,
        elapsed: start.elapsed(),
    }
}

fn outcome(
    mesh: TriangleMesh,
    input_triangles: usize,
    input_vertices: usize,
    stages: Vec<StageSummary>,
) -> SubdivisionOutcome {
    let created: u64 = stages.iter().map(|s| s.children_created).sum();
    SubdivisionOutcome {
        triangles_created_total: input_triangles as u64 + created,
        final_triangle_count: mesh.triangle_count(),
        new_vertex_count: mesh.vertex_count() - input_vertices,
        stack_high_water: stages.iter().map(|s| s.stack_high_water).max().unwrap_or(0),
        degenerate_passed: stages.last().map_or(0, |s| s.degenerate_passed),
        elapsed: stages.iter().map(|s| s.elapsed).sum(),
        stages,
        mesh,
    }
}

/// Refines `mesh` until no edge is longer than `config.limit`.
///
/// Multistage configurations are forwarded to [`subdivide_multistage`].
pub fn subdivide(mesh: &TriangleMesh, config: &SubdivisionConfig) -> Result<SubdivisionOutcome> {
    config.validate()?;
    let stencils = match config.method {
        Method::Classic => Stencils::Classic,
        Method::Novel => Stencils::Novel,
        Method::AngleRestricted { theta0 } => Stencils::AngleRestricted(theta0),
        Method::Multistage { .. } => return subdivide_multistage(mesh, config),
    };
    let min_side = DEGENERATE_SIDE_FRACTION * mesh.bbox_diagonal();
    let mut work = mesh.clone();
    let stage = run_stage(&mut work, stencils, config.limit, min_side);
    Ok(outcome(
        work,
        mesh.triangle_count(),
        mesh.vertex_count(),
        vec![stage],
    ))
}

/// Stage limits `max(L_0 / f^k, L)` for `k = 0, 1, ...`, ending with the first stage at
/// the final limit `L`.
///
/// A stage limit within a relative `1e-12` of `L` is treated as reaching it, so rounding
/// in `f^k` cannot add a near-duplicate last stage.
pub fn multistage_limits(
    final_limit: f64,
    initial_limit: f64,
    fold_factor: f64,
) -> Result<Vec<f64>> {
    SubdivisionConfig::multistage(final_limit, initial_limit, fold_factor).validate()?;
    let mut limits = Vec::new();
    let mut k = 0i32;
    loop {
        let l = initial_limit / fold_factor.powi(k);
        if l <= final_limit * (1.0 + 1e-12) {
            limits.push(final_limit);
            return Ok(limits);
        }
        limits.push(l);
        k += 1;
    }
}

/// Runs novel subdivision once per stage of [`multistage_limits`], each stage on the
/// previous stage's output.
pub fn subdivide_multistage(
    mesh: &TriangleMesh,
    config: &SubdivisionConfig,
) -> Result<SubdivisionOutcome> {
    config.validate()?;
    let Method::Multistage {
        initial_limit,
        fold_factor,
    } = config.method
    else {
        return Err(Error::Config(format!(
            "multistage subdivision called with method {}",
            config.method.label()
        )));
    };
    let limits = multistage_limits(config.limit, initial_limit, fold_factor)?;
    let min_side = DEGENERATE_SIDE_FRACTION * mesh.bbox_diagonal();
    let mut work = mesh.clone();
    let stages = limits
        .into_iter()
        .map(|limit| run_stage(&mut work, Stencils::Novel, limit, min_side))
        .collect();
    Ok(outcome(
        work,
        mesh.triangle_count(),
        mesh.vertex_count(),
        stages,
    ))
}

/// Classic-method element counts predicted from each triangle's longest edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicPrediction {
    /// `sum_i sum_{u=0}^{k_i} 4^u`: every triangle that exists at some point, the
    /// originals included.
    pub n_total: u128,
    /// `sum_i 4^{k_i}`: triangles left at the end.
    pub n_leaves: u128,
    /// Quartering depth per input triangle, `k_i = ceil(log2(max(L_i) / L))`, 0 when the
    /// triangle already fits.
    pub levels: Vec<u32>,
}

/// Number of halvings needed to bring `longest` down to `limit`.
///
/// Equal to `ceil(log2(longest / limit))` clamped at 0; the logarithm only provides the
/// starting guess and the result is settled by exact power-of-two scaling.
pub fn halvings_needed(longest: f64, limit: f64) -> u32 {
    if longest <= limit {
        return 0;
    }
    let fits = |k: i32| longest * 0.5f64.powi(k) <= limit;
    let mut k = ((longest / limit).log2().ceil() as i32).max(1);
    while !fits(k) {
        k += 1;
    }
    while k > 1 && fits(k - 1) {
        k -= 1;
    }
    k as u32
}

/// Predicts how many triangles classic subdivision creates and keeps.
pub fn predict_classic_count(mesh: &TriangleMesh, limit: f64) -> Result<ClassicPrediction> {
    if !(limit > 0.0) || !limit.is_finite() {
        return Err(Error::Domain(format!(
            "edge-length limit must be > 0, got {limit}"
        )));
    }
    let mut n_total = 0u128;
    let mut n_leaves = 0u128;
    let mut levels = Vec::with_capacity(mesh.triangle_count());
    for tri in mesh.triangles() {
        let longest = tri
            .edges()
            .into_iter()
            .map(|e| mesh.edge_len(e))
            .fold(0.0, f64::max);
        let k = halvings_needed(longest, limit);
        let leaves = 4u128.saturating_pow(k);
        // 1 + 4 + ... + 4^k = (4^{k+1} - 1) / 3
        n_total = n_total.saturating_add((4u128.saturating_pow(k + 1) - 1) / 3);
        n_leaves = n_leaves.saturating_add(leaves);
        levels.push(k);
    }
    Ok(ClassicPrediction {
        n_total,
        n_leaves,
        levels,
    })
}
