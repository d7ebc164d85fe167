//! Synthetic test meshes: regular and skewed hexagon fans, icospheres, closed
//! cylinders, seeded needle soups and stretched planar panels.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{EdgeKey, Point3, Triangle, TriangleMesh, VertexId};

/// Columns per row of a stretched panel; each band of two rows holds `2 * 12 + 1` triangles.
pub const PANEL_COLUMNS: usize = 12;

fn one() -> f64 {
    1.0
}

/// A parameterised synthetic mesh. Serialised with a `shape` tag, e.g.
/// `{"shape": "icosphere", "radius": 1.0, "level": 2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum CorpusSpec {
    /// Six-triangle fan around the origin. `stretch` scales x; 1 gives equilateral triangles.
    Hexagon {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default = "one")]
        stretch: f64,
    },
    /// Icosahedron refined `level` times with midpoints pushed onto the sphere.
    Icosphere {
        #[serde(default = "one")]
        radius: f64,
        level: u32,
    },
    /// Closed cylinder along z with fan-triangulated caps.
    Cylinder {
        radius: f64,
        height: f64,
        segments: u32,
        rings: u32,
    },
    /// Disjoint needle triangles with base/height ratio `aspect`.
    NeedleSoup {
        count: usize,
        aspect: f64,
        seed: u64,
    },
    /// Conforming planar strip triangulation with column widths drawn log-uniformly
    /// from `[1, max_aspect]` and unit row height.
    StretchedPanel {
        count: usize,
        max_aspect: f64,
        seed: u64,
    },
}

impl CorpusSpec {
    pub const SHAPES: [&'static str; 5] = [
        "hexagon",
        "icosphere",
        "cylinder",
        "needle_soup",
        "stretched_panel",
    ];

    pub fn regular_hexagon() -> Self {
        CorpusSpec::Hexagon {
            radius: 1.0,
            stretch: 1.0,
        }
    }

    /// A hexagon squashed along x so its fan triangles have unequal sides.
    pub fn skewed_hexagon() -> Self {
        CorpusSpec::Hexagon {
            radius: 1.0,
            stretch: 1.6,
        }
    }

    /// The panel used for the method comparisons: 200 triangles, aspects up to 20, seed 7.
    pub fn reference_panel() -> Self {
        CorpusSpec::StretchedPanel {
            count: 200,
            max_aspect: 20.0,
            seed: 7,
        }
    }

    /// Default parameters for a named shape. `seed` and `level` override the defaults
    /// of the shapes that use them.
    pub fn from_shape(shape: &str, seed: Option<u64>, level: Option<u32>) -> Result<Self> {
        let spec = match shape {
            "hexagon" => Self::regular_hexagon(),
            "skewed_hexagon" | "skewed-hexagon" => Self::skewed_hexagon(),
            "icosphere" => CorpusSpec::Icosphere {
                radius: 1.0,
                level: level.unwrap_or(2),
            },
            "cylinder" => CorpusSpec::Cylinder {
                radius: 1.0,
                height: 3.0,
                segments: 16,
                rings: 4,
            },
            "needle_soup" | "needle-soup" => CorpusSpec::NeedleSoup {
                count: 100,
                aspect: 10.0,
                seed: seed.unwrap_or(7),
            },
            "stretched_panel" | "stretched-panel" => CorpusSpec::StretchedPanel {
                count: 200,
                max_aspect: 20.0,
                seed: seed.unwrap_or(7),
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown shape '{other}' (expected one of {})",
                    Self::SHAPES.join(", ")
                )))
            }
        };
        Ok(spec)
    }

    /// Short human-readable name, e.g. `icosphere(level=2)`.
    pub fn name(&self) -> String {
        match self {
            CorpusSpec::Hexagon { stretch, .. } if *stretch == 1.0 => "hexagon".into(),
            CorpusSpec::Hexagon { stretch, .. } => format!("hexagon(stretch={stretch})"),
            CorpusSpec::Icosphere { level, .. } => format!("icosphere(level={level})"),
            CorpusSpec::Cylinder {
                segments, rings, ..
            } => {
                format!("cylinder({segments}x{rings})")
            }
            CorpusSpec::NeedleSoup {
                count,
                aspect,
                seed,
            } => {
                format!("needle_soup(n={count},aspect={aspect},seed={seed})")
            }
            CorpusSpec::StretchedPanel {
                count,
                max_aspect,
                seed,
            } => {
                format!("stretched_panel(n={count},aspect<={max_aspect},seed={seed})")
            }
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} must be a positive finite number, got {v}"
        )))
    }
}

pub fn generate_corpus(spec: &CorpusSpec) -> Result<TriangleMesh> {
    match *spec {
        CorpusSpec::Hexagon { radius, stretch } => {
            positive("radius", radius)?;
            positive("stretch", stretch)?;
            hexagon(radius, stretch)
        }
        CorpusSpec::Icosphere { radius, level } => {
            positive("radius", radius)?;
            if level > 7 {
                return Err(Error::Config(format!("icosphere level {level} exceeds 7")));
            }
            icosphere(radius, level)
        }
        CorpusSpec::Cylinder {
            radius,
            height,
            segments,
            rings,
        } => {
            positive("radius", radius)?;
            positive("height", height)?;
            if segments < 3 || rings < 1 {
                return Err(Error::Config(format!(
                    "cylinder needs segments >= 3 and rings >= 1, got {segments} and {rings}"
                )));
            }
            cylinder(radius, height, segments, rings)
        }
        CorpusSpec::NeedleSoup {
            count,
            aspect,
            seed,
        } => {
            if aspect < 1.0 || !aspect.is_finite() {
                return Err(Error::Config(format!(
                    "needle aspect must be >= 1, got {aspect}"
                )));
            }
            needle_soup(count, aspect, seed)
        }
        CorpusSpec::StretchedPanel {
            count,
            max_aspect,
            seed,
        } => {
            if max_aspect < 1.0 || !max_aspect.is_finite() {
                return Err(Error::Config(format!(
                    "max_aspect must be >= 1, got {max_aspect}"
                )));
            }
            stretched_panel(count, max_aspect, seed)
        }
    }
}

fn hexagon(radius: f64, stretch: f64) -> Result<TriangleMesh> {
    let mut verts = vec![Point3::new(0.0, 0.0, 0.0)];
    for i in 0..6 {
        let a = i as f64 * std::f64::consts::FRAC_PI_3;
        verts.push(Point3::new(
            radius * stretch * a.cos(),
            radius * a.sin(),
            0.0,
        ));
    }
    let tris = (0..6)
        .map(|i| Triangle::new(0, 1 + i, 1 + (i + 1) % 6))
        .collect();
    TriangleMesh::new(verts, tris)
}

fn icosphere(radius: f64, level: u32) -> Result<TriangleMesh> {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let on_sphere = |p: Point3| p * (radius / p.norm());
    let mut verts: Vec<Point3> = raw.iter().map(|&c| on_sphere(Point3::from(c))).collect();
    let mut tris: Vec<Triangle> = [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ]
    .iter()
    .map(|&[a, b, c]| Triangle::new(a, b, c))
    .collect();

    for _ in 0..level {
        let mut mids: HashMap<EdgeKey, VertexId> = HashMap::new();
        let mut mid = |a: VertexId, b: VertexId, verts: &mut Vec<Point3>| {
            *mids.entry(EdgeKey::new(a, b)).or_insert_with(|| {
                let p = on_sphere(verts[a as usize].midpoint(verts[b as usize]));
                verts.push(p);
                (verts.len() - 1) as VertexId
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for Triangle([a, b, c]) in tris {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.extend([
                Triangle::new(a, ab, ca),
                Triangle::new(ab, b, bc),
                Triangle::new(ca, bc, c),
                Triangle::new(ab, bc, ca),
            ]);
        }
        tris = next;
    }
    TriangleMesh::new(verts, tris)
}

fn cylinder(radius: f64, height: f64, segments: u32, rings: u32) -> Result<TriangleMesh> {
    let mut verts = Vec::new();
    for j in 0..=rings {
        let z = height * j as f64 / rings as f64;
        for i in 0..segments {
            let a = std::f64::consts::TAU * i as f64 / segments as f64;
            verts.push(Point3::new(radius * a.cos(), radius * a.sin(), z));
        }
    }
    let id = |i: u32, j: u32| j * segments + i % segments;
    let mut tris = Vec::new();
    for j in 0..rings {
        for i in 0..segments {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            tris.push(Triangle::new(a, b, c));
            tris.push(Triangle::new(a, c, d));
        }
    }
    let bottom = verts.len() as VertexId;
    verts.push(Point3::new(0.0, 0.0, 0.0));
    let top = bottom + 1;
    verts.push(Point3::new(0.0, 0.0, height));
    for i in 0..segments {
        tris.push(Triangle::new(bottom, id(i + 1, 0), id(i, 0)));
        tris.push(Triangle::new(top, id(i, rings), id(i + 1, rings)));
    }
    TriangleMesh::new(verts, tris)
}

fn needle_soup(count: usize, aspect: f64, seed: u64) -> Result<TriangleMesh> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spread = 10.0 * aspect;
    let mut verts = Vec::with_capacity(3 * count);
    let mut tris = Vec::with_capacity(count);
    for k in 0..count {
        let origin = Point3::new(
            rng.gen_range(0.0..spread),
            rng.gen_range(0.0..spread),
            rng.gen_range(0.0..spread),
        );
        let turn: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let apex_at: f64 = rng.gen_range(0.2..0.8);
        let (s, c) = turn.sin_cos();
        let local = |u: f64, v: f64| origin + Point3::new(u * c - v * s, u * s + v * c, 0.0);
        verts.extend([
            local(0.0, 0.0),
            local(aspect, 0.0),
            local(apex_at * aspect, 1.0),
        ]);
        let base = 3 * k as VertexId;
        tris.push(Triangle::new(base, base + 1, base + 2));
    }
    TriangleMesh::new(verts, tris)
}

/// Triangulates the strip between two x-sorted rows by advancing along whichever row
/// has the nearer next point. Produces `lower.len() + upper.len() - 2` triangles, all
/// counter-clockwise when `lower` lies below `upper`.
fn zip_rows(lower: &[VertexId], upper: &[VertexId], verts: &[Point3], out: &mut Vec<Triangle>) {
    let (mut i, mut j) = (0, 0);
    while i + 1 < lower.len() || j + 1 < upper.len() {
        let advance_lower = if i + 1 == lower.len() {
            false
        } else if j + 1 == upper.len() {
            true
        } else {
            verts[lower[i + 1] as usize].x <= verts[upper[j + 1] as usize].x
        };
        if advance_lower {
            out.push(Triangle::new(lower[i], lower[i + 1], upper[j]));
            i += 1;
        } else {
            out.push(Triangle::new(lower[i], upper[j + 1], upper[j]));
            j += 1;
        }
    }
}

fn stretched_panel(count: usize, max_aspect: f64, seed: u64) -> Result<TriangleMesh> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_max = max_aspect.ln();
    let per_band = 2 * PANEL_COLUMNS + 1;
    let bands = count.div_ceil(per_band);

    let mut verts: Vec<Point3> = Vec::new();
    let push_row = |xs: &[f64], y: f64, verts: &mut Vec<Point3>| -> Vec<VertexId> {
        xs.iter()
            .map(|&x| {
                verts.push(Point3::new(x, y, 0.0));
                (verts.len() - 1) as VertexId
            })
            .collect()
    };
    let random_row = |rng: &mut ChaCha8Rng| {
        let mut xs = vec![0.0];
        for _ in 0..PANEL_COLUMNS {
            let w = (rng.gen_range(0.0..=log_max)).exp();
            xs.push(xs.last().unwrap() + w);
        }
        xs
    };
    // Column midpoints plus both ends, so a band's two rows never line up.
    let staggered = |xs: &[f64]| {
        let mut out = vec![xs[0]];
        out.extend(xs.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        out.push(*xs.last().unwrap());
        out
    };

    let mut tris = Vec::new();
    let mut row_xs = random_row(&mut rng);
    let mut lower = push_row(&row_xs, 0.0, &mut verts);
    let mut y = 0.0;
    for band in 0..bands {
        y += 1.0;
        let xs = if band % 2 == 0 {
            staggered(&row_xs)
        } else {
            random_row(&mut rng)
        };
        let upper = push_row(&xs, y, &mut verts);
        zip_rows(&lower, &upper, &verts, &mut tris);
        row_xs = xs;
        lower = upper;
    }
    tris.truncate(count);
    compact(verts, tris)
}

/// Drops unreferenced vertices, renumbering in first-use order.
fn compact(verts: Vec<Point3>, tris: Vec<Triangle>) -> Result<TriangleMesh> {
    let mut remap = vec![VertexId::MAX; verts.len()];
    let mut kept = Vec::new();
    let tris = tris
        .into_iter()
        .map(|t| {
            Triangle(t.0.map(|v| {
                if remap[v as usize] == VertexId::MAX {
                    remap[v as usize] = kept.len() as VertexId;
                    kept.push(verts[v as usize]);
                }
                remap[v as usize]
            }))
        })
        .collect();
    TriangleMesh::new(kept, tris)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{undirected_edge_uses, weld_vertices};
    use crate::metrics::quality_q;

    fn assert_closed(m: &TriangleMesh) {
        assert!(undirected_edge_uses(m).values().all(|&c| c == 2));
    }

    fn assert_welded(m: &TriangleMesh) {
        let w = weld_vertices(m, 0.0).unwrap();
        assert_eq!(w.merged_vertices, 0);
        assert_eq!(&w.mesh, m);
    }

    fn outward(m: &TriangleMesh, center: Point3) -> bool {
        m.triangles().iter().all(|&t| {
            let [a, b, c] = m.corners(t).unwrap();
            let centroid = (a + b + c) * (1.0 / 3.0);
            m.area_vector(t).dot(centroid - center) > 0.0
        })
    }

    #[test]
    fn regular_hexagon() {
        let m = generate_corpus(&CorpusSpec::regular_hexagon()).unwrap();
        assert_eq!((m.vertex_count(), m.triangle_count()), (7, 6));
        for &t in m.triangles() {
            let [a, b, c] = m.corners(t).unwrap();
            let q = quality_q(a.distance(b), b.distance(c), c.distance(a)).unwrap();
            assert!((q - 1.0).abs() < 1e-12);
        }
        let skew = generate_corpus(&CorpusSpec::skewed_hexagon()).unwrap();
        assert_eq!(skew.triangle_count(), 6);
        assert!(skew.triangles().iter().any(|&t| {
            let [a, b, c] = skew.corners(t).unwrap();
            quality_q(a.distance(b), b.distance(c), c.distance(a)).unwrap() < 0.99
        }));
    }

    #[test]
    fn icosphere_levels_are_closed() {
        for level in 0..=3 {
            let m = generate_corpus(&CorpusSpec::Icosphere { radius: 2.0, level }).unwrap();
            assert_eq!(m.triangle_count(), 20 * 4usize.pow(level));
            assert_eq!(m.vertex_count(), 10 * 4usize.pow(level) + 2);
            assert_closed(&m);
            assert_welded(&m);
            assert!(outward(&m, Point3::new(0.0, 0.0, 0.0)));
            for p in m.vertices() {
                assert!((p.norm() - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cylinder_is_closed_and_outward() {
        let m = generate_corpus(&CorpusSpec::from_shape("cylinder", None, None).unwrap()).unwrap();
        assert_eq!(m.triangle_count(), 2 * 16 * 4 + 2 * 16);
        assert_closed(&m);
        assert_welded(&m);
        assert!(outward(&m, Point3::new(0.0, 0.0, 1.5)));
    }

    #[test]
    fn needle_soup_is_deterministic() {
        let spec = CorpusSpec::NeedleSoup {
            count: 100,
            aspect: 10.0,
            seed: 7,
        };
        let a = generate_corpus(&spec).unwrap();
        assert_eq!(a, generate_corpus(&spec).unwrap());
        assert_eq!(a.triangle_count(), 100);
        assert_welded(&a);
        let other = CorpusSpec::NeedleSoup {
            count: 100,
            aspect: 10.0,
            seed: 8,
        };
        assert_ne!(a, generate_corpus(&other).unwrap());
    }

    #[test]
    fn stretched_panel_is_a_conforming_strip() {
        let m = generate_corpus(&CorpusSpec::reference_panel()).unwrap();
        assert_eq!(m.triangle_count(), 200);
        assert_eq!(m, generate_corpus(&CorpusSpec::reference_panel()).unwrap());
        assert_welded(&m);
        assert_eq!(m.referenced_vertex_count(), m.vertex_count());
        // Planar, counter-clockwise, no fold-overs, no edge used more than twice.
        for &t in m.triangles() {
            assert!(m.area_vector(t).z > 0.0);
        }
        assert!(undirected_edge_uses(&m).values().all(|&c| c <= 2));

        let mut aspects: Vec<f64> = m
            .triangles()
            .iter()
            .map(|&t| {
                let [a, b, c] = m.corners(t).unwrap();
                let longest = a.distance(b).max(b.distance(c)).max(c.distance(a));
                // longest side over the height onto it
                longest * longest / m.area_vector(t).norm()
            })
            .collect();
        aspects.sort_by(f64::total_cmp);
        assert!(aspects[0] < 3.0);
        assert!(*aspects.last().unwrap() > 8.0);
    }

    #[test]
    fn invalid_specs() {
        for spec in [
            CorpusSpec::Hexagon {
                radius: 0.0,
                stretch: 1.0,
            },
            CorpusSpec::Icosphere {
                radius: 1.0,
                level: 9,
            },
            CorpusSpec::Cylinder {
                radius: 1.0,
                height: 1.0,
                segments: 2,
                rings: 1,
            },
            CorpusSpec::NeedleSoup {
                count: 3,
                aspect: 0.5,
                seed: 1,
            },
            CorpusSpec::StretchedPanel {
                count: 3,
                max_aspect: f64::NAN,
                seed: 1,
            },
        ] {
            assert!(
                matches!(generate_corpus(&spec), Err(Error::Config(_))),
                "{spec:?}"
            );
        }
        assert!(CorpusSpec::from_shape("torus", None, None).is_err());
    }

    #[test]
    fn spec_json_roundtrip() {
        let json = r#"{"shape": "icosphere", "level": 1}"#;
        let spec: CorpusSpec = serde_json::from_str(json).unwrap();
        assert_eq!(
            spec,
            CorpusSpec::Icosphere {
                radius: 1.0,
                level: 1
            }
        );
        let back: CorpusSpec =
            serde_json::from_str(&serde_json::to_string(&CorpusSpec::reference_panel()).unwrap())
                .unwrap();
        assert_eq!(back, CorpusSpec::reference_panel());
    }
}
