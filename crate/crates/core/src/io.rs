//! STL (binary and ASCII) and Wavefront OBJ reading/writing, plus report serialisation.
//!
//! Binary STL layout: an 80-byte header, a little-endian `u32` triangle count, then one
//! 50-byte record per triangle (normal `f32 x3`, three vertices `f32 x3`, `u16`
//! attribute). Readers return unwelded triangle soup for STL; stored normals are ignored.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::{Point3, Triangle, TriangleMesh, VertexId};
use crate::metrics::QualityReport;

const STL_HEADER_LEN: usize = 80;
const STL_RECORD_LEN: usize = 50;
/// Leading text of the header written by [`write_stl_binary`]; the rest is zero.
pub const STL_HEADER_MAGIC: &[u8] = b"trirefine binary STL";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    StlBinary,
    StlAscii,
    Obj,
}

impl MeshFormat {
    /// Guess from a file extension: `.obj` is OBJ, `.stl` is binary STL.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "obj" => Some(MeshFormat::Obj),
            "stl" => Some(MeshFormat::StlBinary),
            _ => None,
        }
    }
}

impl FromStr for MeshFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stl" | "stl-binary" => Ok(MeshFormat::StlBinary),
            "stl-ascii" => Ok(MeshFormat::StlAscii),
            "obj" => Ok(MeshFormat::Obj),
            other => Err(Error::Config(format!("unknown mesh format '{other}'"))),
        }
    }
}

/// Reads a mesh file. `.obj` files are parsed as OBJ, everything else as STL.
pub fn read_mesh(path: &Path) -> Result<TriangleMesh> {
    let bytes = fs::read(path)?;
    match MeshFormat::from_path(path) {
        Some(MeshFormat::Obj) => read_obj(&bytes),
        _ => read_stl(&bytes),
    }
}

/// Parses STL, choosing between the ASCII and binary layouts.
///
/// Input starting with `solid` is tried as ASCII first; if the ASCII grammar fails the
/// binary layout is attempted. When both fail the ASCII error is reported.
pub fn read_stl(bytes: &[u8]) -> Result<TriangleMesh> {
    let looks_ascii = bytes.trim_ascii_start().starts_with(b"solid");
    if !looks_ascii {
        return read_stl_binary(bytes);
    }
    let ascii = std::str::from_utf8(bytes)
        .map_err(|e| Error::Parse {
            line: 1,
            message: format!("not valid UTF-8 text: {e}"),
        })
        .and_then(read_stl_ascii);
    match ascii {
        Ok(mesh) => Ok(mesh),
        Err(ascii_err) => read_stl_binary(bytes).map_err(|_| ascii_err),
    }
}

fn f32_at(bytes: &[u8], at: usize) -> f32 {
    f32::from_le_bytes(bytes[at..at + 4].try_into().expect("4-byte slice"))
}

pub fn read_stl_binary(bytes: &[u8]) -> Result<TriangleMesh> {
    if bytes.len() < STL_HEADER_LEN + 4 {
        return Err(Error::Input(format!(
            "binary STL needs at least 84 bytes, got {}",
            bytes.len()
        )));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().expect("4-byte slice")) as usize;
    let body = bytes.len() - 84;
    if body / STL_RECORD_LEN < count {
        let record = body / STL_RECORD_LEN;
        let offset = 84 + record * STL_RECORD_LEN;
        return Err(Error::TruncatedStl {
            record,
            offset,
            available: bytes.len() - offset,
        });
    }
    let mut soup = Vec::with_capacity(count);
    for i in 0..count {
        let at = 84 + i * STL_RECORD_LEN + 12;
        let corner = |k: usize| {
            let base = at + 12 * k;
            Point3::new(
                f32_at(bytes, base) as f64,
                f32_at(bytes, base + 4) as f64,
                f32_at(bytes, base + 8) as f64,
            )
        };
        soup.push([corner(0), corner(1), corner(2)]);
    }
    TriangleMesh::from_soup(&soup)
}

fn parse_f32(token: Option<&str>, line: usize, what: &str) -> Result<f32> {
    let token = token.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    let v: f32 = token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("malformed number '{token}' in {what}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite value '{token}' in {what}"),
        });
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AsciiState {
    Solid,
    Facet,
    Loop,
    EndLoop,
    EndFacet,
    Done,
}

pub fn read_stl_ascii(text: &str) -> Result<TriangleMesh> {
    let mut state = None;
    let mut soup = Vec::new();
    let mut corners: Vec<Point3> = Vec::with_capacity(3);
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let mut tokens = raw.split_whitespace();
        let Some(keyword) = tokens.next() else {
            continue;
        };
        let unexpected = || Error::Parse {
            line,
            message: format!("unexpected '{keyword}'"),
        };
        state = Some(match (state, keyword) {
            (None, "solid") => AsciiState::Solid,
            (None, _) => return Err(unexpected()),
            (Some(AsciiState::Solid | AsciiState::EndFacet), "facet") => {
                if tokens.next() != Some("normal") {
                    return Err(Error::Parse {
                        line,
                        message: "expected 'facet normal'".into(),
                    });
                }
                for axis in ["nx", "ny", "nz"] {
                    parse_f32(tokens.next(), line, axis)?;
                }
                AsciiState::Facet
            }
            (Some(AsciiState::Facet), "outer") => {
                if tokens.next() != Some("loop") {
                    return Err(Error::Parse {
                        line,
                        message: "expected 'outer loop'".into(),
                    });
                }
                corners.clear();
                AsciiState::Loop
            }
            (Some(AsciiState::Loop), "vertex") => {
                if corners.len() == 3 {
                    return Err(Error::Parse {
                        line,
                        message: "more than three vertices in facet".into(),
                    });
                }
                let x = parse_f32(tokens.next(), line, "vertex x")?;
                let y = parse_f32(tokens.next(), line, "vertex y")?;
                let z = parse_f32(tokens.next(), line, "vertex z")?;
                corners.push(Point3::new(x as f64, y as f64, z as f64));
                AsciiState::Loop
            }
            (Some(AsciiState::Loop), "endloop") => {
                if corners.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        message: format!("facet has {} vertices, expected 3", corners.len()),
                    });
                }
                soup.push([corners[0], corners[1], corners[2]]);
                AsciiState::EndLoop
            }
            (Some(AsciiState::EndLoop), "endfacet") => AsciiState::EndFacet,
            (Some(AsciiState::Solid | AsciiState::EndFacet), "endsolid") => AsciiState::Done,
            (Some(AsciiState::Done), _) => return Err(unexpected()),
            _ => return Err(unexpected()),
        });
        if let Some(extra) = tokens.next() {
            if !matches!(keyword, "solid" | "endsolid") {
                return Err(Error::Parse {
                    line,
                    message: format!("trailing token '{extra}'"),
                });
            }
        }
    }
    if state != Some(AsciiState::Done) {
        return Err(Error::Parse {
            line: last_line.max(1),
            message: "missing 'endsolid'".into(),
        });
    }
    TriangleMesh::from_soup(&soup)
}

/// Parses `v` and `f` records of a Wavefront OBJ file. Polygons are fan-triangulated
/// from their first corner; other record types are ignored.
pub fn read_obj(bytes: &[u8]) -> Result<TriangleMesh> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 1,
        message: format!("not valid UTF-8 text: {e}"),
    })?;
    let mut vertices = Vec::new();
    let mut faces: Vec<(usize, Vec<i64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let mut c = [0.0f64; 3];
                for (k, axis) in ["x", "y", "z"].into_iter().enumerate() {
                    let t = tokens.next().ok_or_else(|| Error::Parse {
                        line,
                        message: format!("vertex missing {axis}"),
                    })?;
                    c[k] = t
                        .parse()
                        .ok()
                        .filter(|v: &f64| v.is_finite())
                        .ok_or_else(|| Error::Parse {
                            line,
                            message: format!("malformed coordinate '{t}'"),
                        })?;
                }
                vertices.push(Point3::from(c));
            }
            Some("f") => {
                let mut refs = Vec::new();
                for t in tokens {
                    let head = t.split('/').next().unwrap_or("");
                    let i: i64 = head.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("malformed face index '{t}'"),
                    })?;
                    // Negative indices count back from the latest vertex.
                    let resolved = if i < 0 {
                        vertices.len() as i64 + i + 1
                    } else {
                        i
                    };
                    refs.push(resolved);
                }
                if refs.len() < 3 {
                    return Err(Error::Parse {
                        line,
                        message: format!("face has {} corners, expected at least 3", refs.len()),
                    });
                }
                faces.push((line, refs));
            }
            _ => {}
        }
    }

    let n = vertices.len() as i64;
    let mut triangles = Vec::new();
    for (line, refs) in faces {
        let mut ids = Vec::with_capacity(refs.len());
        for r in refs {
            if r < 1 || r > n {
                return Err(Error::Parse {
                    line,
                    message: format!("face index {r} out of range (1..={n})"),
                });
            }
            ids.push((r - 1) as VertexId);
        }
        for k in 1..ids.len() - 1 {
            let t = Triangle::new(ids[0], ids[k], ids[k + 1]);
            let [a, b, c] = t.0;
            if a == b || b == c || a == c {
                return Err(Error::Parse {
                    line,
                    message: format!("face repeats vertex index: {:?}", t.0),
                });
            }
            triangles.push(t);
        }
    }
    TriangleMesh::new(vertices, triangles)
}

fn unit_normal(mesh: &TriangleMesh, tri: Triangle) -> [f32; 3] {
    let n = mesh.area_vector(tri);
    let len = n.norm();
    if len > 0.0 {
        [(n.x / len) as f32, (n.y / len) as f32, (n.z / len) as f32]
    } else {
        [0.0; 3]
    }
}

pub fn write_stl_binary(mesh: &TriangleMesh, out: &mut impl Write) -> Result<()> {
    let mut buf = Vec::with_capacity(84 + STL_RECORD_LEN * mesh.triangle_count());
    let mut header = [0u8; STL_HEADER_LEN];
    header[..STL_HEADER_MAGIC.len()].copy_from_slice(STL_HEADER_MAGIC);
    buf.extend_from_slice(&header);
    let count = u32::try_from(mesh.triangle_count()).map_err(|_| {
        Error::Input(format!(
            "{} triangles exceed the STL count field",
            mesh.triangle_count()
        ))
    })?;
    buf.extend_from_slice(&count.to_le_bytes());
    for &tri in mesh.triangles() {
        for c in unit_normal(mesh, tri) {
            buf.extend_from_slice(&c.to_le_bytes());
        }
        for &v in &tri.0 {
            let p = mesh.vertices()[v as usize];
            for c in [p.x, p.y, p.z] {
                buf.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        buf.extend_from_slice(&0u16.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn write_stl_ascii(mesh: &TriangleMesh, out: &mut impl Write) -> Result<()> {
    let mut s = String::from("solid trirefine\n");
    for &tri in mesh.triangles() {
        let [nx, ny, nz] = unit_normal(mesh, tri);
        let _ = writeln!(s, "  facet normal {nx:e} {ny:e} {nz:e}");
        s.push_str("    outer loop\n");
        for &v in &tri.0 {
            let p = mesh.vertices()[v as usize];
            let _ = writeln!(
                s,
                "      vertex {:e} {:e} {:e}",
                p.x as f32, p.y as f32, p.z as f32
            );
        }
        s.push_str("    endloop\n  endfacet\n");
    }
    s.push_str("endsolid trirefine\n");
    out.write_all(s.as_bytes())?;
    Ok(())
}

pub fn write_obj(mesh: &TriangleMesh, out: &mut impl Write) -> Result<()> {
    let mut s = String::new();
    for p in mesh.vertices() {
        let _ = writeln!(s, "v {} {} {}", p.x, p.y, p.z);
    }
    for t in mesh.triangles() {
        let [a, b, c] = t.0;
        let _ = writeln!(s, "f {} {} {}", a + 1, b + 1, c + 1);
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

pub fn write_mesh(mesh: &TriangleMesh, format: MeshFormat, out: &mut impl Write) -> Result<()> {
    match format {
        MeshFormat::StlBinary => write_stl_binary(mesh, out),
        MeshFormat::StlAscii => write_stl_ascii(mesh, out),
        MeshFormat::Obj => write_obj(mesh, out),
    }
}

pub fn mesh_to_bytes(mesh: &TriangleMesh, format: MeshFormat) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_mesh(mesh, format, &mut buf)?;
    Ok(buf)
}

pub fn write_mesh_file(mesh: &TriangleMesh, path: &Path, format: MeshFormat) -> Result<()> {
    fs::write(path, mesh_to_bytes(mesh, format)?)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    /// `.csv` selects CSV, anything else JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        }
    }
}

/// Column order of the report CSV. `b_histogram` holds `;`-separated bin counts.
pub const REPORT_CSV_HEADER: [&str; 18] = [
    "method",
    "limit",
    "vertices",
    "meshes",
    "degenerate",
    "angle_lt15",
    "angle_lt30",
    "angle_gt90",
    "angle_gt120",
    "angle_ideal_40_80",
    "q_lt03",
    "q_lt05",
    "q_gt08",
    "time_sec",
    "created_total",
    "stack_high_water",
    "angle_basis",
    "b_histogram",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_reports_csv(reports: &[QualityReport], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_CSV_HEADER)?;
    for r in reports {
        let hist = r
            .b_histogram
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.method.clone(),
            r.limit.to_string(),
            r.vertices.to_string(),
            r.triangles.to_string(),
            r.degenerate.to_string(),
            r.angle_lt15.to_string(),
            r.angle_lt30.to_string(),
            r.angle_gt90.to_string(),
            r.angle_gt120.to_string(),
            r.angle_ideal_40_80.to_string(),
            r.q_lt03.to_string(),
            r.q_lt05.to_string(),
            r.q_gt08.to_string(),
            opt(r.time_sec),
            opt(r.created_total),
            opt(r.stack_high_water),
            r.angle_basis.clone(),
            hist,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty-printed JSON: an object for a single report, an array otherwise.
pub fn reports_to_json(reports: &[QualityReport]) -> Result<String> {
    let mut s = match reports {
        [single] => serde_json::to_string_pretty(single)?,
        many => serde_json::to_string_pretty(many)?,
    };
    s.push('\n');
    Ok(s)
}

pub fn write_report(
    reports: &[QualityReport],
    format: ReportFormat,
    mut out: impl Write,
) -> Result<()> {
    match format {
        ReportFormat::Json => {
            out.write_all(reports_to_json(reports)?.as_bytes())?;
            Ok(())
        }
        ReportFormat::Csv => write_reports_csv(reports, out),
    }
}

pub fn write_report_file(reports: &[QualityReport], path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_report(reports, ReportFormat::from_path(path), &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}
