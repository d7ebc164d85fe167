//! Writes a refined icosphere as binary STL, ASCII STL and OBJ, reads each back and
//! welds the STL soups to recover the indexed mesh.

use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::io::{mesh_to_bytes, read_obj, read_stl};
use trirefine::{subdivide, weld_vertices, MeshFormat, SubdivisionConfig};

fn main() -> trirefine::Result<()> {
    let sphere = generate_corpus(&CorpusSpec::Icosphere {
        radius: 1.0,
        level: 1,
    })?;
    let mesh = subdivide(&sphere, &SubdivisionConfig::novel(0.3))?.mesh;
    println!(
        "mesh: {} vertices, {} triangles",
        mesh.vertex_count(),
        mesh.triangle_count()
    );

    for format in [MeshFormat::StlBinary, MeshFormat::StlAscii, MeshFormat::Obj] {
        let bytes = mesh_to_bytes(&mesh, format)?;
        let back = match format {
            MeshFormat::Obj => read_obj(&bytes)?,
            _ => read_stl(&bytes)?,
        };
        let welded = weld_vertices(&back, 0.0)?;
        println!(
            "{format:?}: {} bytes, read {} vertices, welded to {} vertices / {} triangles",
            bytes.len(),
            back.vertex_count(),
            welded.mesh.vertex_count(),
            welded.mesh.triangle_count()
        );
    }
    Ok(())
}
