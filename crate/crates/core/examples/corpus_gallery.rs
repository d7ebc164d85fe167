use std::path::PathBuf;

use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::io::write_mesh_file;
use trirefine::{undirected_edge_uses, MeshFormat};

/// Generates every corpus shape and writes it as OBJ into the given directory
/// (default: the system temp dir).
fn main() -> trirefine::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let specs = [
        CorpusSpec::regular_hexagon(),
        CorpusSpec::skewed_hexagon(),
        CorpusSpec::Icosphere {
            radius: 1.0,
            level: 2,
        },
        CorpusSpec::Cylinder {
            radius: 1.0,
            height: 3.0,
            segments: 16,
            rings: 4,
        },
        CorpusSpec::NeedleSoup {
            count: 100,
            aspect: 10.0,
            seed: 7,
        },
        CorpusSpec::reference_panel(),
    ];
    for spec in specs {
        let mesh = generate_corpus(&spec)?;
        let boundary = undirected_edge_uses(&mesh)
            .values()
            .filter(|&&n| n == 1)
            .count();
        let path = dir.join(format!("{}.obj", trirefine::bench::slug(&spec.name())));
        write_mesh_file(&mesh, &path, MeshFormat::Obj)?;
        println!(
            "{:45} {:5} vertices {:5} triangles {:4} boundary edges -> {}",
            spec.name(),
            mesh.vertex_count(),
            mesh.triangle_count(),
            boundary,
            path.display()
        );
    }
    Ok(())
}
