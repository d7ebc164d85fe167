use trirefine::bench::comparison_configs;
use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::{build_report, subdivide};

/// All eight method rows on a stretched panel at a user-chosen limit (default 1.0).
///
///     cargo run --release --example compare_methods -- 0.8
fn main() -> trirefine::Result<()> {
    let limit: f64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1.0);
    let mesh = generate_corpus(&CorpusSpec::reference_panel())?;
    println!(
        "{} triangles, {} vertices, longest edge {:.2}, limit {limit}",
        mesh.triangle_count(),
        mesh.vertex_count(),
        mesh.max_edge_length()
    );
    println!(
        "{:>16} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "method", "verts", "tris", "q>0.8", "<15deg", "ms"
    );
    for config in comparison_configs(limit) {
        let out = subdivide(&mesh, &config)?;
        let r = build_report(&out.mesh, limit, Some(out.elapsed), &config.method.label())?;
        println!(
            "{:>16} {:>8} {:>8} {:>7.1}% {:>7.1}% {:>8.2}",
            r.method,
            r.vertices,
            r.triangles,
            100.0 * r.q_gt08,
            100.0 * r.angle_lt15,
            1e3 * out.elapsed.as_secs_f64()
        );
    }
    Ok(())
}
