//! Multistage refinement: novel subdivision repeated under a shrinking limit
//! `L0 / f^k`, clamped to the final limit.

use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::{multistage_limits, subdivide, SubdivisionConfig};

fn main() -> trirefine::Result<()> {
    let mesh = generate_corpus(&CorpusSpec::reference_panel())?;
    let limit = 0.5;
    for f in [1.5, 1.8, 2.0] {
        let l0 = 4.0 * limit;
        let schedule = multistage_limits(limit, l0, f)?;
        let out = subdivide(&mesh, &SubdivisionConfig::multistage(limit, l0, f))?;
        println!("f = {f}: schedule {schedule:.3?}");
        for (k, stage) in out.stages.iter().enumerate() {
            println!(
                "  stage {k}: limit {:.3}, {} -> {} triangles, {} new vertices",
                stage.limit, stage.input_triangles, stage.final_triangles, stage.new_vertices
            );
        }
        println!(
            "  final {} triangles, created {}\n",
            out.final_triangle_count, out.triangles_created_total
        );
    }
    let novel = subdivide(&mesh, &SubdivisionConfig::novel(limit))?;
    println!(
        "single-stage novel for comparison: {} triangles",
        novel.final_triangle_count
    );
    Ok(())
}
