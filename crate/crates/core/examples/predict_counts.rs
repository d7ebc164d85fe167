use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trirefine::{
    predict_classic_count, subdivide, Point3, SubdivisionConfig, Triangle, TriangleMesh,
};

/// Closed-form classic counts against the simulation on a few random triangles.
fn main() -> trirefine::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..6 {
        let mut p = || Point3::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), 0.0);
        let mesh = TriangleMesh::new(vec![p(), p(), p()], vec![Triangle::new(0, 1, 2)])?;
        let limit = mesh.max_edge_length() * rng.gen_range(0.05..1.2);
        let predicted = predict_classic_count(&mesh, limit)?;
        let run = subdivide(&mesh, &SubdivisionConfig::classic(limit))?;
        println!(
            "limit {limit:7.4}: levels {:?}, total {} (simulated {}), leaves {} (simulated {})",
            predicted.levels,
            predicted.n_total,
            run.triangles_created_total,
            predicted.n_leaves,
            run.final_triangle_count
        );
    }
    Ok(())
}
