use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::{
    subdivide, undirected_edge_uses, Point3, SubdivisionConfig, Triangle, TriangleMesh,
};

fn edge_use_histogram(mesh: &TriangleMesh) -> [usize; 3] {
    let mut h = [0; 3];
    for n in undirected_edge_uses(mesh).into_values() {
        h[n.min(3) - 1] += 1;
    }
    h
}

fn main() -> trirefine::Result<()> {
    // A tall triangle sharing its base with a small one. Only the tall one has long
    // edges, so classic quartering splits the shared base from one side only.
    let pair = TriangleMesh::new(
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.5, 3.0, 0.0),
            Point3::new(0.5, -0.5, 0.0),
        ],
        vec![Triangle::new(0, 1, 2), Triangle::new(1, 0, 3)],
    )?;
    println!("edge uses [1, 2, >2]");
    println!("input          {:?}", edge_use_histogram(&pair));
    for config in [
        SubdivisionConfig::classic(1.6),
        SubdivisionConfig::novel(1.6),
    ] {
        let out = subdivide(&pair, &config)?;
        println!(
            "{:14} {:?}",
            config.method.label(),
            edge_use_histogram(&out.mesh)
        );
    }

    // On a closed surface every edge of a conforming mesh is used exactly twice.
    let sphere = generate_corpus(&CorpusSpec::Icosphere {
        radius: 1.0,
        level: 1,
    })?;
    for config in [
        SubdivisionConfig::classic(0.3),
        SubdivisionConfig::novel(0.3),
        SubdivisionConfig::multistage(0.3, 1.2, 2.0),
        SubdivisionConfig::angle_restricted(0.3, 30.0),
    ] {
        let out = subdivide(&sphere, &config)?;
        println!(
            "icosphere {:16} {:?}",
            config.method.label(),
            edge_use_histogram(&out.mesh)
        );
    }
    Ok(())
}
