//! Refines the 3-4-5 right triangle with a limit of 3.5 and prints what each method
//! produced. Only the sides of length 4 and 5 exceed the limit, so the novel scheme
//! leaves the short side alone.
//!
//! ```text
//! cargo run --example subdivide_triangle
//! ```

use trirefine::{subdivide, Point3, SubdivisionConfig, Triangle, TriangleMesh};

fn main() -> trirefine::Result<()> {
    let mesh = TriangleMesh::new(
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(4.0, 0.0, 0.0),
            Point3::new(0.0, 3.0, 0.0),
        ],
        vec![Triangle::new(0, 1, 2)],
    )?;

    for config in [
        SubdivisionConfig::classic(3.5),
        SubdivisionConfig::novel(3.5),
    ] {
        let out = subdivide(&mesh, &config)?;
        println!(
            "{:8} {} triangles, {} new vertices, longest edge {:.3}",
            config.method.label(),
            out.final_triangle_count,
            out.new_vertex_count,
            out.mesh.max_edge_length()
        );
        for &t in out.mesh.triangles() {
            let [a, b, c] = out.mesh.corners(t)?;
            println!(
                "    ({}, {}) ({}, {}) ({}, {})",
                a.x, a.y, b.x, b.y, c.x, c.y
            );
        }
    }
    Ok(())
}
