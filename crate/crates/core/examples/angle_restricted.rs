use trirefine::{
    classify, quality_q, split_angle_restricted, split_quarter, MidpointCache, Point3, Triangle,
    TriangleMesh,
};

fn q_of(mesh: &TriangleMesh, t: Triangle) -> f64 {
    let [a, b, c] = mesh.corners(t).unwrap();
    quality_q(b.distance(c), c.distance(a), a.distance(b)).unwrap()
}

// A needle with base 10 and height 0.5. Quartering copies its shape into three of the
// four children; the angle-restricted stencil only into the two end children.
fn main() -> trirefine::Result<()> {
    let needle = TriangleMesh::new(
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(10.0, 0.0, 0.0),
            Point3::new(5.0, 0.5, 0.0),
        ],
        vec![Triangle::new(0, 1, 2)],
    )?;
    let t = needle.triangles()[0];
    println!("parent q = {:.6}", q_of(&needle, t));

    let class = classify(&needle, t, 4.0, Some(15.0))?;
    println!(
        "unqualified edges: {}, two angles below 15 deg: {}",
        class.unqualified_count, class.two_acute_below_theta0
    );

    let mut quartered = needle.clone();
    let kids = split_quarter(&mut quartered, &mut MidpointCache::new(), t)?;
    let qs: Vec<String> = kids
        .iter()
        .map(|&k| format!("{:.6}", q_of(&quartered, k)))
        .collect();
    println!("quartering children q:       {}", qs.join(" "));

    let mut restricted = needle.clone();
    let kids = split_angle_restricted(&mut restricted, &mut MidpointCache::new(), t, &class)?;
    let qs: Vec<String> = kids
        .iter()
        .map(|&k| format!("{:.6}", q_of(&restricted, k)))
        .collect();
    println!("angle-restricted children q: {}", qs.join(" "));
    Ok(())
}
