//! Edge-length driven local subdivision of triangle meshes.
//!
//! Refines a triangle mesh until no edge exceeds a length limit, either by classic
//! midpoint quartering or by stencils chosen from the number of over-long edges, and
//! measures the resulting mesh quality.
//!
//! ```
//! use trirefine::{subdivide, Point3, SubdivisionConfig, Triangle, TriangleMesh};
//!
//! let mesh = TriangleMesh::new(
//!     vec![Point3::new(0.0, 0.0, 0.0), Point3::new(4.0, 0.0, 0.0), Point3::new(0.0, 3.0, 0.0)],
//!     vec![Triangle::new(0, 1, 2)],
//! )?;
//! let classic = subdivide(&mesh, &SubdivisionConfig::classic(3.5))?;
//! let novel = subdivide(&mesh, &SubdivisionConfig::novel(3.5))?;
//! assert_eq!(classic.final_triangle_count, 4);
//! assert_eq!(novel.final_triangle_count, 3);
//! # Ok::<(), trirefine::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod io;
pub mod mesh;
pub mod metrics;
pub mod subdivide;

pub use bench::{run_comparison, run_sweep, SweepSpec};
pub use corpus::{generate_corpus, CorpusSpec};
pub use error::{Error, Result};
pub use io::{
    read_mesh, read_stl, write_mesh, write_mesh_file, write_report, MeshFormat, ReportFormat,
};
pub use mesh::{
    default_weld_tolerance, edge_length, get_or_create_midpoint, undirected_edge_uses,
    weld_vertices, EdgeKey, MidpointCache, Point3, Triangle, TriangleMesh, VertexId, WeldOutcome,
};
pub use metrics::{
    build_report, build_report_with_bins, quality_q, triangle_angles, vertex_b_values,
    QualityReport, TriangleGeometry,
};
pub use subdivide::{
    classify, multistage_limits, predict_classic_count, split_angle_restricted, split_bisect,
    split_quarter, split_three, subdivide, subdivide_multistage, ClassicPrediction, Classifier,
    Method, MethodKind, SubdivisionConfig, SubdivisionOutcome, TriangleClass,
};
