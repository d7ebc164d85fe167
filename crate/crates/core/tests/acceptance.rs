//! Acceptance checks, one line per criterion. Runs as a plain binary (`harness = false`)
//! so the summary lines print in order; exits non-zero when any criterion fails.
//!
//!     cargo test --test acceptance

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trirefine::bench::{default_bench_config, run_comparison, run_sweep, COMPARISON_LIMIT};
use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::io::{mesh_to_bytes, read_stl};
use trirefine::{
    classify, predict_classic_count, quality_q, split_angle_restricted, subdivide,
    undirected_edge_uses, Classifier, EdgeKey, Error, MeshFormat, MidpointCache, Point3,
    SubdivisionConfig, Triangle, TriangleMesh,
};

type Outcome = Result<String, String>;

/// Identifier, title and check for one criterion.
type Criterion = (&'static str, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn single(a: Point3, b: Point3, c: Point3) -> TriangleMesh {
    TriangleMesh::new(vec![a, b, c], vec![Triangle::new(0, 1, 2)]).unwrap()
}

fn p2(x: f64, y: f64) -> Point3 {
    Point3::new(x, y, 0.0)
}

fn q_of(mesh: &TriangleMesh, t: Triangle) -> f64 {
    let [a, b, c] = mesh.corners(t).unwrap();
    quality_q(b.distance(c), c.distance(a), a.distance(b)).unwrap()
}

/// Every corpus, method, parameter and limit of the default sweep, checked against the
/// edge-length limit on the actual output meshes.
fn ac1_universal_postcondition() -> Outcome {
    let start = Instant::now();
    let config = default_bench_config();
    let sweep = config.sweep.clone().expect("default config has a sweep");
    let mut cells = 0;
    for spec in &config.corpora {
        let mesh = generate_corpus(spec).unwrap();
        let diagonal = mesh.bbox_diagonal();
        let result = run_sweep(&spec.name(), &mesh, &sweep).unwrap();
        ensure!(
            result.failures.is_empty(),
            "{}: failed cells {:?}",
            spec.name(),
            result.failures
        );
        for limit in sweep.absolute_limits(diagonal) {
            for cfg in sweep.configs_at(limit) {
                let out = subdivide(&mesh, &cfg).unwrap();
                let longest = out.mesh.max_edge_length();
                ensure!(
                    longest <= limit + 1e-12 * diagonal,
                    "{} {} at {limit}: longest edge {longest}",
                    spec.name(),
                    cfg.method.label()
                );
                cells += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(60),
        "default sweep took {elapsed:?}"
    );
    Ok(format!(
        "{cells} cells within limit, sweep + audit {:.2?}",
        elapsed
    ))
}

fn ac2_prediction_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut runs = 0;
    let mut triangles = 0;
    while triangles < 50 {
        let mut p = || {
            Point3::new(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            )
        };
        let mesh = single(p(), p(), p());
        let longest = mesh.max_edge_length();
        if mesh.area_vector(mesh.triangles()[0]).norm() < 0.05 * longest * longest {
            continue;
        }
        triangles += 1;
        for _ in 0..10 {
            let limit = longest * rng.gen_range(0.02..1.5);
            let predicted = predict_classic_count(&mesh, limit).unwrap();
            let out = subdivide(&mesh, &SubdivisionConfig::classic(limit)).unwrap();
            ensure!(
                out.triangles_created_total as u128 == predicted.n_total,
                "created {} != N_total {} (longest {longest}, limit {limit})",
                out.triangles_created_total,
                predicted.n_total
            );
            ensure!(
                out.final_triangle_count as u128 == predicted.n_leaves,
                "final {} != N_leaves {}",
                out.final_triangle_count,
                predicted.n_leaves
            );
            runs += 1;
        }
    }
    Ok(format!("{runs} triangle/limit pairs match exactly"))
}

fn ac3_metric_exactness() -> Outcome {
    ensure!(quality_q(1.0, 1.0, 1.0).unwrap() == 1.0, "q(1,1,1) != 1");
    ensure!(quality_q(2.0, 1.0, 1.0).unwrap() == 0.0, "q(2,1,1) != 0");
    let right = quality_q(1.0, 1.0, 2f64.sqrt()).unwrap();
    let want = 2.0 * 2f64.sqrt() - 2.0;
    ensure!(
        (right - want).abs() <= 1e-12,
        "q(1,1,sqrt2) = {right}, want {want}"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut tested = 0;
    while tested < 1000 {
        let (a, b): (f64, f64) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let c = rng.gen_range((a - b).abs()..(a + b));
        let Ok(q) = quality_q(a, b, c) else { continue };
        let scale = rng.gen_range(1e-3..1e3);
        for other in [
            quality_q(b, a, c),
            quality_q(c, b, a),
            quality_q(a, c, b),
            quality_q(b, c, a),
            quality_q(c, a, b),
            quality_q(a * scale, b * scale, c * scale),
        ] {
            worst = worst.max((other.unwrap() - q).abs());
        }
        tested += 1;
    }
    ensure!(
        worst <= 1e-12,
        "largest permutation/scale deviation {worst:e}"
    );
    Ok(format!(
        "exact reference values; 1000 triples, max deviation {worst:.1e}"
    ))
}

fn ac4_conformity() -> Outcome {
    let limits: Vec<f64> = (0..7).map(|k| 5.0 * 10f64.powf(-0.5 * k as f64)).collect();
    let mut checked = 0;
    let mut largest = 0;
    for level in 0..=2 {
        let sphere = generate_corpus(&CorpusSpec::Icosphere { radius: 1.0, level }).unwrap();
        for &limit in &limits {
            for cfg in [
                SubdivisionConfig::novel(limit),
                SubdivisionConfig::multistage(limit, 4.0 * limit, 2.0),
                SubdivisionConfig::angle_restricted(limit, 30.0),
            ] {
                let out = subdivide(&sphere, &cfg).unwrap();
                let bad = undirected_edge_uses(&out.mesh)
                    .values()
                    .filter(|&&n| n != 2)
                    .count();
                ensure!(
                    bad == 0,
                    "level {level} {} at {limit}: {bad} edges not used exactly twice",
                    cfg.method.label()
                );
                largest = largest.max(out.final_triangle_count);
                checked += 1;
            }
        }
    }

    // Classic witness: only the tall triangle is refined, leaving the shared base split
    // on one side and whole on the other.
    let pair = TriangleMesh::new(
        vec![p2(0.0, 0.0), p2(1.0, 0.0), p2(0.5, 3.0), p2(0.5, -0.5)],
        vec![Triangle::new(0, 1, 2), Triangle::new(1, 0, 3)],
    )
    .unwrap();
    let classic = subdivide(&pair, &SubdivisionConfig::classic(1.6))
        .unwrap()
        .mesh;
    let uses = undirected_edge_uses(&classic);
    let m = classic
        .vertices()
        .iter()
        .position(|&v| v == p2(0.5, 0.0))
        .ok_or("classic did not split the shared edge")? as u32;
    ensure!(
        uses.get(&EdgeKey::new(0, 1)) == Some(&1),
        "whole base should be used once"
    );
    ensure!(
        uses.get(&EdgeKey::new(0, m)) == Some(&1) && uses.get(&EdgeKey::new(m, 1)) == Some(&1),
        "split halves should each be used once"
    );
    let novel = subdivide(&pair, &SubdivisionConfig::novel(1.6))
        .unwrap()
        .mesh;
    ensure!(
        undirected_edge_uses(&novel)
            .values()
            .filter(|&&n| n == 1)
            .count()
            == 6,
        "novel output should only have its outer boundary singly used"
    );
    Ok(format!(
        "{checked} icosphere runs closed (limits 5..0.005, up to {largest} triangles); classic T-vertex at (0.5, 0)"
    ))
}

fn ac5_element_economy() -> Outcome {
    let panel = generate_corpus(&CorpusSpec::reference_panel()).unwrap();
    let mut limit = panel.max_edge_length() * 1.01;
    let mut compared = 0;
    let mut ratios = Vec::new();
    while limit > 0.3 {
        let classifier = Classifier::new(&panel, limit, None);
        let mixed = panel
            .triangles()
            .iter()
            .any(|&t| matches!(classifier.classify(&panel, t).unqualified_count, 1 | 2));
        if mixed {
            let c = subdivide(&panel, &SubdivisionConfig::classic(limit)).unwrap();
            let n = subdivide(&panel, &SubdivisionConfig::novel(limit)).unwrap();
            ensure!(
                n.final_triangle_count < c.final_triangle_count,
                "limit {limit}: novel {} >= classic {}",
                n.final_triangle_count,
                c.final_triangle_count
            );
            ratios.push(n.final_triangle_count as f64 / c.final_triangle_count as f64);
            compared += 1;
        }
        limit /= 1.15;
    }
    ensure!(
        compared > 10,
        "only {compared} limits had mixed classifications"
    );

    let hex = generate_corpus(&CorpusSpec::regular_hexagon()).unwrap();
    for limit in [0.9, 0.7, 0.45, 0.3, 0.2, 0.13, 0.07] {
        let c = subdivide(&hex, &SubdivisionConfig::classic(limit)).unwrap();
        let n = subdivide(&hex, &SubdivisionConfig::novel(limit)).unwrap();
        ensure!(c.mesh == n.mesh, "regular hexagon differs at {limit}");
    }
    Ok(format!(
        "novel < classic at {compared} limits (ratio {:.2} down to {:.2}); regular hexagon identical",
        ratios.first().unwrap(),
        ratios.iter().copied().fold(f64::INFINITY, f64::min)
    ))
}

fn comparison() -> trirefine::bench::MethodComparison {
    let spec = CorpusSpec::reference_panel();
    let mesh = generate_corpus(&spec).unwrap();
    run_comparison(&spec.name(), &mesh, COMPARISON_LIMIT, 1).unwrap()
}

fn ac6_table_orderings() -> Outcome {
    let table = comparison();
    let names = [
        "vertices: multistage < restricted",
        "vertices: restricted <= novel",
        "vertices: novel < classic",
        "meshes: multistage < restricted",
        "meshes: restricted <= novel",
        "meshes: novel < classic",
        "q>0.8: classic < novel",
        "q>0.8: novel < multistage",
        "angle<15: novel < classic",
    ];
    let mut failed = Vec::new();
    for name in names {
        let check = table.check(name).ok_or(format!("missing check {name}"))?;
        if !check.held {
            failed.push(format!("{name} {}", check.detail));
        }
    }
    ensure!(failed.is_empty(), "{}", failed.join("; "));
    let r = &table.reports;
    Ok(format!(
        "limit {}: triangles classic {} / novel {} / restricted {}..{} / multistage {}..{}; q>0.8 {:.1}% / {:.1}% / {:.1}%",
        table.limit,
        r[0].triangles,
        r[1].triangles,
        r[4].triangles,
        r[2].triangles,
        r[7].triangles,
        r[5].triangles,
        100.0 * r[0].q_gt08,
        100.0 * r[1].q_gt08,
        100.0 * r[5].q_gt08
    ))
}

fn ac7_parameter_monotonicity() -> Outcome {
    let table = comparison();
    let mut details = Vec::new();
    for name in [
        "meshes: non-increasing in theta0",
        "meshes: decreasing in fold factor",
    ] {
        let check = table.check(name).ok_or(format!("missing check {name}"))?;
        ensure!(check.held, "{name}: {}", check.detail);
        details.push(check.detail.clone());
    }
    Ok(details.join("; "))
}

fn ac8_angle_restricted_stencil() -> Outcome {
    let mut mesh = single(p2(0.0, 0.0), p2(10.0, 0.0), p2(5.0, 0.5));
    let t = mesh.triangles()[0];
    let parent = q_of(&mesh, t);
    let class = classify(&mesh, t, 4.0, Some(15.0)).unwrap();
    ensure!(
        class.unqualified_count == 3 && class.two_acute_below_theta0,
        "needle gate not met"
    );
    let kids = split_angle_restricted(&mut mesh, &mut MidpointCache::new(), t, &class).unwrap();
    let qs: Vec<f64> = kids.iter().map(|&k| q_of(&mesh, k)).collect();
    let inherited = qs.iter().filter(|&&q| (q - parent).abs() <= 1e-9).count();
    ensure!(
        inherited == 2,
        "{inherited} children inherit the parent q ({qs:?})"
    );
    let middle: Vec<f64> = qs
        .iter()
        .copied()
        .filter(|&q| (q - parent).abs() > 1e-9)
        .collect();
    ensure!(
        middle.iter().all(|&q| q > parent),
        "middle children {middle:?} not above {parent}"
    );
    Ok(format!("parent q {parent:.6}; children {:.6?}", qs))
}

fn ac9_stl_roundtrip() -> Outcome {
    let refine = |spec: CorpusSpec, limit: f64| {
        let m = generate_corpus(&spec).unwrap();
        subdivide(&m, &SubdivisionConfig::novel(limit))
            .unwrap()
            .mesh
    };
    let meshes = vec![
        generate_corpus(&CorpusSpec::regular_hexagon()).unwrap(),
        generate_corpus(&CorpusSpec::skewed_hexagon()).unwrap(),
        generate_corpus(&CorpusSpec::Icosphere {
            radius: 1.0,
            level: 0,
        })
        .unwrap(),
        generate_corpus(&CorpusSpec::Icosphere {
            radius: 2.5,
            level: 2,
        })
        .unwrap(),
        generate_corpus(&CorpusSpec::Cylinder {
            radius: 1.0,
            height: 3.0,
            segments: 16,
            rings: 4,
        })
        .unwrap(),
        generate_corpus(&CorpusSpec::NeedleSoup {
            count: 100,
            aspect: 10.0,
            seed: 7,
        })
        .unwrap(),
        generate_corpus(&CorpusSpec::reference_panel()).unwrap(),
        refine(
            CorpusSpec::Icosphere {
                radius: 1.0,
                level: 1,
            },
            0.1,
        ),
        refine(CorpusSpec::reference_panel(), 1.0),
        refine(CorpusSpec::skewed_hexagon(), 0.05),
    ];
    let mut coords = 0usize;
    for (k, mesh) in meshes.iter().enumerate() {
        let soup = read_stl(&mesh_to_bytes(mesh, MeshFormat::StlBinary).unwrap()).unwrap();
        ensure!(
            soup.triangle_count() == mesh.triangle_count(),
            "mesh {k}: triangle count"
        );
        for (&orig, &back) in mesh.triangles().iter().zip(soup.triangles()) {
            let a = mesh.corners(orig).unwrap();
            let b = soup.corners(back).unwrap();
            for (pa, pb) in a.iter().zip(&b) {
                for (x, y) in [(pa.x, pb.x), (pa.y, pb.y), (pa.z, pb.z)] {
                    ensure!(
                        (x as f32).to_bits() == (y as f32).to_bits() && y == (x as f32) as f64,
                        "mesh {k}: coordinate {x} came back as {y}"
                    );
                    coords += 1;
                }
            }
        }
    }

    let one = single(p2(0.0, 0.0), p2(4.0, 0.0), p2(0.0, 3.0));
    let mut bytes = mesh_to_bytes(&one, MeshFormat::StlBinary).unwrap();
    bytes[80..84].copy_from_slice(&2u32.to_le_bytes());
    match read_stl(&bytes) {
        Err(e @ Error::TruncatedStl { offset: 134, .. }) => Ok(format!(
            "{coords} coordinates bitwise over 10 meshes; truncated fixture: {e}"
        )),
        other => Err(format!("truncated fixture gave {other:?}")),
    }
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_trirefine"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "trirefine {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(())
}

fn ac10_cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    let runs: [&[&str]; 3] = [
        &[
            "subdivide",
            "--method",
            "novel",
            "--max-edge",
            "0.7",
            "-i",
            "panel.stl",
            "-o",
            "out.stl",
            "--report",
            "report.json",
        ],
        &[
            "subdivide",
            "--method",
            "multistage",
            "--fold-factor",
            "1.8",
            "--max-edge",
            "0.05",
            "--relative",
            "-i",
            "panel.stl",
            "-o",
            "out.obj",
            "--report",
            "report.csv",
        ],
        &[
            "subdivide",
            "--method",
            "angle-restricted",
            "--angle-threshold",
            "30",
            "--max-edge",
            "1",
            "-i",
            "panel.stl",
            "-o",
            "out_ascii.stl",
            "--format",
            "stl-ascii",
            "--report",
            "report2.json",
        ],
    ];
    let mut outputs: Vec<Vec<Vec<u8>>> = Vec::new();
    for attempt in 0..2 {
        let dir = tmp.path().join(format!("run{attempt}"));
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        run_cli(
            &dir,
            &[
                "generate",
                "--shape",
                "stretched_panel",
                "--seed",
                "7",
                "-o",
                "panel.stl",
            ],
        )?;
        let mut files = Vec::new();
        for args in runs {
            run_cli(&dir, args)?;
        }
        for name in [
            "panel.stl",
            "out.stl",
            "report.json",
            "out.obj",
            "report.csv",
            "out_ascii.stl",
            "report2.json",
        ] {
            files.push(std::fs::read(dir.join(name)).map_err(|e| format!("{name}: {e}"))?);
        }
        outputs.push(files);
    }
    for (k, (a, b)) in outputs[0].iter().zip(&outputs[1]).enumerate() {
        ensure!(a == b, "output file {k} differs between runs");
        compared += a.len();
    }
    Ok(format!(
        "7 files, {compared} bytes identical across two runs"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "AC1",
            "universal post-condition",
            ac1_universal_postcondition,
        ),
        ("AC2", "classic count prediction", ac2_prediction_oracle),
        ("AC3", "metric exactness", ac3_metric_exactness),
        ("AC4", "conformity", ac4_conformity),
        ("AC5", "element economy", ac5_element_economy),
        ("AC6", "method comparison orderings", ac6_table_orderings),
        ("AC7", "parameter monotonicity", ac7_parameter_monotonicity),
        (
            "AC8",
            "angle-restricted stencil",
            ac8_angle_restricted_stencil,
        ),
        ("AC9", "STL round-trip", ac9_stl_roundtrip),
        ("AC10", "CLI determinism", ac10_cli_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (id, title, check) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] {id} {title} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {id} {title} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
