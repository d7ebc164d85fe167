//! Builds quality reports for a corpus mesh before and after refinement and writes them
//! as JSON and CSV into a directory (default: the system temp dir).

use std::path::PathBuf;

use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::io::{reports_to_json, write_report_file};
use trirefine::{build_report, subdivide, SubdivisionConfig};

fn main() -> trirefine::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let mesh = generate_corpus(&CorpusSpec::NeedleSoup {
        count: 50,
        aspect: 12.0,
        seed: 3,
    })?;
    let limit = 2.0;

    let before = build_report(&mesh, limit, None, "input")?;
    let out = subdivide(&mesh, &SubdivisionConfig::angle_restricted(limit, 30.0))?;
    let after = build_report(&out.mesh, limit, Some(out.elapsed), "restricted(30)")?
        .with_run_counters(out.triangles_created_total, out.stack_high_water as u64);

    print!("{}", reports_to_json(std::slice::from_ref(&after))?);
    let reports = [before, after];
    let csv = dir.join("quality_report.csv");
    let json = dir.join("quality_report.json");
    write_report_file(&reports, &csv)?;
    write_report_file(&reports, &json)?;
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}
