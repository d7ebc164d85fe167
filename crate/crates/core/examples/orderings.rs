//! The eight-row method comparison on the reference stretched panel, with the
//! orderings that were checked. Pass a directory to also write the CSV and JSON files.

use trirefine::bench::{run_comparison, write_bench_outputs, BenchOutput, COMPARISON_LIMIT};
use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::io::write_report;
use trirefine::ReportFormat;

fn main() -> trirefine::Result<()> {
    let spec = CorpusSpec::reference_panel();
    let mesh = generate_corpus(&spec)?;
    let table = run_comparison(&spec.name(), &mesh, COMPARISON_LIMIT, 1)?;

    write_report(&table.reports, ReportFormat::Csv, std::io::stdout())?;
    println!();
    for check in &table.orderings {
        let mark = if check.held { "held  " } else { "FAILED" };
        println!("{mark} {:40} {}", check.name, check.detail);
    }

    if let Some(dir) = std::env::args().nth(1) {
        let output = BenchOutput {
            sweeps: vec![],
            tables: vec![table],
        };
        for path in write_bench_outputs(&output, dir.as_ref())? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
