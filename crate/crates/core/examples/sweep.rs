//! Classic against novel over a descending limit schedule on the stretched panel,
//! printed as the plot-ready series CSV.
//!
//! ```text
//! cargo run --release --example sweep > series.csv
//! ```

use trirefine::bench::{run_sweep, write_series_csv, SweepSpec};
use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::MethodKind;

fn main() -> trirefine::Result<()> {
    let spec = CorpusSpec::reference_panel();
    let mesh = generate_corpus(&spec)?;
    let sweep = SweepSpec {
        methods: vec![MethodKind::Classic, MethodKind::Novel],
        limits: vec![8.0, 4.0, 2.0, 1.0, 0.5],
        repetitions: 3,
        ..SweepSpec::all_methods(vec![], false)
    };
    let result = run_sweep(&spec.name(), &mesh, &sweep)?;
    write_series_csv(&result.series, std::io::stdout())?;

    let classic = result.series_for(MethodKind::Classic, None);
    let novel = result.series_for(MethodKind::Novel, None);
    for (c, n) in classic.iter().zip(&novel) {
        eprintln!(
            "limit {:>4}: novel/classic = {:.3}",
            c.limit,
            n.final_count as f64 / c.final_count as f64
        );
    }
    Ok(())
}
