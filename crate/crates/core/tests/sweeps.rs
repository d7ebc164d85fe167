use trirefine::bench::{default_bench_config, run_sweep, SweepSpec};
use trirefine::corpus::{generate_corpus, CorpusSpec};
use trirefine::MethodKind;

#[test]
fn counts_grow_as_limits_shrink() {
    let mesh = generate_corpus(&CorpusSpec::reference_panel()).unwrap();
    let mut sweep = SweepSpec::all_methods(vec![4.0, 2.0, 1.0, 0.7], false);
    sweep.repetitions = 1;
    let result = run_sweep("panel", &mesh, &sweep).unwrap();
    assert!(result.failures.is_empty());
    let params: Vec<(MethodKind, Option<f64>)> = vec![
        (MethodKind::Classic, None),
        (MethodKind::Novel, None),
        (MethodKind::Multistage, Some(1.5)),
        (MethodKind::Multistage, Some(2.0)),
        (MethodKind::AngleRestricted, Some(15.0)),
        (MethodKind::AngleRestricted, Some(45.0)),
    ];
    for (kind, param) in params {
        let series = result.series_for(kind, param);
        assert_eq!(series.len(), 4);
        for w in series.windows(2) {
            assert!(w[0].final_count <= w[1].final_count, "{kind} {param:?}");
        }
    }
    let classic = result.series_for(MethodKind::Classic, None);
    let novel = result.series_for(MethodKind::Novel, None);
    for (c, n) in classic.iter().zip(&novel) {
        assert!(n.final_count < c.final_count);
    }
}

#[test]
fn default_sweep_cells_all_succeed() {
    let config = default_bench_config();
    let mut sweep = config.sweep.clone().unwrap();
    sweep.repetitions = 1;
    for spec in &config.corpora {
        let mesh = generate_corpus(spec).unwrap();
        let result = run_sweep(&spec.name(), &mesh, &sweep).unwrap();
        assert!(result.failures.is_empty(), "{:?}", result.failures);
        assert_eq!(result.reports.len(), sweep.limits.len() * 8);
        for r in &result.reports {
            assert_eq!(r.degenerate, 0);
            assert!(r.time_sec.is_some());
        }
    }
}
