//! Parameter sweeps and the eight-row method comparison over synthetic corpora.
//!
//! Sweep cells run on a fresh copy of the corpus, are timed over several repetitions
//! (median reported) and never abort the sweep when they fail.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::corpus::{generate_corpus, CorpusSpec};
use crate::error::{Error, Result};
use crate::io::{write_report_file, ReportFormat};
use crate::mesh::TriangleMesh;
use crate::metrics::{build_report, QualityReport};
use crate::subdivide::{
    subdivide, MethodKind, SubdivisionConfig, SubdivisionOutcome, DEFAULT_INITIAL_LIMIT_FACTOR,
};

pub const DEFAULT_FOLD_FACTORS: [f64; 3] = [1.5, 1.8, 2.0];
pub const DEFAULT_ANGLE_THRESHOLDS: [f64; 3] = [15.0, 30.0, 45.0];
pub const DEFAULT_REPETITIONS: usize = 5;

/// Absolute slack allowed on the edge-length post-condition, as a fraction of the
/// corpus bounding-box diagonal.
pub const POSTCONDITION_TOLERANCE: f64 = 1e-12;

fn default_fold_factors() -> Vec<f64> {
    DEFAULT_FOLD_FACTORS.to_vec()
}
fn default_angle_thresholds() -> Vec<f64> {
    DEFAULT_ANGLE_THRESHOLDS.to_vec()
}
fn default_repetitions() -> usize {
    DEFAULT_REPETITIONS
}
fn default_initial_limit_factor() -> f64 {
    DEFAULT_INITIAL_LIMIT_FACTOR
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub methods: Vec<MethodKind>,
    /// Strictly descending edge-length limits.
    pub limits: Vec<f64>,
    /// Interpret `limits` as fractions of the corpus bounding-box diagonal.
    #[serde(default)]
    pub relative: bool,
    #[serde(default = "default_fold_factors")]
    pub fold_factors: Vec<f64>,
    #[serde(default = "default_angle_thresholds")]
    pub angle_thresholds: Vec<f64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Multistage starts at this multiple of the cell's final limit.
    #[serde(default = "default_initial_limit_factor")]
    pub initial_limit_factor: f64,
}

impl SweepSpec {
    /// All four methods with the default parameter grids over the given limits.
    pub fn all_methods(limits: Vec<f64>, relative: bool) -> Self {
        SweepSpec {
            methods: MethodKind::ALL.to_vec(),
            limits,
            relative,
            fold_factors: default_fold_factors(),
            angle_thresholds: default_angle_thresholds(),
            repetitions: DEFAULT_REPETITIONS,
            initial_limit_factor: DEFAULT_INITIAL_LIMIT_FACTOR,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("sweep lists no methods".into()));
        }
        if self.limits.is_empty() {
            return Err(Error::Config("sweep lists no limits".into()));
        }
        if let Some(bad) = self.limits.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::Config(format!(
                "sweep limit {bad} is not a positive number"
            )));
        }
        if self.limits.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config(
                "sweep limits must be strictly descending".into(),
            ));
        }
        if self.methods.contains(&MethodKind::Multistage) && self.fold_factors.is_empty() {
            return Err(Error::Config(
                "multistage selected with an empty fold-factor grid".into(),
            ));
        }
        if self.methods.contains(&MethodKind::AngleRestricted) && self.angle_thresholds.is_empty() {
            return Err(Error::Config(
                "angle-restricted selected with an empty threshold grid".into(),
            ));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if !(self.initial_limit_factor >= 1.0) {
            return Err(Error::Config(format!(
                "initial_limit_factor must be >= 1, got {}",
                self.initial_limit_factor
            )));
        }
        Ok(())
    }

    /// Absolute limits for a corpus with the given bounding-box diagonal.
    pub fn absolute_limits(&self, diagonal: f64) -> Vec<f64> {
        let scale = if self.relative { diagonal } else { 1.0 };
        self.limits.iter().map(|l| l * scale).collect()
    }

    /// Every configuration the sweep runs at one limit, grouped by method.
    pub fn configs_at(&self, limit: f64) -> Vec<SubdivisionConfig> {
        let mut out = Vec::new();
        for kind in &self.methods {
            match kind {
                MethodKind::Classic => out.push(SubdivisionConfig::classic(limit)),
                MethodKind::Novel => out.push(SubdivisionConfig::novel(limit)),
                MethodKind::Multistage => out.extend(self.fold_factors.iter().map(|&f| {
                    SubdivisionConfig::multistage(limit, limit * self.initial_limit_factor, f)
                })),
                MethodKind::AngleRestricted => out.extend(
                    self.angle_thresholds
                        .iter()
                        .map(|&t| SubdivisionConfig::angle_restricted(limit, t)),
                ),
            }
        }
        out
    }
}

/// One point of a plot-ready series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub method: String,
    pub param: Option<f64>,
    pub limit: f64,
    pub final_count: u64,
    pub created_total: u64,
    pub new_vertices: u64,
    pub time_sec: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub method: String,
    pub limit: f64,
    pub error: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepResult {
    pub corpus: String,
    pub reports: Vec<QualityReport>,
    pub series: Vec<SeriesRow>,
    pub failures: Vec<CellFailure>,
}

impl SweepResult {
    /// Series rows of one method label (e.g. `multistage` with `param` 1.8), in limit order.
    pub fn series_for(&self, method: MethodKind, param: Option<f64>) -> Vec<&SeriesRow> {
        self.series
            .iter()
            .filter(|r| r.method == method.name() && r.param == param)
            .collect()
    }
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2
    }
}

/// Runs one configuration `repetitions` times and returns the last outcome together
/// with the median subdivision time.
pub fn timed_run(
    mesh: &TriangleMesh,
    config: &SubdivisionConfig,
    repetitions: usize,
) -> Result<(SubdivisionOutcome, Duration)> {
    let mut samples = Vec::with_capacity(repetitions);
    let mut last = None;
    for _ in 0..repetitions.max(1) {
        let out = subdivide(mesh, config)?;
        samples.push(out.elapsed);
        last = Some(out);
    }
    Ok((last.expect("at least one repetition"), median(samples)))
}

fn check_postcondition(outcome: &SubdivisionOutcome, limit: f64, diagonal: f64) -> Result<()> {
    let longest = outcome.mesh.max_edge_length();
    if longest > limit + POSTCONDITION_TOLERANCE * diagonal {
        return Err(Error::Logic(format!(
            "longest output edge {longest} exceeds limit {limit}"
        )));
    }
    Ok(())
}

fn run_cell(
    mesh: &TriangleMesh,
    config: &SubdivisionConfig,
    repetitions: usize,
) -> Result<(QualityReport, SeriesRow)> {
    let (outcome, time) = timed_run(mesh, config, repetitions)?;
    check_postcondition(&outcome, config.limit, mesh.bbox_diagonal())?;
    let report = build_report(
        &outcome.mesh,
        config.limit,
        Some(time),
        &config.method.label(),
    )?
    .with_run_counters(
        outcome.triangles_created_total,
        outcome.stack_high_water as u64,
    );
    let row = SeriesRow {
        method: config.method.kind().name().to_string(),
        param: config.method.parameter(),
        limit: config.limit,
        final_count: outcome.final_triangle_count as u64,
        created_total: outcome.triangles_created_total,
        new_vertices: outcome.new_vertex_count as u64,
        time_sec: time.as_secs_f64(),
    };
    Ok((report, row))
}

/// Runs every (method, parameter, limit) cell of `sweep` on `mesh`.
///
/// Only an invalid sweep specification is an error; failing cells land in
/// [`SweepResult::failures`].
pub fn run_sweep(corpus: &str, mesh: &TriangleMesh, sweep: &SweepSpec) -> Result<SweepResult> {
    sweep.validate()?;
    let mut result = SweepResult {
        corpus: corpus.to_string(),
        ..Default::default()
    };
    for limit in sweep.absolute_limits(mesh.bbox_diagonal()) {
        for config in sweep.configs_at(limit) {
            match run_cell(mesh, &config, sweep.repetitions) {
                Ok((report, row)) => {
                    result.reports.push(report);
                    result.series.push(row);
                }
                Err(e) => result.failures.push(CellFailure {
                    method: config.method.label(),
                    limit,
                    error: e.to_string(),
                }),
            }
        }
    }
    Ok(result)
}

pub const SERIES_CSV_HEADER: [&str; 7] = [
    "method",
    "param",
    "limit",
    "final_count",
    "created_total",
    "new_vertices",
    "time_sec",
];

pub fn write_series_csv(rows: &[SeriesRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SERIES_CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.clone(),
            r.param.map(|p| p.to_string()).unwrap_or_default(),
            r.limit.to_string(),
            r.final_count.to_string(),
            r.created_total.to_string(),
            r.new_vertices.to_string(),
            r.time_sec.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// The eight comparison rows at one final limit: classic, novel, angle-restricted at
/// 15/30/45 degrees and multistage with fold factors 1.5/1.8/2.0 starting from four
/// times the limit.
pub fn comparison_configs(limit: f64) -> Vec<SubdivisionConfig> {
    let mut rows = vec![
        SubdivisionConfig::classic(limit),
        SubdivisionConfig::novel(limit),
    ];
    rows.extend(
        DEFAULT_ANGLE_THRESHOLDS
            .iter()
            .map(|&t| SubdivisionConfig::angle_restricted(limit, t)),
    );
    rows.extend(
        DEFAULT_FOLD_FACTORS.iter().map(|&f| {
            SubdivisionConfig::multistage(limit, limit * DEFAULT_INITIAL_LIMIT_FACTOR, f)
        }),
    );
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub name: String,
    pub held: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodComparison {
    pub corpus: String,
    pub limit: f64,
    /// Rows in [`comparison_configs`] order.
    pub reports: Vec<QualityReport>,
    pub orderings: Vec<OrderingCheck>,
}

impl MethodComparison {
    pub fn check(&self, name: &str) -> Option<&OrderingCheck> {
        self.orderings.iter().find(|c| c.name == name)
    }

    pub fn all_held(&self) -> bool {
        self.orderings.iter().all(|c| c.held)
    }
}

fn fmt_values(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    format!("[{}]", parts.join(", "))
}

/// `lo` group strictly (or weakly) below `hi` group: max(lo) < min(hi).
fn below(name: &str, lo: &[f64], hi: &[f64], strict: bool) -> OrderingCheck {
    let max_lo = lo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_hi = hi.iter().copied().fold(f64::INFINITY, f64::min);
    let held = if strict {
        max_lo < min_hi
    } else {
        max_lo <= min_hi
    };
    OrderingCheck {
        name: name.to_string(),
        held,
        detail: format!(
            "{} {} {}",
            fmt_values(lo),
            if strict { "<" } else { "<=" },
            fmt_values(hi)
        ),
    }
}

fn monotone(name: &str, values: &[f64], strict: bool) -> OrderingCheck {
    let held = values
        .windows(2)
        .all(|w| if strict { w[0] > w[1] } else { w[0] >= w[1] });
    OrderingCheck {
        name: name.to_string(),
        held,
        detail: format!(
            "{} {}",
            fmt_values(values),
            if strict {
                "strictly decreasing"
            } else {
                "non-increasing"
            }
        ),
    }
}

/// Evaluates the comparison orderings over eight rows in [`comparison_configs`] order.
pub fn comparison_orderings(rows: &[QualityReport]) -> Vec<OrderingCheck> {
    assert_eq!(rows.len(), 8, "expected the eight comparison rows");
    let pick = |f: &dyn Fn(&QualityReport) -> f64, range: std::ops::Range<usize>| {
        rows[range].iter().map(f).collect::<Vec<f64>>()
    };
    let verts = |r: &QualityReport| r.vertices as f64;
    let tris = |r: &QualityReport| r.triangles as f64;
    let q08 = |r: &QualityReport| r.q_gt08;
    let a15 = |r: &QualityReport| r.angle_lt15;
    let (classic, novel, restricted, multistage) = (0..1, 1..2, 2..5, 5..8);

    let mut checks = Vec::new();
    for (what, f) in [
        ("vertices", &verts as &dyn Fn(&QualityReport) -> f64),
        ("meshes", &tris),
    ] {
        checks.push(below(
            &format!("{what}: multistage < restricted"),
            &pick(f, multistage.clone()),
            &pick(f, restricted.clone()),
            true,
        ));
        checks.push(below(
            &format!("{what}: restricted <= novel"),
            &pick(f, restricted.clone()),
            &pick(f, novel.clone()),
            false,
        ));
        checks.push(below(
            &format!("{what}: novel < classic"),
            &pick(f, novel.clone()),
            &pick(f, classic.clone()),
            true,
        ));
    }
    checks.push(below(
        "q>0.8: classic < novel",
        &pick(&q08, classic.clone()),
        &pick(&q08, novel.clone()),
        true,
    ));
    checks.push(below(
        "q>0.8: novel < multistage",
        &pick(&q08, novel.clone()),
        &pick(&q08, multistage.clone()),
        true,
    ));
    checks.push(below(
        "angle<15: novel < classic",
        &pick(&a15, novel),
        &pick(&a15, classic),
        true,
    ));
    checks.push(monotone(
        "meshes: non-increasing in theta0",
        &pick(&tris, restricted),
        false,
    ));
    checks.push(monotone(
        "meshes: decreasing in fold factor",
        &pick(&tris, multistage),
        true,
    ));
    checks
}

/// Runs the eight comparison rows on `mesh` at `limit` and evaluates the orderings.
pub fn run_comparison(
    corpus: &str,
    mesh: &TriangleMesh,
    limit: f64,
    repetitions: usize,
) -> Result<MethodComparison> {
    let mut reports = Vec::with_capacity(8);
    for config in comparison_configs(limit) {
        config.validate()?;
        let (report, _) = run_cell(mesh, &config, repetitions)?;
        reports.push(report);
    }
    let orderings = comparison_orderings(&reports);
    Ok(MethodComparison {
        corpus: corpus.to_string(),
        limit,
        reports,
        orderings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonSpec {
    pub corpus: CorpusSpec,
    pub limit: f64,
    #[serde(default)]
    pub relative: bool,
    #[serde(default = "one_repetition")]
    pub repetitions: usize,
}

fn one_repetition() -> usize {
    1
}

/// Contents of a `bench --sweep` configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    /// Corpora the sweep runs on.
    #[serde(default)]
    pub corpora: Vec<CorpusSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub comparison: Option<ComparisonSpec>,
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: BenchConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep.is_some() && self.corpora.is_empty() {
            return Err(Error::Config("bench sweep lists no corpora".into()));
        }
        if self.sweep.is_none() && self.comparison.is_none() {
            return Err(Error::Config(
                "bench configuration needs a 'sweep' or a 'comparison' section".into(),
            ));
        }
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        if let Some(t) = &self.comparison {
            if !(t.limit > 0.0 && t.limit.is_finite()) || t.repetitions == 0 {
                return Err(Error::Config(
                    "comparison needs a positive limit and repetitions".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Every corpus shape under all four methods at relative limits spanning a decade,
/// plus the eight-row comparison on the reference panel.
pub fn default_bench_config() -> BenchConfig {
    BenchConfig {
        corpora: vec![
            CorpusSpec::regular_hexagon(),
            CorpusSpec::skewed_hexagon(),
            CorpusSpec::Icosphere {
                radius: 1.0,
                level: 2,
            },
            CorpusSpec::Cylinder {
                radius: 1.0,
                height: 3.0,
                segments: 16,
                rings: 4,
            },
            CorpusSpec::NeedleSoup {
                count: 100,
                aspect: 10.0,
                seed: 7,
            },
            CorpusSpec::reference_panel(),
        ],
        sweep: Some(SweepSpec::all_methods(vec![0.2, 0.1, 0.05, 0.02], true)),
        comparison: Some(ComparisonSpec {
            corpus: CorpusSpec::reference_panel(),
            limit: COMPARISON_LIMIT,
            relative: false,
            repetitions: 1,
        }),
    }
}

/// Final limit of the comparison table on the reference panel, in model units. Half
/// the panel's unit row height, so every original triangle is refined several levels.
pub const COMPARISON_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Default, Serialize)]
pub struct BenchOutput {
    pub sweeps: Vec<SweepResult>,
    pub tables: Vec<MethodComparison>,
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchOutput> {
    config.validate()?;
    let mut out = BenchOutput::default();
    if let Some(sweep) = &config.sweep {
        for spec in &config.corpora {
            let mesh = generate_corpus(spec)?;
            out.sweeps.push(run_sweep(&spec.name(), &mesh, sweep)?);
        }
    }
    if let Some(t) = &config.comparison {
        let mesh = generate_corpus(&t.corpus)?;
        let limit = if t.relative {
            t.limit * mesh.bbox_diagonal()
        } else {
            t.limit
        };
        out.tables.push(run_comparison(
            &t.corpus.name(),
            &mesh,
            limit,
            t.repetitions,
        )?);
    }
    Ok(out)
}

/// File-name friendly form of a corpus name.
pub fn slug(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_string()
}

/// Writes per-corpus report tables, series and ordering files into `dir`.
pub fn write_bench_outputs(output: &BenchOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (k, sweep) in output.sweeps.iter().enumerate() {
        let stem = format!("{k:02}_{}", slug(&sweep.corpus));
        let reports = dir.join(format!("{stem}_reports.csv"));
        write_report_file(&sweep.reports, &reports)?;
        let series = dir.join(format!("{stem}_series.csv"));
        write_series_csv(&sweep.series, fs::File::create(&series)?)?;
        written.extend([reports, series]);
        if !sweep.failures.is_empty() {
            let path = dir.join(format!("{stem}_failures.json"));
            fs::write(&path, serde_json::to_string_pretty(&sweep.failures)? + "\n")?;
            written.push(path);
        }
    }
    for (k, table) in output.tables.iter().enumerate() {
        let stem = format!("{k:02}_{}", slug(&table.corpus));
        let rows = dir.join(format!("{stem}_comparison.csv"));
        crate::io::write_report(&table.reports, ReportFormat::Csv, fs::File::create(&rows)?)?;
        let checks = dir.join(format!("{stem}_orderings.json"));
        fs::write(
            &checks,
            serde_json::to_string_pretty(&table.orderings)? + "\n",
        )?;
        written.extend([rows, checks]);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_sweep(methods: Vec<MethodKind>) -> SweepSpec {
        SweepSpec {
            methods,
            limits: vec![0.45, 0.2],
            relative: false,
            fold_factors: vec![2.0],
            angle_thresholds: vec![30.0],
            repetitions: 3,
            initial_limit_factor: 4.0,
        }
    }

    #[test]
    fn sweep_validation() {
        let mut s = small_sweep(vec![MethodKind::Novel]);
        assert!(s.validate().is_ok());
        s.limits = vec![0.25, 0.5];
        assert!(s.validate().is_err());
        s.limits = vec![0.5, 0.5];
        assert!(s.validate().is_err());
        let mut s = small_sweep(vec![MethodKind::Multistage]);
        s.fold_factors.clear();
        assert!(s.validate().is_err());
        let mut s = small_sweep(vec![]);
        assert!(s.validate().is_err());
        s.methods = vec![MethodKind::Classic];
        s.repetitions = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn sweep_cells_and_series() {
        let mesh = generate_corpus(&CorpusSpec::regular_hexagon()).unwrap();
        let spec = small_sweep(MethodKind::ALL.to_vec());
        let r = run_sweep("hexagon", &mesh, &spec).unwrap();
        assert!(r.failures.is_empty());
        assert_eq!(r.reports.len(), 2 * 4);
        assert_eq!(r.series.len(), 8);
        let classic = r.series_for(MethodKind::Classic, None);
        let novel = r.series_for(MethodKind::Novel, None);
        for (c, n) in classic.iter().zip(&novel) {
            assert_eq!(c.final_count, n.final_count);
        }
        assert!(classic[0].final_count <= classic[1].final_count);
        assert_eq!(r.series_for(MethodKind::Multistage, Some(2.0)).len(), 2);

        let mut csv = Vec::new();
        write_series_csv(&r.series, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().next().unwrap(), SERIES_CSV_HEADER.join(","));
        assert_eq!(text.lines().count(), 9);
    }

    #[test]
    fn failing_cell_is_recorded() {
        let mesh = generate_corpus(&CorpusSpec::regular_hexagon()).unwrap();
        let mut spec = small_sweep(vec![MethodKind::AngleRestricted, MethodKind::Novel]);
        spec.angle_thresholds = vec![75.0];
        let r = run_sweep("hexagon", &mesh, &spec).unwrap();
        assert_eq!(r.failures.len(), 2);
        assert_eq!(r.series.len(), 2);
        assert!(r.failures[0].error.contains("75"));
    }

    #[test]
    fn median_of_durations() {
        let ms = Duration::from_millis;
        assert_eq!(median(vec![ms(5), ms(1), ms(3)]), ms(3));
        assert_eq!(median(vec![ms(4), ms(2)]), ms(3));
    }

    #[test]
    fn comparison_rows_and_regular_hexagon() {
        let rows = comparison_configs(0.3);
        let labels: Vec<String> = rows.iter().map(|c| c.method.label()).collect();
        assert_eq!(
            labels,
            [
                "classic",
                "novel",
                "restricted(15)",
                "restricted(30)",
                "restricted(45)",
                "multistage(1.5)",
                "multistage(1.8)",
                "multistage(2)",
            ]
        );
        let hex = generate_corpus(&CorpusSpec::regular_hexagon()).unwrap();
        let t = run_comparison("hexagon", &hex, 0.3, 1).unwrap();
        assert_eq!(t.reports.len(), 8);
        let (c, n) = (&t.reports[0], &t.reports[1]);
        assert_eq!((c.vertices, c.triangles), (n.vertices, n.triangles));
        assert_eq!(c.q_gt08, n.q_gt08);
        assert!(!t.check("meshes: novel < classic").unwrap().held);
    }

    #[test]
    fn ordering_helpers() {
        assert!(below("x", &[1.0, 2.0], &[3.0], true).held);
        assert!(!below("x", &[1.0, 3.0], &[3.0], true).held);
        assert!(below("x", &[1.0, 3.0], &[3.0], false).held);
        assert!(monotone("m", &[3.0, 3.0, 1.0], false).held);
        assert!(!monotone("m", &[3.0, 3.0, 1.0], true).held);
    }

    #[test]
    fn bench_config_json() {
        let json = r#"{
            "corpora": [{"shape": "hexagon"}, {"shape": "icosphere", "level": 1}],
            "sweep": {"methods": ["classic", "angle-restricted"], "limits": [0.5, 0.2], "repetitions": 1}
        }"#;
        let config = BenchConfig::from_json(json).unwrap();
        assert_eq!(config.corpora.len(), 2);
        let sweep = config.sweep.as_ref().unwrap();
        assert_eq!(sweep.angle_thresholds, DEFAULT_ANGLE_THRESHOLDS);
        let out = run_bench(&config).unwrap();
        assert_eq!(out.sweeps.len(), 2);
        assert_eq!(out.sweeps[1].reports.len(), 2 * (1 + 3));

        assert!(BenchConfig::from_json(r#"{"corpora": []}"#).is_err());
        assert!(
            BenchConfig::from_json(r#"{"sweep": {"methods": ["novel"], "limits": [1.0]}}"#)
                .is_err()
        );
        let table = r#"{"comparison": {"corpus": {"shape": "hexagon"}, "limit": 0.3}}"#;
        let out = run_bench(&BenchConfig::from_json(table).unwrap()).unwrap();
        assert_eq!((out.sweeps.len(), out.tables.len()), (0, 1));
        assert!(matches!(
            BenchConfig::from_json("{\n\"corpora\": [}"),
            Err(Error::Parse { line: 2, .. })
        ));
        let config = default_bench_config();
        let text = serde_json::to_string(&config).unwrap();
        assert_eq!(BenchConfig::from_json(&text).unwrap(), config);
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("icosphere(level=2)"), "icosphere_level_2");
        assert_eq!(slug("hexagon(stretch=1.6)"), "hexagon_stretch_1.6");
    }
}
