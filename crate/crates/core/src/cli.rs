//! Command-line front end. [`run`] parses arguments, dispatches to the library and maps
//! errors to exit codes: 0 success, 1 bad input or configuration, 2 internal invariant
//! violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{default_bench_config, run_bench, write_bench_outputs, BenchConfig};
use crate::corpus::{generate_corpus, CorpusSpec};
use crate::error::{Error, Result};
use crate::io::{read_mesh, reports_to_json, write_mesh_file, write_report_file, MeshFormat};
use crate::mesh::{default_weld_tolerance, weld_vertices, TriangleMesh};
use crate::metrics::build_report;
use crate::subdivide::{
    predict_classic_count, subdivide, Method, MethodKind, SubdivisionConfig,
    DEFAULT_INITIAL_LIMIT_FACTOR,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USER_ERROR: i32 = 1;
pub const EXIT_INTERNAL_ERROR: i32 = 2;

/// Default fold factor when `--method multistage` is given without `--fold-factor`.
pub const DEFAULT_FOLD_FACTOR: f64 = 2.0;

#[derive(Debug, Parser)]
#[command(
    name = "trirefine",
    version,
    about = "Edge-length driven triangle mesh subdivision"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weld, subdivide until no edge exceeds the limit, write the result.
    Subdivide(SubdivideArgs),
    /// Print or write the quality report of an existing mesh.
    Stats(StatsArgs),
    /// Predict classic subdivision's total and leaf triangle counts.
    Predict(LimitArgs),
    /// Run a sweep / comparison configuration over synthetic corpora.
    Bench(BenchArgs),
    /// Write a synthetic corpus mesh.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Classic,
    Novel,
    Multistage,
    AngleRestricted,
}

impl From<MethodArg> for MethodKind {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Classic => MethodKind::Classic,
            MethodArg::Novel => MethodKind::Novel,
            MethodArg::Multistage => MethodKind::Multistage,
            MethodArg::AngleRestricted => MethodKind::AngleRestricted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Stl,
    StlAscii,
    Obj,
}

impl From<FormatArg> for MeshFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Stl => MeshFormat::StlBinary,
            FormatArg::StlAscii => MeshFormat::StlAscii,
            FormatArg::Obj => MeshFormat::Obj,
        }
    }
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Input mesh (.stl binary or ASCII, .obj).
    #[arg(short, long)]
    pub input: PathBuf,
    /// Edge-length limit in model units.
    #[arg(long)]
    pub max_edge: f64,
    /// Read --max-edge as a fraction of the bounding-box diagonal.
    #[arg(long)]
    pub relative: bool,
    /// Vertex welding distance; defaults to 1e-9 of the bounding-box diagonal.
    #[arg(long)]
    pub weld_tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SubdivideArgs {
    #[command(flatten)]
    pub limit: LimitArgs,
    /// Output mesh path.
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "novel")]
    pub method: MethodArg,
    /// First-stage limit for multistage; defaults to 4 x the final limit.
    #[arg(long)]
    pub initial_limit: Option<f64>,
    /// Per-stage limit divisor for multistage; defaults to 2.
    #[arg(long)]
    pub fold_factor: Option<f64>,
    /// Angle threshold in degrees for angle-restricted subdivision.
    #[arg(long)]
    pub angle_threshold: Option<f64>,
    /// Output format; inferred from the output extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Quality report path (.csv for CSV, JSON otherwise).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Record the subdivision time in the report. Off by default so repeated runs
    /// write identical files.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub limit: LimitArgs,
    /// Report path; the JSON report goes to stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// JSON bench configuration; the built-in default sweep runs when omitted.
    #[arg(long)]
    pub sweep: Option<PathBuf>,
    /// Output directory for reports, series and ordering files.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// hexagon, skewed_hexagon, icosphere, cylinder, needle_soup or stretched_panel.
    #[arg(long)]
    pub shape: String,
    /// RNG seed for needle_soup and stretched_panel (default 7).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Icosphere subdivision level (default 2).
    #[arg(long)]
    pub level: Option<u32>,
    /// Output mesh path.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Output format; inferred from the output extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

/// Parses `args` (including the program name) and runs the command, writing
/// diagnostics to `stderr`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{first}");
            return EXIT_USER_ERROR;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let line = e.to_string().replace('\n', " ");
            let _ = writeln!(stderr, "error: {line}");
            if e.is_user_error() {
                EXIT_USER_ERROR
            } else {
                EXIT_INTERNAL_ERROR
            }
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Subdivide(args) => cmd_subdivide(args),
        Command::Stats(args) => cmd_stats(args, stdout),
        Command::Predict(args) => cmd_predict(args, stdout),
        Command::Bench(args) => cmd_bench(args, stdout),
        Command::Generate(args) => cmd_generate(args),
    }
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Io(io) => Error::Input(format!("{}: {io}", path.display())),
        Error::Parse { line, message } => Error::Input(format!(
            "{}: parse error at line {line}: {message}",
            path.display()
        )),
        Error::TruncatedStl { .. } | Error::Input(_) | Error::Structural(_) => {
            Error::Input(format!("{}: {e}", path.display()))
        }
        other => other,
    }
}

fn output_format(path: &Path, flag: Option<FormatArg>) -> MeshFormat {
    flag.map(MeshFormat::from)
        .or_else(|| MeshFormat::from_path(path))
        .unwrap_or(MeshFormat::StlBinary)
}

/// Checks flag combinations and parameter ranges before any file is opened.
fn check_subdivide_flags(args: &SubdivideArgs) -> Result<()> {
    let method = MethodKind::from(args.method);
    let misplaced = [
        (
            args.fold_factor.is_some(),
            "fold-factor",
            MethodKind::Multistage,
        ),
        (
            args.initial_limit.is_some(),
            "initial-limit",
            MethodKind::Multistage,
        ),
        (
            args.angle_threshold.is_some(),
            "angle-threshold",
            MethodKind::AngleRestricted,
        ),
    ];
    for (given, flag, needs) in misplaced {
        if given && method != needs {
            return Err(Error::Config(format!("{flag} requires --method {needs}")));
        }
    }
    if method == MethodKind::AngleRestricted && args.angle_threshold.is_none() {
        return Err(Error::Config(
            "--method angle-restricted requires --angle-threshold".into(),
        ));
    }
    check_limit_flags(&args.limit)?;
    // Range checks that do not depend on the mesh; the final limit is only known after
    // loading when --relative is set.
    let probe = method_config(args, args.limit.max_edge);
    match probe.method {
        Method::Multistage { fold_factor, .. } => {
            SubdivisionConfig::multistage(1.0, 1.0, fold_factor).validate()?
        }
        _ => probe.validate()?,
    }
    if let Some(l0) = args.initial_limit {
        if !(l0 > 0.0 && l0.is_finite()) {
            return Err(Error::Config(format!(
                "--initial-limit must be a positive number, got {l0}"
            )));
        }
    }
    Ok(())
}

fn method_config(args: &SubdivideArgs, limit: f64) -> SubdivisionConfig {
    match MethodKind::from(args.method) {
        MethodKind::Classic => SubdivisionConfig::classic(limit),
        MethodKind::Novel => SubdivisionConfig::novel(limit),
        MethodKind::Multistage => SubdivisionConfig::multistage(
            limit,
            args.initial_limit
                .unwrap_or(limit * DEFAULT_INITIAL_LIMIT_FACTOR),
            args.fold_factor.unwrap_or(DEFAULT_FOLD_FACTOR),
        ),
        MethodKind::AngleRestricted => {
            SubdivisionConfig::angle_restricted(limit, args.angle_threshold.unwrap_or(f64::NAN))
        }
    }
}

fn check_limit_flags(args: &LimitArgs) -> Result<()> {
    if !(args.max_edge > 0.0 && args.max_edge.is_finite()) {
        return Err(Error::Config(format!(
            "--max-edge must be a positive number, got {}",
            args.max_edge
        )));
    }
    if let Some(t) = args.weld_tolerance {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Config(format!(
                "--weld-tolerance must be >= 0, got {t}"
            )));
        }
    }
    Ok(())
}

/// Reads and welds the input, returning the mesh and the absolute limit.
fn load(args: &LimitArgs) -> Result<(TriangleMesh, f64)> {
    let soup = read_mesh(&args.input).map_err(|e| with_path(&args.input, e))?;
    let tol = args
        .weld_tolerance
        .unwrap_or_else(|| default_weld_tolerance(&soup));
    let mesh = weld_vertices(&soup, tol)?.mesh;
    let limit = if args.relative {
        args.max_edge * mesh.bbox_diagonal()
    } else {
        args.max_edge
    };
    Ok((mesh, limit))
}

fn cmd_subdivide(args: SubdivideArgs) -> Result<()> {
    check_subdivide_flags(&args)?;
    let (mesh, limit) = load(&args.limit)?;
    let config = method_config(&args, limit);
    config.validate()?;
    let outcome = subdivide(&mesh, &config)?;
    let longest = outcome.mesh.max_edge_length();
    if longest > limit + 1e-12 * mesh.bbox_diagonal() {
        return Err(Error::Logic(format!(
            "output edge of length {longest} exceeds the limit {limit}"
        )));
    }
    let format = output_format(&args.output, args.format);
    write_mesh_file(&outcome.mesh, &args.output, format).map_err(|e| with_path(&args.output, e))?;
    if let Some(path) = &args.report {
        let elapsed = args.timing.then_some(outcome.elapsed);
        let report = build_report(&outcome.mesh, limit, elapsed, &config.method.label())?
            .with_run_counters(
                outcome.triangles_created_total,
                outcome.stack_high_water as u64,
            );
        write_report_file(&[report], path).map_err(|e| with_path(path, e))?;
    }
    Ok(())
}

fn cmd_stats(args: StatsArgs, stdout: &mut dyn Write) -> Result<()> {
    check_limit_flags(&args.limit)?;
    let (mesh, limit) = load(&args.limit)?;
    let report = build_report(&mesh, limit, None, "input")?;
    match &args.report {
        Some(path) => write_report_file(&[report], path).map_err(|e| with_path(path, e)),
        None => {
            stdout.write_all(reports_to_json(&[report])?.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_predict(args: LimitArgs, stdout: &mut dyn Write) -> Result<()> {
    check_limit_flags(&args)?;
    let (mesh, limit) = load(&args)?;
    let p = predict_classic_count(&mesh, limit)?;
    writeln!(stdout, "N_total {}", p.n_total)?;
    writeln!(stdout, "N_leaves {}", p.n_leaves)?;
    Ok(())
}

fn cmd_bench(args: BenchArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = match &args.sweep {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| with_path(path, e.into()))?;
            BenchConfig::from_json(&text).map_err(|e| with_path(path, e))?
        }
        None => default_bench_config(),
    };
    let output = run_bench(&config)?;
    for sweep in &output.sweeps {
        writeln!(
            stdout,
            "sweep {}: {} cells, {} failed",
            sweep.corpus,
            sweep.reports.len() + sweep.failures.len(),
            sweep.failures.len()
        )?;
    }
    for table in &output.tables {
        let held = table.orderings.iter().filter(|c| c.held).count();
        writeln!(
            stdout,
            "comparison {} at limit {}: {held}/{} orderings held",
            table.corpus,
            table.limit,
            table.orderings.len()
        )?;
    }
    for path in write_bench_outputs(&output, &args.output)? {
        writeln!(stdout, "wrote {}", path.display())?;
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let spec = CorpusSpec::from_shape(&args.shape, args.seed, args.level)?;
    let mesh = generate_corpus(&spec)?;
    let format = output_format(&args.output, args.format);
    write_mesh_file(&mesh, &args.output, format).map_err(|e| with_path(&args.output, e))
}
