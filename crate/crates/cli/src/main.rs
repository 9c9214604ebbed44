//! `zdepth`: zonoid and L_q-norm zonoid depths from the command line.

mod svg;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zonoid_depth::data::write_points;
use zonoid_depth::{
    contour_levels, generate, in_convex_hull, linspace_levels, load_csv, lq_depth, mahalanobis_depth,
    read_points, zonoid_depth, ContourConfig, DataCloud, DepthError, DepthOrder, Matrix, Scenario,
    ScenarioSpec,
};

#[derive(Parser)]
#[command(name = "zdepth", version, about = "Zonoid, Mahalanobis and L_q-norm zonoid depths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of each query point; CSV on standard output.
    Depth(DepthArgs),
    /// Trace depth contours of a planar cloud to SVG and/or CSV.
    Contour(ContourArgs),
    /// Generate a seeded synthetic cloud as CSV.
    Scenario(ScenarioArgs),
    /// Convex hull membership of each query point.
    Hull(HullArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QMode {
    /// L_q-norm zonoid depth of order --q.
    Lq,
    /// Mahalanobis depth.
    Mahalanobis,
    /// Classical zonoid depth.
    Zonoid,
}

#[derive(Args)]
struct DataArgs {
    /// Data cloud, one observation per row.
    #[arg(long)]
    data: PathBuf,
    /// Take natural logarithms of all data and query values.
    #[arg(long)]
    log: bool,
}

#[derive(Args)]
struct DepthArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Query points, same column count as the data.
    #[arg(long)]
    points: PathBuf,
    /// Order q >= 1, or "inf".
    #[arg(long, value_parser = parse_order)]
    q: Option<DepthOrder>,
    #[arg(long, value_enum, default_value = "lq")]
    q_mode: QMode,
}

#[derive(Args)]
struct ContourArgs {
    /// Data cloud with two columns.
    #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
    data: Option<PathBuf>,
    #[arg(long, requires = "data")]
    log: bool,
    /// Generate the cloud instead of reading it.
    #[arg(long, value_parser = parse_scenario)]
    scenario: Option<Scenario>,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Order q >= 1, or "inf".
    #[arg(long, value_parser = parse_order)]
    q: DepthOrder,
    /// Comma-separated depth levels, strictly increasing in (0, 1].
    #[arg(long, value_delimiter = ',', conflicts_with = "levels_from")]
    levels: Option<Vec<f64>>,
    /// Ten equally spaced levels from this value to 1.
    #[arg(long)]
    levels_from: Option<f64>,
    #[arg(long, default_value_t = 72)]
    rays: usize,
    /// SVG output file; standard output when neither --out nor --csv is given.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Contour vertices as CSV (level,vertex,x,y).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Canvas width and height in pixels.
    #[arg(long, default_value_t = 640)]
    size: u32,
    #[arg(long)]
    no_hull: bool,
    #[arg(long)]
    no_mean: bool,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long, value_parser = parse_scenario)]
    scenario: Scenario,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HullArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    points: PathBuf,
}

fn parse_order(s: &str) -> Result<DepthOrder, String> {
    s.parse().map_err(|e: DepthError| e.to_string())
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: DepthError| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Depth(DepthError),
}

impl From<DepthError> for Failure {
    fn from(e: DepthError) -> Self {
        Failure::Depth(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Depth(DepthError::Io(e))
    }
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_cloud(args: &DataArgs) -> Result<DataCloud, Failure> {
    Ok(load_csv(open(&args.data)?, args.log)?)
}

/// Query points as given and as used (log-transformed with --log).
fn load_queries(path: &Path, cloud: &DataCloud, log: bool) -> Result<(Matrix, Matrix), Failure> {
    let raw = read_points(open(path)?, false)?;
    let used = if log { read_points(open(path)?, true)? } else { raw.clone() };
    if raw.rows() > 0 && raw.cols() != cloud.dim() {
        return Err(Failure::Usage(format!(
            "{}: query points have {} columns, data has {}",
            path.display(),
            raw.cols(),
            cloud.dim()
        )));
    }
    Ok((raw, used))
}

fn header(d: usize, tail: &str) -> String {
    let cols: Vec<String> = (1..=d).map(|k| format!("x{k}")).collect();
    format!("{},{tail}", cols.join(","))
}

fn coords(row: &[f64]) -> String {
    row.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn at_row(index: usize, e: DepthError) -> DepthError {
    DepthError::BatchPoint {
        index,
        source: Box::new(e),
    }
}

fn cmd_depth(args: &DepthArgs) -> Result<(), Failure> {
    let cloud = load_cloud(&args.data)?;
    let (raw, used) = load_queries(&args.points, &cloud, args.data.log)?;
    let order = match (args.q_mode, args.q) {
        (QMode::Lq, None) => return Err(Failure::Usage("--q is required with --q-mode lq".into())),
        (_, q) => q,
    };
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "{}", header(cloud.dim(), "depth,s_q"))?;
    for i in 0..used.rows() {
        let x = used.row(i);
        let result = match (args.q_mode, order) {
            (QMode::Lq, Some(q)) => lq_depth(&cloud, x, q),
            (QMode::Mahalanobis, _) => mahalanobis_depth(&cloud, x),
            _ => zonoid_depth(&cloud, x),
        }
        .map_err(|e| at_row(i, e))?;
        let s = result.discrepancy.map(|s| s.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{s}", coords(raw.row(i)), result.depth)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_hull(args: &HullArgs) -> Result<(), Failure> {
    let cloud = load_cloud(&args.data)?;
    let (raw, used) = load_queries(&args.points, &cloud, args.data.log)?;
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "{}", header(cloud.dim(), "inside"))?;
    for i in 0..used.rows() {
        let inside = in_convex_hull(&cloud, used.row(i)).map_err(|e| at_row(i, e))?;
        writeln!(out, "{},{inside}", coords(raw.row(i)))?;
    }
    out.flush()?;
    Ok(())
}

fn contour_level_set(args: &ContourArgs) -> Result<Vec<f64>, Failure> {
    let levels = match (&args.levels, args.levels_from) {
        (Some(l), _) => l.clone(),
        (None, Some(start)) => linspace_levels(start, 10),
        (None, None) => linspace_levels(0.25, 10),
    };
    if levels.is_empty() {
        return Err(Failure::Usage("at least one level is required".into()));
    }
    if let Some(bad) = levels.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
        return Err(Failure::Depth(DepthError::InvalidLevel(*bad)));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::Usage(format!("levels must be strictly increasing: {levels:?}")));
    }
    Ok(levels)
}

fn cmd_contour(args: &ContourArgs) -> Result<(), Failure> {
    let levels = contour_level_set(args)?;
    let cloud = match (&args.data, args.scenario) {
        (Some(path), _) => load_csv(open(path)?, args.log)?,
        (None, Some(kind)) => generate(ScenarioSpec {
            kind,
            n: args.n,
            seed: args.seed,
        })?,
        (None, None) => return Err(Failure::Usage("one of --data or --scenario is required".into())),
    };
    if cloud.dim() != 2 {
        return Err(Failure::Usage(format!("contours need two columns, data has {}", cloud.dim())));
    }
    let config = ContourConfig {
        rays: args.rays,
        ..ContourConfig::default()
    };
    let contours = contour_levels(&cloud, args.q, &levels, &config)?;

    if let Some(path) = &args.csv {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "level,vertex,x,y")?;
        for c in &contours {
            for (k, v) in c.vertices.iter().enumerate() {
                writeln!(out, "{},{k},{},{}", c.level, v[0], v[1])?;
            }
        }
        out.flush()?;
    }
    if args.out.is_some() || args.csv.is_none() {
        let points: Vec<[f64; 2]> = (0..cloud.n()).map(|i| [cloud.point(i)[0], cloud.point(i)[1]]).collect();
        let figure = svg::Figure {
            points: &points,
            mean: [cloud.mean()[0], cloud.mean()[1]],
            contours: &contours,
            size: args.size,
            show_hull: !args.no_hull,
            show_mean: !args.no_mean,
        };
        let text = svg::render(&figure);
        match &args.out {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
    }
    Ok(())
}

fn cmd_scenario(args: &ScenarioArgs) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let points = zonoid_depth::generate_points(ScenarioSpec {
        kind: args.scenario,
        n: args.n,
        seed: args.seed,
    });
    match &args.out {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            write_points(&mut out, &points)?;
            out.flush()?;
        }
        None => write_points(io::stdout().lock(), &points)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Depth(a) => cmd_depth(a),
        Command::Contour(a) => cmd_contour(a),
        Command::Scenario(a) => cmd_scenario(a),
        Command::Hull(a) => cmd_hull(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("zdepth: {msg}"),
                Failure::Depth(e) => eprintln!("zdepth: {e}"),
            }
            ExitCode::from(exit_code(&failure))
        }
    }
}

/// 2 for bad input, 3 when a solver gives up.
fn exit_code(failure: &Failure) -> u8 {
    match failure {
        Failure::Depth(e) if e.is_solver_failure() => 3,
        _ => 2,
    }
}
