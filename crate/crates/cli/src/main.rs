use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;


/// Shortest-expected-length escape paths for a swimmer lost in a strip or a disk.
///
/// Angles are given in degrees on the command line. JSON output carries
/// every angle both in radians and in degrees.
#[derive(Debug, Parser)]
#[command(name = "lost-at-sea", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// JSON by default; CSV for sweeps, grids and the criteria table.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimize the expected escape length of a strategy family.
    Optimize(OptimizeArgs),
    /// Expected escape length of one strategy, by closed form or quadrature.
    Evaluate(EvaluateArgs),
    /// Monte Carlo mean escape length.
    Simulate(SimulateArgs),
    /// Monte Carlo median escape length, optionally swept over r.
    Median(MedianArgs),
    /// Fit a 2-segment strategy to Zalgaller's path and evaluate it.
    Zalgaller,
    /// Lower bound check for a curve in the disk.
    ///
    /// A curve file lists knots of the turning function φ(s), one `s phi` pair
    /// per line (radians, commas allowed), linearly interpolated. The first
    /// knot must be `0 0`. An optional `phi_max v` line sets the bound on |φ|,
    /// which must stay below π/2. `#` starts a comment.
    Gevirtz(GevirtzArgs),
    /// Write an SVG figure of sample escape paths.
    Plot(PlotArgs),
    /// Recompute every reference number and print PASS/FAIL per criterion.
    PaperCheck(PaperCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Strip2,
    Strip3,
    Disk2,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// Number of seeded starting points (strip3).
    #[arg(long, default_value_t = 32)]
    pub multistart: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Evaluate the disk objective on a grid instead of minimizing.
    #[arg(long)]
    pub grid: bool,
    /// Grid points per axis.
    #[arg(long, default_value_t = 9)]
    pub grid_size: usize,
    /// Simplex size tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_evals: Option<usize>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct StrategyParams {
    /// Length of the first segment.
    #[arg(long)]
    pub r: Option<f64>,
    /// First turn angle, degrees.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Length of the second segment (3-segment strategies).
    #[arg(long)]
    pub s: Option<f64>,
    /// Second turn angle, degrees.
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Quad,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[command(flatten)]
    pub params: StrategyParams,
    /// strip2 only: closed form or quadrature.
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Strip,
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyKind {
    Straight,
    Two,
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sampling {
    /// Uniform over the disk's area.
    Area,
    /// Start radius uniform on [0, 1].
    Radius,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(value_enum)]
    pub scenario: ScenarioArg,
    #[arg(long, value_enum, default_value_t = StrategyKind::Two)]
    pub strategy: StrategyKind,
    #[command(flatten)]
    pub params: StrategyParams,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// How disk starts are drawn.
    #[arg(long, value_enum, default_value_t = Sampling::Area)]
    pub sampling: Sampling,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args)]
pub struct MedianArgs {
    #[command(flatten)]
    pub mc: McArgs,
    /// Comma-separated first-segment lengths; one row per value.
    #[arg(long, value_delimiter = ',')]
    pub sweep_r: Vec<f64>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CurveSource {
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Constant curvature k, turning until |φ| reaches --phi-max.
    #[arg(long)]
    pub curvature: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GevirtzArgs {
    #[command(flatten)]
    pub source: CurveSource,
    /// Turning bound for --curvature, degrees.
    #[arg(long, default_value_t = 60.0)]
    pub phi_max: f64,
    /// Also estimate A(γ) by sampling this many points of the disk.
    #[arg(long)]
    pub mc: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// 2: strip realizations, 4: Zalgaller's path, 6: disk realizations.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["2", "4", "6"]))]
    pub figure: String,
}

#[derive(Debug, Args)]
pub struct PaperCheckArgs {
    /// Run only these criteria (comma-separated ids).
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..=10))]
    pub only: Vec<u32>,
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("ESCAPE_OPTIM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("ESCAPE_OPTIM_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let result = match &cli.command {
        Command::Optimize(a) => commands::optimize(a, cli.format),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Simulate(a) => commands::simulate(&a.mc),
        Command::Median(a) => commands::median(a, cli.format),
        Command::Zalgaller => commands::zalgaller(),
        Command::Gevirtz(a) => commands::gevirtz(a),
        Command::Plot(a) => commands::plot(a),
        Command::PaperCheck(a) => commands::paper_check(a, cli.format),
    };
    match result {
        Ok(outcome) => match commands::emit(&outcome, cli.out.as_deref()) {
            Ok(()) => ExitCode::from(outcome.code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
