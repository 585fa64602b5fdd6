//! `cuspquad`: conformal moduli of doubly symmetric circular quadrilaterals
//! with cusps.
//!
//! Exit codes: 0 success, 1 solver failure or failed check, 2 invalid input.

mod angle;
mod commands;
mod config;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cuspquad",
    version,
    about = "Conformal moduli of circular quadrilaterals with cusps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Modulus of one quadrilateral given by (t, s, r1, r2) or (alpha, j).
    Modulus(ModulusArgs),
    /// Recompute the 25-row (alpha, j) table and compare with the stored values.
    Table(TableArgs),
    /// Check the solver and the exact fixtures against their known values.
    Benchmark(BenchmarkArgs),
    /// Exact modulus of four vertices of the hexagon or of P_n.
    Ngon(NgonArgs),
    /// Boundary samples f(e^{i theta}) as CSV.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Centre of the right circle on the real axis.
    #[arg(long)]
    t: Option<f64>,
    /// Centre of the top circle on the imaginary axis.
    #[arg(long)]
    s: Option<f64>,
    /// Radius of the right circle.
    #[arg(long)]
    r1: Option<f64>,
    /// Radius of the top circle.
    #[arg(long)]
    r2: Option<f64>,
    /// Cusp angle of the (alpha, j) family: radians or a literal like pi/5.
    #[arg(long, value_parser = angle::parse_angle, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Member 1..=5 of the (alpha, j) family.
    #[arg(long)]
    j: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Flat key = value file with solver settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Relative and absolute ODE tolerance of the standard stage.
    #[arg(long)]
    tol_ode: Option<f64>,
    #[arg(long)]
    iters_beta: Option<u32>,
    #[arg(long)]
    iters_gamma: Option<u32>,
    #[arg(long)]
    iters_bracket: Option<u32>,
    /// Half-width of the refinement box around the standard solution.
    #[arg(long)]
    refine_eps: Option<f64>,
}

#[derive(Debug, Args)]
struct ModulusArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Follow the standard solve by the refinement stage.
    #[arg(long)]
    refine: bool,
    /// Report the conjugate quadrilateral (vertices shifted by one).
    #[arg(long)]
    conjugate: bool,
    #[arg(long)]
    json: bool,
    /// Include wall-clock time in the output.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Markdown,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    refine: bool,
    /// Solve rows concurrently; output order and values are unchanged.
    #[arg(long)]
    parallel: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    #[command(flatten)]
    solver: SolverArgs,
    /// Also check the refined solve of the exact quadrilateral.
    #[arg(long)]
    refine: bool,
    /// Print the fixture set as JSON instead of running the checks.
    #[arg(long)]
    fixtures_json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pn,
    Hexagon,
}

#[derive(Debug, Args)]
struct NgonArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Number of vertices of P_n (ignored for the hexagon).
    #[arg(long)]
    n: Option<usize>,
    /// Four vertices in cyclic order: letters A..F or indices 0..n-1.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    vertices: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Use these parameters instead of solving for a quadrilateral.
    #[arg(long, value_parser = angle::parse_angle, requires = "gamma")]
    beta: Option<f64>,
    #[arg(long, requires = "beta", allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Number of equally spaced angles in [0, 2 pi) before exclusions.
    #[arg(long, default_value_t = 360)]
    samples: usize,
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Solver(String),
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Solver(_) | CliError::Check(_) => 1,
        }
    }
}

impl From<cuspquad::Error> for CliError {
    fn from(e: cuspquad::Error) -> Self {
        if e.is_invalid_input() {
            CliError::Input(e.to_string())
        } else {
            CliError::Solver(e.to_string())
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
            CliError::Check(m) => write!(f, "{m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Modulus(a) => {
            commands::modulus(&a.spec, &a.solver, a.refine, a.conjugate, a.json, a.timing)
        }
        Command::Table(a) => commands::table(&a.solver, a.refine, a.parallel, a.format, a.timing),
        Command::Benchmark(a) => commands::benchmark(&a.solver, a.refine, a.fixtures_json),
        Command::Ngon(a) => commands::ngon(a.family, a.n, &a.vertices, a.json),
        Command::Render(a) => commands::render(&a.spec, &a.solver, a.beta.zip(a.gamma), a.samples),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
