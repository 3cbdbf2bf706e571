//! `cubkit`: build, verify and export cubature rules, interpolants, Lebesgue
//! constants and node-region data.

mod commands;
mod document;
mod error;
mod functions;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::{CliResult, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "cubkit",
    version,
    about = "Minimal and near-minimal cubature on the square"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a cubature rule and print it as JSON or CSV.
    Rule(RuleArgs),
    /// Interpolate a test function on the near-minimal nodes and sample the
    /// interpolant on a uniform grid.
    Interpolate(InterpolateArgs),
    /// Estimate Lebesgue constants of the interpolation operator.
    Lebesgue(LebesgueArgs),
    /// Export the boundary curves of the node region and classify the nodes.
    Region(RegionArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    NearMinimal,
    Minimal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CaseArg {
    /// Angles from the zeros of `P_m^(α+1,β)`.
    NearMinimal,
    /// Angles from the zeros of `P_m^(α,β)`.
    EvenDegree,
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// -0.5 or 0.5
    #[arg(long, allow_hyphen_values = true, default_value_t = -0.5)]
    pub sigma: f64,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = KindArg::NearMinimal)]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Check exactness on all monomials up to this degree; exit 2 on shortfall.
    #[arg(long)]
    pub verify_degree: Option<usize>,
    /// Points per direction and panel of the verification oracle
    /// (default: $CUBKIT_ORACLE_ORDER or 96).
    #[arg(long)]
    pub oracle_order: Option<usize>,
    /// Record the generation time in the JSON metadata.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long)]
    pub m: usize,
    /// runge2d, cospi or poly:c@a,b;c@a,b;... for Σ c x^a y^b
    #[arg(long, allow_hyphen_values = true)]
    pub function: String,
    /// Points per direction of the uniform output grid.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Also emit the exact value and the error; report the max error on stderr.
    #[arg(long)]
    pub error: bool,
}

#[derive(Debug, Args)]
pub struct LebesgueArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
    pub m_list: Vec<usize>,
    /// Chebyshev-Lobatto points per direction of the search grid (at least 64).
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Append a least-squares growth fit.
    #[arg(long)]
    pub fit: bool,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long)]
    pub m: usize,
    /// Samples per curve.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = CaseArg::NearMinimal)]
    pub case: CaseArg,
}

fn run(cli: &Cli) -> CliResult<u8> {
    let env_order = std::env::var(commands::ORACLE_ORDER_ENV).ok();
    let (out, path) = match &cli.command {
        Command::Rule(a) => (commands::rule(a, env_order.as_deref())?, a.out.clone()),
        Command::Interpolate(a) => (commands::interpolate(a)?, None),
        Command::Lebesgue(a) => (commands::lebesgue(a)?, None),
        Command::Region(a) => (commands::region(a)?, None),
    };
    match path {
        Some(p) => std::fs::write(p, &out.data)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.data.as_bytes())?;
            stdout.flush()?;
        }
    }
    for d in &out.diagnostics {
        eprintln!("{d}");
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cubkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
