//! `bscroll`: meshes, singularity reports and verification runs for CMC
//! B-scrolls in L³ and their dual surfaces in Nil₃.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bscroll",
    version,
    about = "B-scrolls in L3 and timelike minimal surfaces in Nil3"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write OBJ meshes of the B-scroll and/or its Nil₃ dual.
    Surface(SurfaceArgs),
    /// Locate and classify singular points; JSON report plus CSV curve.
    Singular(SingularArgs),
    /// Run the invariant suite; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Sample null frames from a generator or from prescribed curvatures.
    Frame(FrameArgs),
    /// Lorentz-transformed family: invariance report or NotCE transform.
    Family(FamilyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GeneratorArgs {
    /// Generator h(s)
    #[arg(long = "h", allow_hyphen_values = true)]
    pub h: String,
    /// Mean curvature H (nonzero)
    #[arg(long = "H", default_value_t = 1.0, allow_negative_numbers = true)]
    pub mean_curvature: f64,
    #[arg(long, value_parser = parse_range, default_value = "-1:1", allow_hyphen_values = true)]
    pub s_range: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    L3,
    Nil3,
    Both,
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub gen: GeneratorArgs,
    #[arg(long, value_parser = parse_range, default_value = "-2:2", allow_hyphen_values = true)]
    pub t_range: (f64, f64),
    /// Grid size NSxNT
    #[arg(long, value_parser = parse_grid, default_value = "41x21")]
    pub grid: (usize, usize),
    #[arg(long, value_enum, default_value_t = Target::Both)]
    pub target: Target,
    /// Output prefix; files are PREFIX_l3.obj and PREFIX_nil3.obj
    #[arg(long, default_value = "bscroll")]
    pub out: PathBuf,
    /// Where to write the JSON summary (stdout if absent)
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SingularArgs {
    #[command(flatten)]
    pub gen: GeneratorArgs,
    #[arg(long, default_value_t = bscroll_core::singularity::TOL_ROOT)]
    pub tol_root: f64,
    /// Number of scan intervals
    #[arg(long, default_value_t = 400)]
    pub scan_grid: usize,
    /// Output prefix for the curve CSV (PREFIX_curve.csv)
    #[arg(long, default_value = "bscroll")]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub gen: GeneratorArgs,
    #[arg(long, value_parser = parse_range, default_value = "-2:2", allow_hyphen_values = true)]
    pub t_range: (f64, f64),
    /// Sample grid NSxNT
    #[arg(long, value_parser = parse_grid, default_value = "21x9")]
    pub grid: (usize, usize),
    /// Step for the d'Alembertian check
    #[arg(long, default_value_t = 1e-3)]
    pub fd_step: f64,
    /// Tolerance of the finite-difference cross-checks
    #[arg(long, default_value_t = 1e-6)]
    pub fd_tol: f64,
    #[arg(long, default_value_t = bscroll_core::singularity::TOL_ROOT)]
    pub tol_root: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FrameArgs {
    #[arg(long = "h", allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long = "H", default_value_t = 1.0, allow_negative_numbers = true)]
    pub mean_curvature: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub kappa1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa2: Option<String>,
    /// Initial A, B, C as nine comma-separated numbers
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub init_frame: Option<Vec<f64>>,
    /// Parameter of the initial frame
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[arg(long, value_parser = parse_range, default_value = "-1:1", allow_hyphen_values = true)]
    pub s_range: (f64, f64),
    #[arg(long, default_value_t = 11)]
    pub samples: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[command(flatten)]
    pub gen: GeneratorArgs,
    /// Boost rapidity in the (e1, e2) plane
    #[arg(long, allow_negative_numbers = true)]
    pub boost: Option<f64>,
    /// Rotation angle in the (e2, e3) plane
    #[arg(long, allow_negative_numbers = true)]
    pub rot: Option<f64>,
    #[arg(long)]
    pub find_notce: bool,
    /// Parameter for --find-notce
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, default_value_t = bscroll_core::singularity::TOL_ROOT)]
    pub tol_root: f64,
    #[arg(long, default_value_t = 400)]
    pub scan_grid: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{text}`"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound `{lo}`: {e}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound `{hi}`: {e}"))?;
    if !(lo < hi) {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (ns, nt) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NSxNT, got `{text}`"))?;
    let ns: usize = ns.trim().parse().map_err(|e| format!("bad NS `{ns}`: {e}"))?;
    let nt: usize = nt.trim().parse().map_err(|e| format!("bad NT `{nt}`: {e}"))?;
    if ns < 2 || nt < 2 {
        return Err(format!("grid must be at least 2x2, got {ns}x{nt}"));
    }
    Ok((ns, nt))
}

/// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 numeric failure.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<bscroll_core::Error>() {
        Some(e) if !e.is_input_error() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Surface(a) => commands::surface(&a),
        Command::Singular(a) => commands::singular(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Frame(a) => commands::frame(&a),
        Command::Family(a) => commands::family(&a),
    };
    match result {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
