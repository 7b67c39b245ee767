//! `qcv`: build quantum character variety algebras and run their check
//! suites from the command line.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails
//! or is only partially decided, and 2 on usage or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Run `$body` with `$p: &Params<F>` and `$e: &impl Embed<F>` for the
/// coefficient field selected by the mode.
macro_rules! with_ground {
    ($mode:expr, |$p:ident, $e:ident| $body:expr) => {
        match $mode.ground() {
            $crate::params::Ground::Exact(params) => {
                let ($p, $e) = (&params, &params);
                $body
            }
            $crate::params::Ground::Symbolic(params, sub) => {
                let ($p, $e) = (&params, &sub);
                $body
            }
        }
    };
}

mod algebra;
mod braided;
mod output;
mod params;
mod reduce;

use output::Outcome;
use params::Mode;

/// Largest truncation degree accepted when `QCV_MAX_DEGREE` is unset.
const DEFAULT_MAX_DEGREE: u32 = 6;

#[derive(Debug)]
pub struct UsageError(pub String);

#[derive(Parser, Debug)]
#[command(
    name = "qcv",
    version,
    about = "Exact checks for quantum character varieties of surfaces"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// `symbolic` or a rational value such as `3/7`.
    #[arg(long, global = true, default_value = "symbolic")]
    q: String,
    /// `generic` or a rational value.
    #[arg(long, global = true, default_value = "generic")]
    t: String,
    /// Also write the JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Print wall time per check on stderr.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the standard R-matrix, or one read from a tensor operator file.
    Rmatrix(RmatrixArgs),
    /// Build the reflection equation algebra and check its graded dimensions.
    Rea(ReaArgs),
    /// Build the moduli algebra of a surface.
    Surface(SurfaceArgs),
    /// Check the counit, boundary and marking moment maps.
    MomentCheck(MomentArgs),
    /// Check braided module axioms for an operator family.
    BraidedCheck(BraidedArgs),
    /// Check a balancing of an operator family.
    BalancedCheck(BalancedArgs),
    /// Truncated quantum Hamiltonian reduction.
    Hamred(HamredArgs),
    /// Compare the mirabolic torus reduction with the spherical DAHA.
    DahaCompare(DahaArgs),
    /// Relative tensor products against the pre-invariants quotient.
    RelativeTensor(RelativeArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmatrixCheck {
    Qybe,
    Hecke,
}

#[derive(Args, Debug)]
pub struct RmatrixArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "qybe,hecke")]
    pub check: Vec<RmatrixCheck>,
    /// Tensor operator JSON to check instead of the standard R-matrix.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReaCheck {
    Flatness,
    Classical,
}

#[derive(Args, Debug)]
pub struct ReaArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub degree: u32,
    #[arg(long, value_delimiter = ',', default_value = "flatness")]
    pub check: Vec<ReaCheck>,
    /// Add a constant term to the first relation (negative control).
    #[arg(long)]
    pub perturb: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceCheck {
    Flatness,
    Moment,
    Classical,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marking {
    None,
    Mirabolic,
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 1)]
    pub genus: usize,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "none")]
    pub marking: Marking,
    /// Surface description file `genus=<g> boundary=<r> markings=[...]`;
    /// overrides `--genus` and `--marking`.
    #[arg(long, value_name = "PATH")]
    pub describe: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    #[arg(long, value_delimiter = ',', default_value = "flatness")]
    pub check: Vec<SurfaceCheck>,
    /// Write the presentation in the text format to this path.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Add a constant term to the first relation (negative control).
    #[arg(long)]
    pub perturb: bool,
}

#[derive(Args, Debug)]
pub struct MomentArgs {
    #[arg(long, default_value_t = 1)]
    pub genus: usize,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "none")]
    pub marking: Marking,
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Add one to the image of the first generator (negative control).
    #[arg(long)]
    pub perturb: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraidedCheckKind {
    Dkm,
    Octagon,
    Annular,
    Relations,
}

#[derive(Args, Debug)]
pub struct BraidedArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Operator family JSON; without it the built-in families are checked.
    #[arg(long, value_name = "PATH", conflicts_with = "module")]
    pub input: Option<PathBuf>,
    /// Module representation JSON, converted to a family first.
    #[arg(long, value_name = "PATH")]
    pub module: Option<PathBuf>,
    /// Integer framing twist: `E` is checked against `θ_V^k`-twisted axioms.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub framing_twist: i32,
    #[arg(long, default_value_t = 3)]
    pub strands: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "dkm,octagon,annular,relations"
    )]
    pub check: Vec<BraidedCheckKind>,
}

#[derive(Args, Debug)]
pub struct BalancedArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Operator family JSON; without it the built-in families are checked.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Balancing JSON for `--input`; defaults to the balancing fixed by `φ_M = 1`.
    #[arg(long, value_name = "PATH", requires = "input")]
    pub balance: Option<PathBuf>,
    /// Perturb one entry of `φ_{M⊗V}` (negative control).
    #[arg(long)]
    pub perturb: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Disc,
    Annulus,
    Torus,
}

#[derive(Args, Debug, Clone)]
pub struct Sampling {
    /// Random rational points used for a generic parameter.
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct HamredArgs {
    #[arg(long, value_enum, default_value = "torus")]
    pub surface: SurfaceKind,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "none")]
    pub marking: Marking,
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Perturb one coefficient of the first ideal generator (negative control).
    #[arg(long)]
    pub perturb: bool,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Args, Debug)]
pub struct DahaArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub degree: u32,
    /// Build the DAHA at the shift parameter `q` itself instead of the
    /// matching `q^2` (negative control).
    #[arg(long)]
    pub unmatched: bool,
    /// Perturb one coefficient of the mirabolic ideal (negative control).
    #[arg(long)]
    pub perturb: bool,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Args, Debug)]
pub struct RelativeArgs {
    #[arg(long, value_enum, default_value = "annulus")]
    pub surface: SurfaceKind,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Double the counit value of the first generator (negative control).
    #[arg(long)]
    pub perturb: bool,
    #[command(flatten)]
    pub sampling: Sampling,
}

/// `QCV_MAX_DEGREE`, or the built-in limit.
fn max_degree() -> Result<u32, UsageError> {
    match std::env::var("QCV_MAX_DEGREE") {
        Ok(s) => s.trim().parse().map_err(|_| {
            UsageError(format!(
                "QCV_MAX_DEGREE must be a nonnegative integer, got `{s}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn run(cli: Cli) -> Result<Outcome, UsageError> {
    let mode = Mode::new(&cli.common.q, &cli.common.t)?;
    let cap = max_degree()?;
    let mut out = Outcome::new(&mode, cap);
    match &cli.command {
        Command::Rmatrix(a) => algebra::rmatrix(a, &mode, &mut out)?,
        Command::Rea(a) => {
            let d = out.cap_degree(a.degree);
            algebra::rea(a, d, &mode, &mut out)?
        }
        Command::Surface(a) => {
            let d = out.cap_degree(a.degree);
            algebra::surface(a, d, &mode, &mut out)?
        }
        Command::MomentCheck(a) => {
            let d = out.cap_degree(a.degree);
            algebra::moment_check(a, d, &mode, &mut out)?
        }
        Command::BraidedCheck(a) => braided::braided_check(a, &mode, &mut out)?,
        Command::BalancedCheck(a) => braided::balanced_check(a, &mode, &mut out)?,
        Command::Hamred(a) => {
            let d = out.cap_degree(a.degree);
            reduce::hamred(a, d, &mode, &mut out)?
        }
        Command::DahaCompare(a) => {
            let d = out.cap_degree(a.degree);
            reduce::daha_compare(a, d, &mode, &mut out)?
        }
        Command::RelativeTensor(a) => {
            let d = out.cap_degree(a.degree);
            reduce::relative_tensor(a, d, &mode, &mut out)?
        }
    }
    Ok(out)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Rmatrix(_) => "rmatrix",
        Command::Rea(_) => "rea",
        Command::Surface(_) => "surface",
        Command::MomentCheck(_) => "moment-check",
        Command::BraidedCheck(_) => "braided-check",
        Command::BalancedCheck(_) => "balanced-check",
        Command::Hamred(_) => "hamred",
        Command::DahaCompare(_) => "daha-compare",
        Command::RelativeTensor(_) => "relative-tensor",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let name = command_name(&cli.command);
    let common = cli.common.clone();
    match run(cli) {
        Ok(out) => match out.finish(name, common.json.as_deref(), common.timing) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("qcv: {e}");
                ExitCode::from(2)
            }
        },
        Err(UsageError(msg)) => {
            eprintln!("qcv {name}: {msg}");
            ExitCode::from(2)
        }
    }
}
