mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

/// Harmonic oscillator on the sphere, plane and hyperbolic plane: closed-form
/// spectra, wavefunctions, oracle comparisons and verification suites.
#[derive(Debug, Parser)]
#[command(name = "curvaspec", version, propagate_version = true)]
pub struct Cli {
    /// key = value configuration file (default: $CURVASPEC_CONFIG).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output format [default: csv].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Energy formula under test.
    #[arg(long, global = true, value_enum, hide = true)]
    pub energy_branch: Option<BranchArg>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Corrected,
    Printed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form energy levels.
    Spectrum(SpectrumArgs),
    /// Radial samples of one eigenfunction.
    Wavefunction(WavefunctionArgs),
    /// Run the property suites.
    Verify(VerifyArgs),
    /// Energy of one level across a range of curvatures.
    Sweep(SweepArgs),
    /// Closed form against the finite-difference radial eigensolver.
    Oracle(OracleArgs),
    /// Integrate a classical orbit and report its invariants.
    Trajectory(TrajectoryArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Number of distinct energies (n = 0 .. levels-1) [default: 5].
    #[arg(long)]
    pub levels: Option<u32>,
    /// Keep only states with |m| <= M.
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Physical scales HBAR,MASS,OMEGA; --kappa is then a physical curvature
    /// and an E_physical column is added.
    #[arg(long, value_name = "H,MASS,OMEGA")]
    pub physical: Option<String>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct WavefunctionArgs {
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub nr: u32,
    #[arg(long, default_value_t = 0)]
    pub m: i32,
    /// Largest sampled radius [default: 4, or 99% of the disk radius].
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Number of intervals; S+1 samples are written [default: 100].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Scale to unit norm under the invariant measure.
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// all, geometry, dynamics, symmetry, quantization or spectrum.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long)]
    pub kappa_min: f64,
    #[arg(long)]
    pub kappa_max: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: u32,
    #[arg(long, default_value_t = 0)]
    pub nr: u32,
    #[arg(long, default_value_t = 0)]
    pub m: i32,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct OracleArgs {
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub beta: u32,
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    /// Base grid size; the default grid is searched for a converged domain.
    #[arg(long)]
    pub points: Option<usize>,
    /// Base grid outer geodesic radius (used with --points).
    #[arg(long)]
    pub rho_max: Option<f64>,
    /// Relative error above which the command exits with status 1 [default: 1e-4].
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TrajectoryArgs {
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0)]
    pub pr: f64,
    #[arg(long, default_value_t = 0.5)]
    pub pphi: f64,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Write every k-th step.
    #[arg(long, default_value_t = 100)]
    pub every: usize,
}

/// Exit status for an error: 2 for bad input, 3 for numerical failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<curvaspec::Error>() {
            return if e.is_input_error() { 2 } else { 3 };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let status = match commands::run(&cli, &mut out) {
        Ok(code) => code,
        Err(err) => {
            let _ = out.flush();
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    };
    let _ = out.flush();
    ExitCode::from(status)
}
