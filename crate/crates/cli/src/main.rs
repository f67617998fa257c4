//! `wavepack` command-line tool.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "wavepack", version, about = "Wave-packet overlaps, spreading, cross sections and coherence lengths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit CSV (default).
    #[arg(long, global = true, conflicts_with = "table")]
    pub csv: bool,
    /// Emit an aligned human-readable table.
    #[arg(long, global = true)]
    pub table: bool,
    /// Print energies in MeV and lengths in fm instead of eV and m.
    #[arg(long, global = true)]
    pub natural: bool,
    /// Print a gnuplot command as a leading comment line.
    #[arg(long = "gnuplot-hint", global = true)]
    pub gnuplot_hint: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Overlap amplitude of two Gaussian packets.
    Overlap(OverlapArgs),
    /// Longitudinal and transverse widths over a log-spaced time sweep.
    Spread(SpreadArgs),
    /// Cross section of one process.
    Xsec(XsecArgs),
    /// Mean free path and the packet size it implies.
    Mfp(MfpArgs),
    /// Convergence of a window-smeared integral to the delta-function limit.
    VerifyDelta(VerifyDeltaArgs),
    /// Non-orthogonality term of continuum states on a momentum grid.
    Nonortho(NonorthoArgs),
    /// Evaluate scenario documents.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Evaluate the built-in reference table against its anchors.
    Ledger,
}

#[derive(Subcommand, Debug)]
pub enum ScenarioAction {
    /// Evaluate a scenario file and print one CSV row per anchor.
    Run { file: PathBuf },
}

#[derive(Args, Debug)]
pub struct OverlapArgs {
    /// Momentum of packet 1, e.g. `0,0,1MeV`.
    #[arg(long, allow_hyphen_values = true)]
    pub p1: String,
    /// Width σ of packet 1 (area; a bare number is m²).
    #[arg(long)]
    pub sigma1: String,
    /// Position of packet 1 at its reference time.
    #[arg(long, default_value = "0,0,0m", allow_hyphen_values = true)]
    pub x1: String,
    /// Reference time of packet 1.
    #[arg(long, default_value = "0s", allow_hyphen_values = true)]
    pub t1: String,
    /// Mass of packet 1.
    #[arg(long, default_value = "0eV")]
    pub m1: String,
    /// Packet 2 parameters; each defaults to the packet 1 value.
    #[arg(long, allow_hyphen_values = true)]
    pub p2: Option<String>,
    #[arg(long)]
    pub sigma2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t2: Option<String>,
    #[arg(long)]
    pub m2: Option<String>,
    /// Energy-momentum relation; defaults to massless for m = 0 and relativistic otherwise.
    #[arg(long, value_enum)]
    pub dispersion: Option<DispersionArg>,
    /// Evaluation time.
    #[arg(long, default_value = "0s", allow_hyphen_values = true)]
    pub t: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionArg {
    Relativistic,
    Nonrelativistic,
    Massless,
}

#[derive(Args, Debug)]
pub struct SpreadArgs {
    #[arg(long)]
    pub mass: String,
    /// Initial width σ (area; a bare number is m²).
    #[arg(long)]
    pub sigma: String,
    /// Momentum magnitude.
    #[arg(long)]
    pub p: String,
    /// Last time of the sweep.
    #[arg(long)]
    pub t: String,
    /// Number of decades covered by the sweep.
    #[arg(long, default_value_t = 6)]
    pub decades: u32,
    /// Number of time points.
    #[arg(long, default_value_t = 7)]
    pub points: usize,
    #[arg(long, value_enum)]
    pub dispersion: Option<DispersionArg>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessArg {
    Rutherford,
    RutherfordThermal,
    Thomson,
    Rayleigh,
    Compton,
    Photoelectric,
    Strong,
}

#[derive(Args, Debug)]
pub struct XsecArgs {
    #[arg(value_enum)]
    pub process: ProcessArg,
    /// Kinetic energy (rutherford) or photon energy (compton, photoelectric).
    #[arg(long)]
    pub energy: Option<String>,
    #[arg(long)]
    pub temperature: Option<String>,
    #[arg(long = "log-lambda", default_value_t = 10.0)]
    pub log_lambda: f64,
    /// Projectile-target charge product.
    #[arg(long, default_value_t = 1.0)]
    pub charge: f64,
    /// Kinetic-energy convention for the thermal Rutherford cross section.
    #[arg(long, value_enum, default_value = "three-kt")]
    pub convention: ConventionArg,
    /// Use the (4π/3)r_e² Thomson prefactor.
    #[arg(long)]
    pub half: bool,
    /// Polarizability volume (rayleigh), e.g. `0.667A3`.
    #[arg(long)]
    pub polarizability: Option<String>,
    #[arg(long)]
    pub wavelength: Option<String>,
    /// Scattering angle; gives dσ/dΩ for compton.
    #[arg(long)]
    pub angle: Option<String>,
    /// Atomic number (photoelectric).
    #[arg(long)]
    pub z: Option<f64>,
    /// Photon energy in electron rest-energy units (photoelectric).
    #[arg(long)]
    pub k: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConventionArg {
    ThreeKt,
    Kt,
}

#[derive(Args, Debug)]
pub struct MfpArgs {
    /// Cross section (area; a bare number is m²).
    #[arg(long, requires = "density")]
    pub sigma: Option<String>,
    /// Number density, e.g. `4e17m-3`.
    #[arg(long)]
    pub density: Option<String>,
    /// Energy for an energy-loss length.
    #[arg(long, requires = "dedx", conflicts_with = "sigma")]
    pub energy: Option<String>,
    /// Energy loss per length, e.g. `2GeV/m`.
    #[arg(long)]
    pub dedx: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowArg {
    OneSided,
    Symmetric,
    Offset,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFnArg {
    /// exp(−(k−k₁)²/2w²).
    Gaussian,
    /// exp(−|k−k₁|/w); converges algebraically.
    Cusp,
}

/// Dimensionless units with ħ = 1 for the one-dimensional continuum commands.
#[derive(Args, Debug)]
pub struct VerifyDeltaArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub k1: f64,
    /// Width w of the test function.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, value_enum, default_value = "one-sided")]
    pub window: WindowArg,
    /// Window start for `--window offset`.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub offset: f64,
    #[arg(long = "test-fn", value_enum, default_value = "gaussian")]
    pub test_fn: TestFnArg,
    /// Smallest and largest Λ·w of the sweep.
    #[arg(long, default_value_t = 1e2)]
    pub from: f64,
    #[arg(long, default_value_t = 1e4)]
    pub to: f64,
    #[arg(long, default_value_t = 5)]
    pub points: usize,
    /// Allowed relative residual at the last point.
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialArg {
    Delta,
    Barrier,
}

#[derive(Args, Debug)]
pub struct NonorthoArgs {
    #[arg(long, value_enum, default_value = "delta")]
    pub potential: PotentialArg,
    /// Delta-potential strength g.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub g: f64,
    /// Barrier height and half-width.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub height: f64,
    #[arg(long = "half-width", default_value_t = 1.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long = "k-min", default_value_t = 0.5)]
    pub k_min: f64,
    #[arg(long = "k-max", default_value_t = 2.0)]
    pub k_max: f64,
    #[arg(long, default_value_t = 4)]
    pub grid: usize,
    /// Compare off-diagonal entries with a windowed quadrature of the states.
    #[arg(long)]
    pub check: bool,
    /// Window length for `--check`.
    #[arg(long, default_value_t = 200.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
}

fn emit(global: &Global, outcome: &Outcome) {
    if global.gnuplot_hint {
        if let Some(h) = &outcome.hint {
            println!("# gnuplot: {h}");
        }
    }
    for note in &outcome.notes {
        eprintln!("note: {note}");
    }
    if global.table {
        print!("{}", outcome.table.aligned());
    } else {
        print!("{}", outcome.table.csv());
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            emit(&cli.global, &outcome);
            if outcome.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in &outcome.failures {
                    eprintln!("FAIL {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
