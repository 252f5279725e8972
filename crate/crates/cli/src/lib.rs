//! `sqzstat`: photon-number statistics of squeezed coherent photons in
//! thermal states.
//!
//! Exit codes: 0 on success, 1 when a verification fails (tolerance or
//! oracle non-convergence), 2 for usage and domain errors.

mod commands;
pub mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use squeezed_thermal::{CoherentAmplitude, DimensionlessTemperature, ModeParameters, SqueezeParameter, StateKind};

pub use commands::{verification_grid, SweepParameter, SweepSpec};
use render::OutputFormat;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sqzstat",
    version,
    about = "Mean and variance of squeezed coherent photons in thermal states"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form mean and variance at one parameter point.
    #[command(allow_negative_numbers = true)]
    Stats {
        #[command(flatten)]
        mode: ModeArgs,
        /// Which state the photon number is counted in.
        #[arg(long, value_enum, default_value = "squeezed-in-thermal")]
        state: StateArg,
        /// Output format.
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Compare closed forms against the truncated Fock-space oracle.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[command(flatten)]
        mode: ModeArgs,
        /// Run the built-in 108-point grid instead of a single point.
        #[arg(long, conflicts_with_all = ["x", "temp_kelvin", "omega_rad_s"])]
        grid: bool,
        /// Relative tolerance for oracle convergence and agreement.
        #[arg(long, default_value_t = 1e-6)]
        rel_tol: f64,
        /// Largest Fock-space truncation tried by the oracle.
        #[arg(long, default_value_t = 512)]
        fock_dim_max: usize,
        /// Output format.
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Spectral functions of the integral representation.
    #[command(allow_negative_numbers = true)]
    Spectral {
        #[command(flatten)]
        mode: ModeArgs,
        /// Output format.
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Evaluate a linear sweep over one parameter.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        mode: ModeArgs,
        /// Parameter to sweep.
        #[arg(long, value_enum)]
        param: SweepParameter,
        /// First swept value.
        #[arg(long)]
        start: f64,
        /// Last swept value.
        #[arg(long)]
        stop: f64,
        /// Number of evenly spaced values, endpoints included.
        #[arg(long)]
        steps: usize,
        /// Which state the photon number is counted in.
        #[arg(long, value_enum, default_value = "squeezed-in-thermal")]
        state: StateArg,
        /// Also run the Fock-space oracle at every point.
        #[arg(long)]
        oracle: bool,
        /// Relative tolerance for oracle convergence and agreement.
        #[arg(long, default_value_t = 1e-6)]
        rel_tol: f64,
        /// Largest Fock-space truncation tried by the oracle.
        #[arg(long, default_value_t = 512)]
        fock_dim_max: usize,
        /// Output format.
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
}

/// Mode parameters. Angles are in radians.
#[derive(Debug, Clone, Args)]
struct ModeArgs {
    /// Squeeze magnitude r.
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    /// Squeeze phase φ.
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Coherent amplitude magnitude |α|.
    #[arg(long, default_value_t = 0.0)]
    alpha_mag: f64,
    /// Coherent amplitude phase θ.
    #[arg(long, default_value_t = 0.0)]
    alpha_phase: f64,
    /// Dimensionless inverse temperature x = ħω/k_B T.
    #[arg(long, conflicts_with_all = ["temp_kelvin", "omega_rad_s"])]
    x: Option<f64>,
    /// Temperature in kelvin (with --omega-rad-s).
    #[arg(long, requires = "omega_rad_s")]
    temp_kelvin: Option<f64>,
    /// Mode angular frequency in rad/s (with --temp-kelvin).
    #[arg(long, requires = "temp_kelvin")]
    omega_rad_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateArg {
    PhotonsInSqueezedThermal,
    SqueezedInThermal,
}

impl From<StateArg> for StateKind {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::PhotonsInSqueezedThermal => StateKind::PhotonsInSqueezedThermal,
            StateArg::SqueezedInThermal => StateKind::SqueezedInPhotonThermal,
        }
    }
}

/// Usage or domain error, reported with exit code 2.
#[derive(Debug)]
pub(crate) struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

impl ModeArgs {
    fn temperature(&self) -> Result<DimensionlessTemperature, UsageError> {
        match (self.x, self.temp_kelvin, self.omega_rad_s) {
            (Some(x), _, _) => Ok(DimensionlessTemperature::new(x)?),
            (None, Some(t), Some(w)) => Ok(DimensionlessTemperature::from_physical(t, w)?),
            _ => Err(UsageError(
                "a temperature is required: --x, or --temp-kelvin with --omega-rad-s".into(),
            )),
        }
    }

    fn parameters(&self) -> Result<ModeParameters, UsageError> {
        Ok(ModeParameters::new(
            SqueezeParameter::new(self.r, self.phi)?,
            CoherentAmplitude::new(self.alpha_mag, self.alpha_phase)?,
            self.temperature()?,
        ))
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code as u8;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute<O: Write, E: Write>(cli: Cli, out: &mut O, err: &mut E) -> Result<u8, UsageError> {
    match cli.command {
        Command::Stats { mode, state, format } => {
            let p = mode.parameters()?;
            commands::stats(&p, state.into(), format, out, err)
        }
        Command::Verify {
            mode,
            grid,
            rel_tol,
            fock_dim_max,
            format,
        } => {
            let points = if grid {
                verification_grid()
            } else {
                vec![mode.parameters()?]
            };
            commands::verify(&points, grid, rel_tol, fock_dim_max, format, out)
        }
        Command::Spectral { mode, format } => {
            let p = mode.parameters()?;
            commands::spectral(&p, mode.temp_kelvin, format, out)
        }
        Command::Sweep {
            mode,
            param,
            start,
            stop,
            steps,
            state,
            oracle,
            rel_tol,
            fock_dim_max,
            format,
        } => {
            let spec = SweepSpec::new(param, start, stop, steps, mode.parameters_for_sweep(param)?)?;
            commands::sweep(&spec, state.into(), format, oracle, rel_tol, fock_dim_max, out, err)
        }
    }
}

impl ModeArgs {
    /// As [`parameters`](Self::parameters), but a sweep over `x` needs no
    /// fixed temperature.
    fn parameters_for_sweep(&self, param: SweepParameter) -> Result<ModeParameters, UsageError> {
        if param == SweepParameter::X && self.x.is_none() && self.temp_kelvin.is_none() {
            let mut with_x = self.clone();
            with_x.x = Some(1.0);
            return with_x.parameters();
        }
        self.parameters()
    }
}
