//! `cdg` — command-line driver for the advection-diffusion solver.
//!
//! Subcommands map onto the library drivers: `run` solves one
//! configuration, `epsilon-sweep` and `superpenalty-sweep` trace the
//! mixed-method comparison curves, and `convergence` refines the mesh
//! and reports observed orders. Settings come from compiled-in defaults,
//! then an optional `--config` file, then flags — later layers win.
//!
//! Exit codes: 0 on full success, 1 when a solve fails (failed sweep
//! entries are still written to the CSV with their status), 2 for
//! invalid configuration.

mod config;

use cdg_core::driver::{
    run_convergence_study, run_epsilon_sweep, run_single, run_superpenalty_sweep, DriverError,
};
use cdg_core::postprocess::{write_csv_file, PostprocessError};
use cdg_core::{ExampleKind, MethodKind, SweepRecord};
use clap::{Args, Parser, Subcommand};
use config::{parse_region, ConfigError, Settings};
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "cdg",
    version,
    about = "Finite element solver for stationary advection-diffusion, \
             mixing continuous and discontinuous Galerkin regions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration and report its errors
    Run(RunArgs),
    /// Solve the same setup across a list of diffusion coefficients
    EpsilonSweep(EpsilonSweepArgs),
    /// Raise the penalty on continuous-region faces across a list
    SuperpenaltySweep(SuperpenaltySweepArgs),
    /// Refine the mesh and report errors with observed orders
    Convergence(ConvergenceArgs),
}

#[derive(Args, Clone, Debug, Default)]
struct CommonFlags {
    /// Key=value config file applied below the flags
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Problem to solve: example1, example2, or manufactured
    #[arg(long)]
    example: Option<ExampleKind>,
    /// Discretization: cg, dg, or cdg
    #[arg(long)]
    method: Option<MethodKind>,
    /// Diffusion coefficient
    #[arg(long)]
    epsilon: Option<f64>,
    /// Elements along x
    #[arg(long)]
    nx: Option<usize>,
    /// Elements along y
    #[arg(long)]
    ny: Option<usize>,
    /// Polynomial degree per direction (1-3)
    #[arg(long)]
    degree: Option<usize>,
    /// Penalty factor on faces of the continuous region (super-penalty)
    #[arg(long)]
    sigma_c: Option<f64>,
    /// Penalty factor on discontinuous-region and interface faces
    #[arg(long)]
    sigma_d: Option<f64>,
    /// Flux symmetrization: 1 symmetric, 0 incomplete, -1 nonsymmetric
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Continuous region as rectangles, e.g. "[0,0.5)x[0,1]; (0.75,1]x[0,1]"
    #[arg(long)]
    region: Option<String>,
}

impl CommonFlags {
    /// Merge the config file (if any) under these flags.
    fn settings(&self) -> Result<Settings, ConfigError> {
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let region = match &self.region {
            Some(text) => {
                Some(parse_region(text).map_err(|m| ConfigError::parse("--region", m))?)
            }
            None => None,
        };
        let flags = Settings {
            example: self.example,
            method: self.method,
            epsilon: self.epsilon,
            nx: self.nx,
            ny: self.ny,
            degree: self.degree,
            sigma_c: self.sigma_c,
            sigma_d: self.sigma_d,
            theta: self.theta,
            region,
            ..Settings::default()
        };
        Ok(file.overlay(flags))
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Write the solve record as CSV
    #[arg(long, value_name = "FILE")]
    out_csv: Option<PathBuf>,
    /// Write the solution field as legacy VTK
    #[arg(long, value_name = "FILE")]
    out_vtk: Option<PathBuf>,
}

#[derive(Args)]
struct EpsilonSweepArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Comma-separated diffusion coefficients to sweep
    #[arg(long, value_delimiter = ',')]
    sweep_epsilons: Option<Vec<f64>>,
    /// Write the sweep records as CSV
    #[arg(long, value_name = "FILE")]
    out_csv: Option<PathBuf>,
}

#[derive(Args)]
struct SuperpenaltySweepArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Comma-separated continuous-region penalty factors to sweep
    #[arg(long, value_delimiter = ',')]
    sweep_sigmas: Option<Vec<f64>>,
    /// Write the sweep records as CSV
    #[arg(long, value_name = "FILE")]
    out_csv: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    common: CommonFlags,
    /// Comma-separated mesh sizes (elements per direction) to refine over
    #[arg(long, value_delimiter = ',')]
    sweep_meshes: Option<Vec<usize>>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Driver(#[from] DriverError),
    #[error("cannot write output: {0}")]
    Output(#[from] PostprocessError),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        // Requests the drivers reject up front (impossible mesh or degree,
        // wrong method for a sweep, empty sweep list) are configuration
        // errors like bad flags; only failures during an accepted run
        // count as runtime errors.
        let config_shaped = matches!(
            self,
            CliError::Config(_)
                | CliError::Driver(
                    DriverError::Mesh(_)
                        | DriverError::Space(_)
                        | DriverError::NeedsMixedMethod(..)
                        | DriverError::EmptySweep
                )
        );
        if config_shaped {
            ExitCode::from(2)
        } else {
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::EpsilonSweep(args) => cmd_epsilon_sweep(args),
        Command::SuperpenaltySweep(args) => cmd_superpenalty_sweep(args),
        Command::Convergence(args) => cmd_convergence(args),
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, CliError> {
    let mut settings = args.common.settings()?;
    if args.out_csv.is_some() {
        settings.out_csv = args.out_csv;
    }
    if args.out_vtk.is_some() {
        settings.out_vtk = args.out_vtk;
    }
    let config = settings.run_config();
    log::info!(
        "run: {:?} {:?} {}x{} Q{} epsilon={:e}",
        config.example,
        config.method,
        config.nx,
        config.ny,
        config.degree,
        config.epsilon
    );
    let result = run_single(&config)?;

    println!(
        "{:?} {:?} {}x{} Q{}  epsilon={:e}  dofs={}",
        config.example,
        config.method,
        config.nx,
        config.ny,
        config.degree,
        config.epsilon,
        result.solution.coefficients().len()
    );
    println!(
        "status      {}  (residual {:.3e}, bandwidth {})",
        result.record.status, result.report.residual, result.report.bandwidth
    );
    println!("l2_error    {:.6e}", result.record.l2_error);
    println!("linf_error  {:.6e}", result.record.linf_error);
    if result.companion.is_some() {
        println!("l2_diff     {:.6e}", result.record.l2_diff);
        println!("linf_diff   {:.6e}", result.record.linf_diff);
    }

    if let Some(path) = &settings.out_csv {
        write_csv_file(std::slice::from_ref(&result.record), path)?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = &settings.out_vtk {
        result.solution.write_vtk_file(path)?;
        println!("wrote {}", path.display());
    }

    Ok(status_exit(std::slice::from_ref(&result.record)))
}

fn cmd_epsilon_sweep(args: EpsilonSweepArgs) -> Result<ExitCode, CliError> {
    let mut settings = args.common.settings()?;
    if args.sweep_epsilons.is_some() {
        settings.sweep_epsilons = args.sweep_epsilons;
    }
    if args.out_csv.is_some() {
        settings.out_csv = args.out_csv;
    }
    let config = settings.run_config();
    let records = run_epsilon_sweep(&config)?;
    finish_sweep("epsilon", &records, settings.out_csv.as_deref())
}

fn cmd_superpenalty_sweep(args: SuperpenaltySweepArgs) -> Result<ExitCode, CliError> {
    let mut settings = args.common.settings()?;
    if args.sweep_sigmas.is_some() {
        settings.sweep_sigmas = args.sweep_sigmas;
    }
    if args.out_csv.is_some() {
        settings.out_csv = args.out_csv;
    }
    let config = settings.run_config();
    let records = run_superpenalty_sweep(&config)?;
    finish_sweep("sigma_c", &records, settings.out_csv.as_deref())
}

fn cmd_convergence(args: ConvergenceArgs) -> Result<ExitCode, CliError> {
    let mut settings = args.common.settings()?;
    if args.sweep_meshes.is_some() {
        settings.sweep_meshes = args.sweep_meshes;
    }
    let config = settings.run_config();
    let study = run_convergence_study(&config)?;

    println!(
        "{:>6}  {:>13}  {:>6}  {:>13}",
        "mesh", "l2_error", "order", "linf_error"
    );
    for (i, &n) in study.meshes.iter().enumerate() {
        let order = if i == 0 {
            "-".to_string()
        } else {
            format!("{:.2}", study.l2_orders[i - 1])
        };
        println!(
            "{:>6}  {:>13.6e}  {:>6}  {:>13.6e}",
            n, study.l2_errors[i], order, study.linf_errors[i]
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// Print the sweep table, write the CSV if requested, and fold the
/// per-entry statuses into the exit code. Failed entries stay in the
/// output with their status; they are never dropped.
fn finish_sweep(
    parameter: &str,
    records: &[SweepRecord],
    out_csv: Option<&std::path::Path>,
) -> Result<ExitCode, CliError> {
    println!(
        "{:>13}  {:>13}  {:>13}  {:>13}  {:>13}  {}",
        parameter, "l2_error", "linf_error", "l2_diff", "linf_diff", "status"
    );
    for r in records {
        println!(
            "{:>13.6e}  {:>13.6e}  {:>13.6e}  {:>13.6e}  {:>13.6e}  {}",
            r.parameter, r.l2_error, r.linf_error, r.l2_diff, r.linf_diff, r.status
        );
    }
    if let Some(path) = out_csv {
        write_csv_file(records, path)?;
        println!("wrote {}", path.display());
    }
    Ok(status_exit(records))
}

fn status_exit(records: &[SweepRecord]) -> ExitCode {
    let ok = records.iter().all(|r| r.status == "converged");
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
