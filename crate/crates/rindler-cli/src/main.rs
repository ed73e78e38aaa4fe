//! `rindler <command> --config <path>` with optional field overrides.
//!
//! Exit codes: 0 on success, 2 for configuration/usage problems, 1 for
//! numerical failures. Every started run leaves a `manifest.json` in its run
//! directory recording the outcome, the configuration echo, and — on failure
//! — the error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use rindler_cli::config::{Command, Overrides, RunConfig};
use rindler_cli::runner;

/// Transition responses of uniformly accelerated detectors: switched-window
/// spectra, detailed-balance temperatures, and thermality scans.
#[derive(Parser)]
#[command(name = "rindler", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// |χ̂(ω)|² on a frequency grid, with norms and the decay envelope.
    Spectrum(RunArgs),
    /// F_λ(E) over a gap grid at fixed λ (frequency route).
    Response(RunArgs),
    /// Detailed-balance temperature at a fixed gap over a λ grid.
    TempScan(RunArgs),
    /// Thermality scan under the scaling schedule λ(E) = α(2πE/a)^(1+p).
    Thermality(RunArgs),
    /// Plateau-window scan: flat-top-only stretching, or the whole-window
    /// control family.
    Plateau(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration; every omitted field takes its default.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the proper acceleration a.
    #[arg(long)]
    a: Option<f64>,
    /// Override the switching sharpness κ.
    #[arg(long)]
    kappa: Option<f64>,
    /// Override the schedule prefactor α.
    #[arg(long)]
    alpha: Option<f64>,
    /// Override the schedule exponent p.
    #[arg(long)]
    p: Option<f64>,
    /// Override the grid minimum.
    #[arg(long)]
    emin: Option<f64>,
    /// Override the grid maximum.
    #[arg(long)]
    emax: Option<f64>,
    /// Override the grid point count.
    #[arg(long)]
    points: Option<usize>,
    /// Override the run directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Spectrum(a) => (Command::Spectrum, a),
        Sub::Response(a) => (Command::Response, a),
        Sub::TempScan(a) => (Command::TempScan, a),
        Sub::Thermality(a) => (Command::Thermality, a),
        Sub::Plateau(a) => (Command::Plateau, a),
    };
    std::process::exit(drive(command, args));
}

fn drive(command: Command, args: RunArgs) -> i32 {
    let mut cfg = match &args.config {
        Some(path) => match RunConfig::load(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        None => RunConfig::default(),
    };
    cfg.apply_overrides(&Overrides {
        a: args.a,
        kappa: args.kappa,
        alpha: args.alpha,
        p: args.p,
        emin: args.emin,
        emax: args.emax,
        points: args.points,
        out: args.out,
    });

    match runner::run(command, &cfg) {
        Ok(manifest) => {
            let dir = manifest
                .config
                .output
                .dir
                .as_deref()
                .expect("run resolves its directory");
            for name in &manifest.outputs {
                println!("wrote {}", dir.join(name).display());
            }
            println!("wrote {}", dir.join("manifest.json").display());
            println!(
                "T_Unruh = a/2pi = {:.16e}   (1/T = {:.16e})",
                manifest.unruh_temperature, manifest.inverse_unruh_temperature
            );
            if let Some(v) = &manifest.verdict {
                println!("verdict: {v}");
            }
            if let Some(x) = manifest.fitted_exponent {
                println!("fitted_exponent: {x:.16e}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
