use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use desitter_cli::commands::{
    cavity_rows, fig2_rows, sweep_rows, write_cavity, write_fig2, write_sweep,
};
use desitter_cli::verify::{self, VerifyOptions};
use desitter_cli::{output_path, with_output, CliError, Config};

#[derive(Parser)]
#[command(name = "desitter", version, about = "Teleportation fidelity in de Sitter space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Configuration file; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; falls back to `[output] path`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation tolerance (grids) or replacement threshold for every hard check (verify).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Fock cutoff override.
    #[arg(long)]
    nmax: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every consistency check; exit 1 if any hard check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Fidelity against H/k for each vacuum parameter.
    Fig2(Common),
    /// Fidelity grid with cutoff, squeezing and outcome spread.
    Sweep(Common),
    /// Cavity amplitudes and scheme-(ii) fidelity against H.
    Cavity(Common),
}

fn load(common: &Common) -> Result<Config, CliError> {
    let mut cfg = match &common.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(t) = common.tolerance {
        cfg.sweep.tolerance = t;
    }
    if common.nmax.is_some() {
        cfg.sweep.n_max = common.nmax;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Verify { common, json } => {
            let cfg = match &common.config {
                Some(p) => Config::load(p)?,
                None => Config::default(),
            };
            if let Some(t) = common.tolerance {
                if t.is_nan() || t < 0.0 {
                    return Err(CliError::config(format!("tolerance must be non-negative, got {t}")));
                }
            }
            let report = verify::run(
                &cfg,
                VerifyOptions {
                    tolerance: common.tolerance,
                    n_max: common.nmax,
                },
            );
            let text = if json { report.to_json() + "\n" } else { report.to_text() };
            print!("{text}");
            if let Some(p) = &common.out {
                with_output(Some(p), |w| w.write_all((report.to_json() + "\n").as_bytes()))?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Verification(report.failures()))
            }
        }
        Command::Fig2(common) => {
            let cfg = load(&common)?;
            let rows = fig2_rows(&cfg.sweep)?;
            with_output(output_path(common.out, &cfg).as_deref(), |w| write_fig2(w, &rows))
        }
        Command::Sweep(common) => {
            let cfg = load(&common)?;
            let rows = sweep_rows(&cfg.sweep)?;
            with_output(output_path(common.out, &cfg).as_deref(), |w| write_sweep(w, &rows))
        }
        Command::Cavity(common) => {
            let cfg = load(&common)?;
            let rows = cavity_rows(&cfg.cavity)?;
            with_output(output_path(common.out, &cfg).as_deref(), |w| write_cavity(w, &rows))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("desitter: {e}");
            e.exit_code()
        }
    }
}
