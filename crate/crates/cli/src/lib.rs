//! Command-line surface for the `psusy` tool: spectra, parameter sweeps,
//! verification reports, wavefunction export and the Dirac reduction.

pub mod commands;
pub mod config;
pub mod error;
pub mod models;
pub mod output;

use clap::{Parser, Subcommand};

use config::{Flags, RunConfig};
use error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "psusy", version, about = "Pseudo-Hermitian SUSY-QM spectra and audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form and/or oracle energy levels
    Spectrum(Flags),
    /// Figure-formula energies along one swept parameter
    Scan(Flags),
    /// JSON audit of the factorization pipeline
    Verify(Flags),
    /// Normalized wavefunction samples
    Wavefunction(Flags),
    /// Effective potential of the reduced Dirac equation
    Reduce(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Scan(_) => "scan",
            Command::Verify(_) => "verify",
            Command::Wavefunction(_) => "wavefunction",
            Command::Reduce(_) => "reduce",
        }
    }

    fn flags(&self) -> &Flags {
        match self {
            Command::Spectrum(f)
            | Command::Scan(f)
            | Command::Verify(f)
            | Command::Wavefunction(f)
            | Command::Reduce(f) => f,
        }
    }
}

/// Runs one command and returns the output bytes with the exit code.
pub fn execute(command: &Command) -> CliResult<(Vec<u8>, i32)> {
    let cfg = RunConfig::resolve(command.flags())?;
    let name = command.name();
    let table = match command {
        Command::Spectrum(_) => commands::spectrum::run(&cfg)?,
        Command::Scan(_) => commands::scan::run(&cfg)?,
        Command::Wavefunction(_) => commands::wavefunction::run(&cfg)?,
        Command::Reduce(_) => commands::reduce::run(&cfg)?,
        Command::Verify(_) => {
            let report = commands::verify::run(&cfg)?;
            let code = if report.summary.all_hard_pass { 0 } else { 1 };
            return Ok((output::render_json(name, &cfg, &report)?, code));
        }
    };
    Ok((output::render_table(name, &cfg, &table)?, 0))
}

/// Runs a command, writes its output and returns the process exit code.
pub fn run(command: &Command) -> i32 {
    let result = execute(command).and_then(|(bytes, code)| {
        let cfg = RunConfig::resolve(command.flags())?;
        output::emit(&cfg, &bytes)?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("psusy {}: {e}", command.name());
            e.exit_code()
        }
    }
}
