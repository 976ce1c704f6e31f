//! Front end for the `busqc` binary: configuration, the five subcommands and
//! their reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::path::PathBuf;

use busqc::evolution::Mode;
use clap::{Parser, Subcommand, ValueEnum};

pub use config::Config;
pub use error::{CliError, EXIT_ACCEPTANCE, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK};
pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "busqc", version, about = "rf-SQUID inductor-bus design, compilation and simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration; defaults to the reference design.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Logical circuit file (simulate, compile).
    #[arg(long, global = true, value_name = "PATH")]
    pub circuit: Option<PathBuf>,
    /// Overrides control.mode from the configuration.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve the SQUID, extract Δ, ε, I_p and invert Δ(Ic).
    Calibrate,
    /// Bus design numbers: M_eff, J, weak-coupling ratio, N_max, timings.
    Design,
    /// Compile and run a circuit on the dense simulator.
    Simulate,
    /// Print the pulse schedule of a circuit.
    Compile,
    /// Compare computed design values with the published ones.
    ReproducePaper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ideal,
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

impl Cli {
    pub fn load_config(&self) -> Result<Config, CliError> {
        match &self.config {
            Some(p) => Config::load(p),
            None => Ok(Config::default()),
        }
    }

    pub fn mode(&self, cfg: &Config) -> Mode {
        match self.mode {
            Some(ModeArg::Ideal) => Mode::Ideal,
            Some(ModeArg::Physical) => Mode::Physical,
            None => cfg.control.mode,
        }
    }
}

/// Runs one command. A report is returned whenever one was produced, even
/// when the command also fails its acceptance check.
pub fn run(cli: &Cli) -> (Option<String>, Result<(), CliError>) {
    let report = (|| {
        let cfg = cli.load_config()?;
        let mode = cli.mode(&cfg);
        match cli.command {
            Command::Calibrate => commands::calibrate(&cfg),
            Command::Design => commands::design(&cfg),
            Command::Simulate => commands::simulate(&cfg, &commands::read_circuit(cli.circuit.as_deref())?, mode),
            Command::Compile => commands::compile(&cfg, &commands::read_circuit(cli.circuit.as_deref())?, mode),
            Command::ReproducePaper => commands::reproduce_paper(&cfg),
        }
    })();
    let report = match report {
        Ok(r) => r,
        Err(e) => return (None, Err(e)),
    };
    let text = match cli.format {
        Format::Text => report.to_text(),
        Format::Records => report.to_records(),
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            return (Some(text), Err(CliError::io(format!("{}: {e}", path.display()))));
        }
    }
    let status = if cli.command == Command::ReproducePaper && report.has_failures() {
        let n = report.rows.iter().filter(|r| r.status == Some(report::Status::Fail)).count();
        Err(CliError::acceptance(format!("{n} comparison row(s) outside tolerance")))
    } else {
        Ok(())
    };
    (Some(text), status)
}
