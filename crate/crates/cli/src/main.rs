use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stablegov::commands::{
    cmd_attack, cmd_equilibrium, cmd_oracle_check, cmd_sweep, cmd_value, Output,
};
use stablegov::{CliError, RunConfig};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  the model has no feasible equilibrium at these parameters
  1  invalid input, I/O or numerical failure, or an oracle check beyond 5 standard errors";

#[derive(Parser)]
#[command(name = "stablegov", version, about = "Stablecoin valuation, governance equilibrium and attack security", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Put, price, vault and governance values with sensitivities at (F, delta).
    Value {
        #[command(flatten)]
        common: Common,
        #[arg(long = "F")]
        f: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Thresholds, assumption margins and the equilibrium.
    Equilibrium {
        #[command(flatten)]
        common: Common,
    },
    /// Governance-attack security report at the equilibrium.
    Attack {
        #[command(flatten)]
        common: Common,
    },
    /// CSV sweep of one parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo and grid checks of the closed forms.
    OracleCheck {
        #[command(flatten)]
        common: Common,
        /// Issuance to check at; defaults to the equilibrium.
        #[arg(long = "F")]
        f: Option<f64>,
        /// Rate to check at; defaults to the equilibrium.
        #[arg(long)]
        delta: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
}

fn run(cli: Cli) -> Result<(Output, Option<PathBuf>), CliError> {
    match cli.command {
        Command::Value { common, f, delta } => Ok((
            cmd_value(&RunConfig::load(&common.config)?, f, delta)?,
            None,
        )),
        Command::Equilibrium { common } => {
            Ok((cmd_equilibrium(&RunConfig::load(&common.config)?)?, None))
        }
        Command::Attack { common } => Ok((cmd_attack(&RunConfig::load(&common.config)?)?, None)),
        Command::Sweep { common, out } => Ok((cmd_sweep(&RunConfig::load(&common.config)?)?, out)),
        Command::OracleCheck { common, f, delta } => Ok((
            cmd_oracle_check(&RunConfig::load(&common.config)?, f, delta)?,
            None,
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((output, None)) => {
            print!("{}", output.text);
            ExitCode::from(output.status.code() as u8)
        }
        Ok((output, Some(path))) => match std::fs::write(&path, &output.text) {
            Ok(()) => ExitCode::from(output.status.code() as u8),
            Err(e) => {
                eprintln!("error: writing {}: {e}", path.display());
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}
