use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fourfold_cli::commands::validate::Mutation;
use fourfold_cli::commands::{film2d, sweep, validate, wall1d};
use fourfold_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "fourfold", version, about = "Domain walls and remanent states in fourfold thin films")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, env = "FOURFOLD_OUT", default_value = "fourfold-out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Grid points per unit length, overriding the config.
    #[arg(long)]
    resolution: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Relax 1D wall profiles.
    Wall1d(Common),
    /// Relax a 2D film sample and classify the final state.
    Film2d(Common),
    /// Parallel sweep over nu and sample sizes.
    Sweep(Common),
    /// Run the property suite at reduced resolution.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Inject a known fault; the suite is expected to fail.
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
    },
}

fn config_path(c: &Common) -> CliResult<&PathBuf> {
    c.config.as_ref().ok_or_else(|| CliError::Config("--config <path> is required".into()))
}

fn setup(c: &Common) -> CliResult<()> {
    if let Some(n) = c.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    if matches!(c.resolution, Some(r) if !(r > 0.0 && r.is_finite())) {
        return Err(CliError::Config("--resolution must be positive".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Wall1d(c) => {
            setup(&c)?;
            wall1d::cmd_wall1d(config_path(&c)?, &c.out, c.resolution)
        }
        Command::Film2d(c) => {
            setup(&c)?;
            film2d::cmd_film2d(config_path(&c)?, &c.out, c.resolution)
        }
        Command::Sweep(c) => {
            setup(&c)?;
            sweep::cmd_sweep(config_path(&c)?, &c.out, c.resolution)
        }
        Command::Validate { common, mutate } => {
            setup(&common)?;
            validate::cmd_validate(&common.out, mutate)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fourfold: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
