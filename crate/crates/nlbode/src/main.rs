use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nlbode::commands::{self, CliError, SpaceArg, SrgTarget};
use nlbode::config::{AnalysisConfig, ConfigError, GridSpec};
use nlbode::output;
use serde_json::Value;

/// Guaranteed frequency-dependent gain bounds for feedback loops with one
/// sector-bounded nonlinearity, plus the simulations to cross-check them.
#[derive(Parser)]
#[command(name = "nlbode", version)]
struct Cli {
    /// JSON configuration file; omitted, the built-in DC-motor study runs
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (overrides the configured one)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Print the summary JSON on stdout
    #[arg(long, global = true)]
    json: bool,

    /// Override the boundary resolution
    #[arg(long, global = true, value_name = "N")]
    resolution: Option<usize>,

    /// Seed for the randomized gain probes
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Override the frequency grid
    #[arg(long, global = true, value_name = "LO:HI:PPD")]
    grid: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep both loop maps over the grid and write the gain-bound curves
    Bode,
    /// Dump one scaled relative graph boundary as CSV
    Srg {
        /// Which set: a loop block, the nonlinearity, or its inverse
        target: SrgTarget,
        /// Input space for loop blocks
        #[arg(value_enum, default_value_t = SpaceArg::Full)]
        space: SpaceArg,
        /// Base frequency in rad/s, required for frequency-indexed spaces
        omega: Option<f64>,
    },
    /// Integrate the closed loop for one configured reference
    Simulate {
        /// Reference id from the configuration (r1, r2, r3 by default)
        reference: String,
    },
    /// Run the full acceptance matrix and write the report
    Verify,
}

fn parse_grid(spec: &str) -> Result<GridSpec, CliError> {
    let bad = || {
        CliError::Config(ConfigError::Invalid(format!(
            "grid '{spec}' does not parse as LO:HI:PPD"
        )))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(GridSpec {
        lo: parts[0].parse().map_err(|_| bad())?,
        hi: parts[1].parse().map_err(|_| bad())?,
        points_per_decade: parts[2].parse().map_err(|_| bad())?,
    })
}

fn load_config(cli: &Cli) -> Result<AnalysisConfig, CliError> {
    let mut config = match &cli.config {
        Some(path) => AnalysisConfig::load(path)?,
        None => AnalysisConfig::default(),
    };
    if let Some(n) = cli.resolution {
        config.resolution = n;
    }
    if let Some(spec) = &cli.grid {
        config.grid = parse_grid(spec)?;
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let config = load_config(cli)?;
    let out_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| config.out_dir.clone());
    match &cli.command {
        Command::Bode => commands::cmd_bode(&config, &out_dir),
        Command::Srg {
            target,
            space,
            omega,
        } => commands::cmd_srg(&config, *target, *space, *omega, &out_dir),
        Command::Simulate { reference } => commands::cmd_simulate(&config, reference, &out_dir),
        Command::Verify => commands::cmd_verify(&config, cli.seed, &out_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            if cli.json {
                print!("{}", output::to_json_string(&summary));
            } else {
                eprintln!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            }
            // verify reports its overall verdict in the exit code
            if summary.get("pass").and_then(Value::as_bool) == Some(false) {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
