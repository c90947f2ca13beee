use std::path::PathBuf;
use std::process::ExitCode;

use asv_cli::commands;
use asv_cli::config::{Config, CONFIG_ENV_VAR};
use asv_cli::{CliError, EXIT_INPUT};
use asv_core::autopilot::PidGains;
use clap::{Parser, Subcommand};

/// Simulation and analysis toolkit for a small twin-hull autonomous
/// surface vehicle.
#[derive(Parser)]
#[command(name = "asv", version, about, max_term_width = 100)]
struct Cli {
    /// Configuration JSON; falls back to the ASV_SIM_CONFIG environment
    /// variable.
    #[arg(long, global = true, env = CONFIG_ENV_VAR)]
    config: Option<PathBuf>,

    /// Override the configured RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Maximum parallel jobs for row processing. Outputs are ordered
    /// deterministically regardless.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a waypoint mission with sensor sampling; writes trajectory,
    /// samples and telemetry artifacts.
    Sim {
        /// Waypoint list JSON; defaults to the configured mission path.
        #[arg(long)]
        mission: Option<PathBuf>,
    },
    /// Derive decrement/damping/frequency columns from a free-decay
    /// test table.
    AnalyzeSwath {
        /// Input decay-table CSV.
        table1: PathBuf,
        /// Expected derived-value CSV for comparison; adds an `ok`
        /// column and exits 3 on mismatch.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Report steering-plant poles and the PID-stabilized closed loop;
    /// writes step-response and root-locus CSVs.
    TuneHeading,
    /// Classify water samples against the quality-index class table.
    Wqi {
        /// Samples CSV (the sim's samples schema, optionally with
        /// laboratory parameter columns).
        samples: PathBuf,
        /// Alternative class-table CSV.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Decode a raw telemetry frame dump back into a samples CSV.
    Replay {
        /// Concatenated-frame binary dump.
        dump: PathBuf,
    },
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| {
        CliError::Input(format!(
            "a configuration file is required (pass --config or set {CONFIG_ENV_VAR})"
        ))
    })?;
    let mut config = Config::load(path)?;
    if let Some(seed) = cli.seed {
        config.sim.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.paths.out_dir = out.clone();
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Sim { mission } => {
            let config = load_config(cli)?;
            let out_dir = config.paths.out_dir.clone();
            commands::cmd_sim(&config, mission.as_deref(), &out_dir)
        }
        Command::AnalyzeSwath { table1, expected } => {
            let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            commands::cmd_analyze_swath(table1, expected.as_deref(), &out_dir)
        }
        Command::TuneHeading => {
            // Gains come from the config when one is given; otherwise the
            // shipped defaults.
            let (gains, out_dir) = match &cli.config {
                Some(path) => {
                    let mut config = Config::load(path)?;
                    if let Some(out) = &cli.out {
                        config.paths.out_dir = out.clone();
                    }
                    (config.pid, config.paths.out_dir)
                }
                None => (
                    PidGains::default_for_vehicle(),
                    cli.out.clone().unwrap_or_else(|| PathBuf::from("out")),
                ),
            };
            commands::cmd_tune_heading(gains, &out_dir)
        }
        Command::Wqi { samples, table } => commands::cmd_wqi(samples, table.as_deref()),
        Command::Replay { dump } => {
            let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            commands::cmd_replay(dump, &out_dir)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
