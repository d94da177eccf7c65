//! `fdcrn` — sweep driver for the spectrum-sensing loss models.
//!
//! Exit codes: 0 success, 2 invalid configuration or input data, 3 i/o
//! failure. When `FDCRN_OUT_DIR` is set, relative output paths are resolved
//! inside it.

use clap::{Parser, Subcommand};
use fdcrn_cli::{parse_config, parse_csv, plot_script, rows_to_csv, run_sweep, CliError, Mode};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "fdcrn", version, about = "Primary-user packet loss under half- and full-duplex spectrum sensing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an SNR sweep over the configured scenarios and write a CSV table
    Sweep {
        /// Experiment config file (flat key = value)
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (default: sweep.csv in FDCRN_OUT_DIR or the
        /// working directory)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's base seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's replication count
        #[arg(long)]
        replications: Option<u32>,
        /// Override the config's mode list (comma separated:
        /// half,full,full-imperfect)
        #[arg(long)]
        modes: Option<String>,
    },
    /// Render a sweep CSV as a self-contained gnuplot script
    Plot {
        /// Input CSV produced by `sweep`
        #[arg(long = "in")]
        input: PathBuf,
        /// Output script path
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse and validate a config file without computing anything
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Relative outputs land in `FDCRN_OUT_DIR` when it is set.
fn resolve_out(path: PathBuf) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var("FDCRN_OUT_DIR") {
            if !dir.is_empty() {
                return Path::new(&dir).join(path);
            }
        }
    }
    path
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            seed,
            replications,
            modes,
        } => {
            let mut spec = parse_config(&read_to_string(&config)?)?;
            if let Some(seed) = seed {
                spec.base_seed = seed;
            }
            if let Some(reps) = replications {
                spec.replications = reps;
            }
            if let Some(modes) = modes {
                spec.modes = modes
                    .split(',')
                    .map(|s| {
                        Mode::from_str(s).map_err(|reason| CliError::Config {
                            field: "modes".into(),
                            reason,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            }
            let rows = run_sweep(&spec)?;
            let out = resolve_out(out.unwrap_or_else(|| PathBuf::from("sweep.csv")));
            fdcrn_cli::write_output(&out, &rows_to_csv(&rows))?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(())
        }
        Command::Plot { input, out } => {
            let rows = parse_csv(&read_to_string(&input)?)?;
            let script = plot_script(&rows)?;
            let out = resolve_out(out);
            fdcrn_cli::write_output(&out, &script)?;
            println!("wrote plot script to {}", out.display());
            Ok(())
        }
        Command::Validate { config } => {
            let spec = parse_config(&read_to_string(&config)?)?;
            spec.validate()?;
            let combos: usize = spec
                .modes
                .iter()
                .map(|m| match m {
                    Mode::FullImperfect => spec.variants.len(),
                    _ => 1,
                })
                .sum();
            println!(
                "config OK: {} SNR points x {} scenario combinations, {} replications each",
                spec.snr_grid_db.len(),
                combos,
                spec.replications
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
