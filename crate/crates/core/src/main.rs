use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use movingbox::cli::{self, presets};

#[derive(Parser)]
#[command(name = "movingbox", version, about = "Quantum particle in a box with moving walls")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a single run described by a TOML config
    Run { config: PathBuf },
    /// Execute every value of the config's [sweep] section
    Sweep { config: PathBuf },
    /// Compare the snapshots of two runs
    Compare { dir_a: PathBuf, dir_b: PathBuf },
    /// Bundled example configurations
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// List preset names
    List,
    /// Print the annotated config of a preset
    Show { name: String },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(args: Args) -> anyhow::Result<()> {
    match args.command {
        Command::Run { config } => {
            let cfg = cli::parse_config(&config)?;
            let summary = cli::run(&cfg).with_context(|| format!("run of {}", config.display()))?;
            let m = &summary.manifest;
            println!("wrote {}", summary.directory.display());
            println!(
                "final norm {:.12}  final energy {:.12}  ({:.2} s)",
                m.final_norm.unwrap_or(f64::NAN),
                m.final_energy.unwrap_or(f64::NAN),
                m.wall_clock_seconds
            );
            if let Some(d) = m.discarded_norm {
                println!("discarded norm {d:.6e}");
            }
        }
        Command::Sweep { config } => {
            let cfg = cli::parse_config(&config)?;
            let manifest = cli::sweep(&cfg)?;
            println!("wrote {}", manifest.directory.display());
            let mut failed = 0;
            for entry in &manifest.entries {
                match &entry.error {
                    None => println!("  {} = {}: ok", manifest.parameter, entry.value),
                    Some(e) => {
                        failed += 1;
                        println!("  {} = {}: FAILED: {e}", manifest.parameter, entry.value);
                    }
                }
            }
            anyhow::ensure!(failed == 0, "{failed} sweep entries failed");
        }
        Command::Compare { dir_a, dir_b } => {
            let report = cli::compare_runs(&dir_a, &dir_b)?;
            println!("{:>24} {:>24} {:>24}", "t", "distance", "fidelity");
            for s in &report.snapshots {
                println!("{:>24.16e} {:>24.16e} {:>24.16e}", s.t, s.distance, s.fidelity);
            }
            println!("worst distance {:.16e}", report.worst_distance);
            println!("worst fidelity {:.16e}", report.worst_fidelity);
        }
        Command::Presets { action: PresetAction::List } => {
            for name in presets::names() {
                println!("{name}");
            }
        }
        Command::Presets { action: PresetAction::Show { name } } => {
            print!("{}", presets::source(&name)?);
        }
    }
    Ok(())
}
