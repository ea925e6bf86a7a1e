use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::LevelFilter;

use varbasis::cli::{self, CliError, Overrides, Severity};
use varbasis::Scheme;

#[derive(Parser)]
#[command(
    name = "varbasis",
    version,
    about = "Hybrid gLV simulation on a variable species basis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write timeseries.csv, events.csv, plot.dat and report.txt
    Simulate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_parser = ["euler", "rk4", "cn"])]
        scheme: Option<String>,
        #[arg(long)]
        no_auto_extinct: bool,
        #[arg(long)]
        horizon: Option<f64>,
    },
    /// Check a scenario against its parameters without simulating
    Validate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Randomized check of the algebra laws
    Selfcheck {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn init_logging() {
    let level = match std::env::var("VARBASIS_LOG").as_deref() {
        Ok("quiet") => LevelFilter::Error,
        Ok("debug") => LevelFilter::Debug,
        _ => LevelFilter::Info,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate {
            params,
            scenario,
            out,
            dt,
            beta,
            scheme,
            no_auto_extinct,
            horizon,
        } => {
            let overrides = Overrides {
                dt,
                beta,
                scheme: scheme.map(|s| s.parse::<Scheme>().expect("clap restricts the values")),
                no_auto_extinct,
                horizon,
            };
            let report = cli::cmd_simulate(&params, &scenario, &out, &overrides)?;
            println!("{report}");
        }
        Command::Validate { params, scenario } => {
            let diags = cli::cmd_validate(&params, &scenario)?;
            for d in &diags {
                match d.severity {
                    Severity::Warning => log::warn!("{}", d.message),
                    _ => println!("{d}"),
                }
            }
            println!("ok");
        }
        Command::Selfcheck { trials, seed } => {
            let report = cli::cmd_selfcheck(trials, seed)?;
            println!("{report}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    init_logging();
    let args = Cli::parse();
    match dispatch(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
