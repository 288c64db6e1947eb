use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hardy_cli::{run, Command, EXIT_CONFIG};

/// Toeplitz and Hankel operators between Hardy-type spaces.
///
/// Prints a JSON report on stdout. Exit status: 0 when every verdict passes
/// (exploratory verdicts included), 1 when any fails, 2 on a config error.
#[derive(Debug, Parser)]
#[command(name = "hardy", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Also write the numeric results as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.command, &args.config, args.out.as_deref(), args.seed) {
        Ok(report) => {
            println!("{}", report.to_json());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
