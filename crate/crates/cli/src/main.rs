use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qbattery_cli::config::ExperimentKind;

#[derive(Parser)]
#[command(name = "qbattery", version = qbattery_cli::output::BUILD, about = "Driven spin-chain battery experiments")]
struct Args {
    /// sweep-frequency, bandwidth-scan, power-scaling, magnus-check or stroboscopic-trace
    experiment: ExperimentKind,
    #[arg(long)]
    config: PathBuf,
    /// CSV path; the JSON sidecar goes next to it
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Accepted for interface compatibility; every experiment is deterministic.
    #[arg(long)]
    seedless: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let _ = args.seedless;
    match qbattery_cli::run(args.experiment, &args.config, args.out.as_deref(), args.workers) {
        Ok(path) => {
            eprintln!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qbattery: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
