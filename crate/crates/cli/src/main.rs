use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsd_cli::{cmd_oracle_check, cmd_prepare, cmd_spdc, cmd_truncate, CliError, Config};

#[derive(Parser)]
#[command(
    name = "qsd",
    version,
    about = "Pulsed quantum-scissors device calculator"
)]
struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed of the oracle-check parameter cloud.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Largest allowed closed-form/oracle difference.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
    /// Conjugates the second beam splitter's reflection phase in the oracle.
    #[arg(long, global = true, hide = true)]
    flip_bs2_phase: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity and heralding probability over a mismatch/efficiency/intensity grid.
    Truncate,
    /// Optimal coherent amplitude for preparing a target superposition.
    Prepare,
    /// Mode match of a filtered down-conversion source with a coherent pulse.
    Spdc,
    /// Compares the closed form with the brute-force Fock-space simulation.
    OracleCheck,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("QSD_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qsd: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let cfg = match &cli.config {
        Some(p) => Config::parse(&std::fs::read_to_string(p)?)?,
        None => Config::default(),
    };
    let mut code = ExitCode::SUCCESS;
    let text = match cli.command {
        Command::Truncate => cmd_truncate(&cfg)?,
        Command::Prepare => cmd_prepare(&cfg)?,
        Command::Spdc => cmd_spdc(&cfg)?,
        Command::OracleCheck => {
            if !(cli.tolerance >= 0.0) {
                return Err(CliError::Usage("--tolerance must be nonnegative".into()));
            }
            let check = cmd_oracle_check(&cfg, cli.seed, cli.tolerance, cli.flip_bs2_phase)?;
            if check.failures > 0 {
                eprintln!(
                    "qsd: {} point(s) exceed tolerance {:e} (worst {:e})",
                    check.failures, cli.tolerance, check.worst
                );
                code = ExitCode::from(1);
            }
            check.csv
        }
    };
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(code)
}
