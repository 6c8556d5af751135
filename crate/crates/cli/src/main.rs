use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use helmwave_cli::{cmd_dirac, cmd_modes, cmd_propagate, cmd_report, cmd_verify, load_config, CliError, CliResult, Config, Overrides};

#[derive(Parser)]
#[command(name = "helmwave", version, about = "Scalar beam propagation with conservation-law diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate the configured beam and write field dumps plus diagnostics.csv
    Propagate(RunArgs),
    /// Run the verification suites and print a table of checks
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Split a diagnostics CSV into per-quantity (z, value) series
    Report {
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single-mode Hamilton flow from the [modes] section
    Modes(RunArgs),
    /// Propagate the first-order doublet and write doublet dumps
    Dirac(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    allow_unstable: bool,
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn load(&self) -> CliResult<Config> {
        let mut cfg = load_config(&self.config)?;
        cfg.apply(&Overrides { out: self.out.clone(), allow_unstable: self.allow_unstable, seed: self.seed });
        Ok(cfg)
    }
}

/// Prints to stdout, ignoring a closed pipe.
fn emit(text: impl std::fmt::Display) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn list(files: Vec<PathBuf>) {
    for f in files {
        emit(f.display());
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Propagate(args) => list(cmd_propagate(&args.load()?)?.files),
        Command::Modes(args) => list(cmd_modes(&args.load()?)?.files),
        Command::Dirac(args) => list(cmd_dirac(&args.load()?)?.files),
        Command::Verify { suite, seed } => {
            let report = cmd_verify(&suite, seed)?;
            emit(&report);
            if !report.passed() {
                return Err(CliError::Failed("verification failed".into()));
            }
        }
        Command::Report { csv, out } => {
            let out = out.unwrap_or_else(|| csv.with_extension("series"));
            list(cmd_report(&csv, &out)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("helmwave: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
