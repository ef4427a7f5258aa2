use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bethe_lab::cli::{run, verify_suite, with_pool, worker_count, RunConfig, VerifyLevel, EXIT_CHECK_FAILED};
use bethe_lab::LabError;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bethe-lab", version, about = "Green's functions, transport and supersymmetric identities on Bethe strips")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON configuration.
    Run { config: PathBuf },
    /// Run the exact identity suite and print a JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn execute(cli: Cli) -> Result<i32, LabError> {
    match cli.command {
        Command::Run { config } => {
            let config = RunConfig::from_path(&config)?;
            let mut stdout = std::io::stdout();
            Ok(run(config, &mut stdout)?.exit_code)
        }
        Command::Verify { level, json } => {
            let level = match level {
                Level::Fast => VerifyLevel::Fast,
                Level::Full => VerifyLevel::Full,
            };
            let report = with_pool(worker_count(None)?, || verify_suite(level))?;
            for r in report.identities.iter().filter(|r| !r.pass) {
                eprintln!("FAIL {}: {}", r.identity, r.counterexample.as_deref().unwrap_or(""));
            }
            let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
            match json {
                Some(path) => std::fs::write(&path, text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?,
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| LabError::Config(e.to_string()))?,
            }
            Ok(if report.pass { 0 } else { EXIT_CHECK_FAILED })
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("bethe-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
