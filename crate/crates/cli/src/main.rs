use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use latticestat::convergence::TheoremId;
use latticestat_cli::{exit, explain, load, run, summary, to_json, CliError, CliResult, Overrides};

#[derive(Parser)]
#[command(name = "latticestat", version, about = "Statistical order convergence checks for operator sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every query of a config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        horizon: Option<u64>,
        /// Exact rational, e.g. 1/1000000.
        #[arg(long)]
        tolerance: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Print the JSON report instead of the summary table.
        #[arg(long)]
        json: bool,
        /// Print nothing on success.
        #[arg(long, short)]
        quiet: bool,
        /// Also write the JSON report to this file.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Explain one query of a saved JSON report.
    Explain { report: PathBuf, query_id: String },
    /// List the verifiable theorems.
    Theorems {
        #[arg(long)]
        list: bool,
    },
}

fn write(path: &PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> CliResult<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
            path: "<stdout>".into(),
            msg: e.to_string(),
        }),
        _ => Ok(()),
    }
}

fn main_inner(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run {
            config,
            horizon,
            tolerance,
            seed,
            json,
            quiet,
            output,
        } => {
            let plan = load(&config, &Overrides { horizon, tolerance, seed })?;
            let report = run(&plan)?;
            let text = to_json(&report)?;
            if let Some(path) = &output {
                write(path, &text)?;
            }
            if !quiet {
                if json {
                    emit(&format!("{text}\n"))?;
                } else {
                    emit(&summary(&report))?;
                }
            }
        }
        Command::Explain { report, query_id } => {
            let src = std::fs::read_to_string(&report).map_err(|e| CliError::Io {
                path: report.display().to_string(),
                msg: e.to_string(),
            })?;
            let value: serde_json::Value =
                serde_json::from_str(&src).map_err(|e| CliError::Config(format!("report is not JSON: {e}")))?;
            emit(&explain(&value, &query_id)?)?;
        }
        Command::Theorems { list: _ } => {
            let lines: String = TheoremId::ALL
                .iter()
                .map(|id| format!("{:24}  {}\n", id.name(), id.statement()))
                .collect();
            emit(&lines)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("latticestat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
