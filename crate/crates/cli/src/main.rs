use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fbelief_cli::evaluate::{run_condition, run_evaluate};
use fbelief_cli::report::Report;
use fbelief_cli::scenario::parse_scenario;
use fbelief_cli::verify::{run_verify, GridSpec, Perturbation, DEFAULT_MAX_POPULATION};
use fbelief_cli::CliError;
use fbelief_core::Backend;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Structured,
}

/// Belief-function evaluation of identification scenarios.
#[derive(Debug, Parser)]
#[command(name = "fbelief", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    output: Output,

    /// Evaluate closed forms in floating point (for very large populations).
    #[arg(long, global = true)]
    float: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a scenario file.
    Evaluate { file: PathBuf },
    /// Condition a custom mass function and report the result.
    Condition { file: PathBuf },
    /// Compare every closed form with brute-force enumeration.
    Verify {
        /// Largest population to enumerate (at most 12).
        #[arg(long, default_value_t = DEFAULT_MAX_POPULATION)]
        max_pop: u64,
        /// Grid overrides, e.g. "pop=2..6; p=1/4,1/2".
        #[arg(long)]
        grid: Option<String>,
        /// Shift one closed form to check that the sweep catches it.
        #[arg(long, hide = true)]
        inject_perturbation: Option<String>,
    },
}

fn load(path: &PathBuf) -> Result<fbelief_cli::scenario::Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_scenario(&text)?)
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let backend = if cli.float { Backend::Float } else { Backend::Exact };
    match &cli.command {
        Command::Evaluate { file } => run_evaluate(&load(file)?, backend),
        Command::Condition { file } => run_condition(&load(file)?, backend),
        Command::Verify {
            max_pop,
            grid,
            inject_perturbation,
        } => {
            if cli.float {
                return Err(CliError::Usage("verify compares exact values; --float is not accepted".into()));
            }
            let grid = match grid {
                Some(spec) => GridSpec::parse(spec, *max_pop)?,
                None => GridSpec::default_for(*max_pop)?,
            };
            let perturbation = inject_perturbation.as_deref().map(Perturbation::parse).transpose()?;
            run_verify(&grid, perturbation.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.output {
                Output::Table => print!("{}", report.to_table()),
                Output::Structured => print!("{}", report.to_json()),
            }
            let failed = report.verification.as_ref().is_some_and(|v| !v.passed);
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
