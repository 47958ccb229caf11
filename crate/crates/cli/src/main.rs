use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use ccm_cli::check::run_checks;
use ccm_cli::{convergence_sweep, run_scenario, write_csv, write_json};
use ccm_cli::{CliError, Result, Scenario, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Run composite collision model scenarios.
#[derive(Debug, Parser)]
#[command(name = "ccm", version)]
struct Args {
    /// TOML scenario file.
    #[arg(long, conflicts_with = "scenario")]
    config: Option<PathBuf>,
    /// Built-in scenario with default parameters.
    #[arg(long)]
    scenario: Option<Scenario>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Convergence table over the configured tau_list.
    #[arg(long)]
    sweep_tau: bool,
    /// Run the built-in certificates.
    #[arg(long)]
    check: bool,
}

fn run(args: &Args) -> Result<()> {
    if args.check {
        run_checks(io::stdout().lock())?;
        return Ok(());
    }
    let cfg = match (&args.config, args.scenario) {
        (Some(path), _) => ScenarioConfig::from_path(path)?,
        (None, Some(s)) => ScenarioConfig::preset(s),
        (None, None) => {
            return Err(CliError::Config(
                "one of --config, --scenario or --check is required".into(),
            ))
        }
    };
    let report = if args.sweep_tau {
        convergence_sweep(&cfg)?
    } else {
        run_scenario(&cfg)?
    };
    let mut out: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match args.format {
        Format::Csv => write_csv(&report, &mut out)?,
        Format::Json => write_json(&report, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
