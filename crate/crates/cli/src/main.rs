use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rydberg_bec_cli::config::{parse_config, validate_grid, Format, RunConfig};
use rydberg_bec_cli::table::{emit, emit_to_path};
use rydberg_bec_cli::{run, CliError, Verb};

/// Geometric phase and entanglement of two Rydberg impurities in a condensate.
#[derive(Parser, Debug)]
#[command(name = "rydberg-bec", version)]
struct Cli {
    #[arg(value_enum)]
    verb: Verb,
    /// JSON run configuration (optional for `validate`).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "tsv"])]
    format: Option<String>,
    /// Number of time steps over one quasicycle.
    #[arg(long)]
    steps: Option<usize>,
}

const VALIDATE_DEFAULT: &str = r#"{
    "scenario": "micro_micro",
    "omega": 1.0, "j_vdw": 0.1, "lambda_c": 0.05, "alpha": 1.0, "eta0": 0.5235987755982988
}"#;

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let text = match &cli.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None if cli.verb == Verb::Validate => VALIDATE_DEFAULT.to_owned(),
        None => return Err(CliError::Config("--config is required for this verb".into())),
    };
    let mut cfg = parse_config(&text)?;
    if let Some(n) = cli.steps {
        cfg.grid.n_steps = n;
        validate_grid(&cfg.grid)?;
    }
    if let Some(f) = &cli.format {
        cfg.output.format = Format::parse(f)?;
    }
    if let Some(p) = &cli.output {
        cfg.output.path = Some(p.clone());
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = load(cli)?;
    let outcome = run(cli.verb, &cfg)?;
    if let Some(report) = &outcome.report {
        print!("{report}");
        if let Some(path) = &cfg.output.path {
            emit_to_path(&outcome.table, cfg.output.format, path)?;
        }
        return Ok(());
    }
    match &cfg.output.path {
        Some(path) => emit_to_path(&outcome.table, cfg.output.format, path),
        None => emit(&outcome.table, cfg.output.format, std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
