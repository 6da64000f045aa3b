use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use crofton_lab::{run, Config, ConfigError, ExperimentKind};

/// Runs one crofton-lab experiment and writes its report.
#[derive(Debug, Parser)]
#[command(name = "crofton-lab", version)]
struct Cli {
    /// Experiment to run.
    experiment: ExperimentKind,
    /// Configuration document (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; the report goes to stdout when neither this nor the
    /// config's `out` is set.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write(path: &Path, text: &str, field: &str) -> Result<(), ConfigError> {
    std::fs::write(path, text).map_err(|e| ConfigError::new(field, format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<bool, ConfigError> {
    let mut config = Config::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        config.seed = Some(seed);
    }
    if let Some(out) = &cli.out {
        config.out = Some(out.display().to_string());
    }
    let outcome = run(cli.experiment, &config)?;
    let text = outcome.report.to_toml();
    let out = config.out.as_ref().map(PathBuf::from);
    match &out {
        Some(path) => write(path, &text, "out")?,
        None => print!("{text}"),
    }
    if let Some(csv) = &outcome.csv {
        let target = match (&config.csv, &out) {
            (Some(p), _) => Some((PathBuf::from(p), "csv")),
            (None, Some(p)) => Some((p.with_extension("csv"), "out")),
            (None, None) => None,
        };
        if let Some((path, field)) = target {
            write(&path, csv, field)?;
        }
    }
    eprintln!("{}: {:?}", cli.experiment.name(), outcome.report.verdict);
    Ok(outcome.report.verdict.is_pass())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
