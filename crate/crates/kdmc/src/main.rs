use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use kdmc::{emit_csv, timing_path, Error, Experiment, ExperimentConfig};

/// Kinetic and kinetic-diffusion particle Monte Carlo experiments.
#[derive(Debug, Parser)]
#[command(name = "kdmc", version)]
struct Cli {
    /// single-step-low | single-step-high | histogram | speedup | moments-check | constants-check
    experiment: Experiment,
    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    particles: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination (stdout when absent here and in the config)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kdmc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut cfg = ExperimentConfig::load(&cli.config)?;
    if cli.particles.is_some() {
        cfg.particles = cli.particles;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.out.is_some() {
        cfg.output = cli.out;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    cfg.validate()?;

    let outcome = kdmc::run(cli.experiment, &cfg)?;
    match &cfg.output {
        Some(path) => {
            emit_csv(&outcome.csv, path)?;
            if let Some(t) = &outcome.timing_csv {
                emit_csv(t, &timing_path(path))?;
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&outcome.csv).map_err(|e| Error::Runtime(format!("stdout: {e}")))?;
            if let Some(t) = &outcome.timing_csv {
                eprint!("{}", String::from_utf8_lossy(t));
            }
        }
    }
    if !outcome.failures.is_empty() {
        for f in &outcome.failures {
            eprintln!("FAIL {f}");
        }
        return Err(Error::CheckFailed(format!("{} check(s) failed", outcome.failures.len())));
    }
    Ok(())
}
