//! CLI driver: runs one experiment (or all), writes the CSV report and
//! its JSON sidecar. Exit codes: 0 all pass, 1 assertion failure,
//! 2 configuration error.

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

use vlmult::harness::{config::HarnessConfig, report, run, EXPERIMENT_IDS};
use vlmult::Error;

#[derive(Parser, Debug)]
#[command(name = "vlmult", about = "experiment harness for variable-exponent multiplier studies")]
struct Cli {
    /// Experiment to run: e1..e9 or all
    experiment: String,

    /// TOML configuration file; omitted sections fall back to defaults
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output CSV path; the JSON sidecar lands next to it
    #[arg(long, default_value = "vlmult_report.csv")]
    out: PathBuf,

    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,

    /// Override the base grid sample count (power of two >= 16)
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,

    /// Override the base grid half-width
    #[arg(long = "grid-l")]
    grid_l: Option<f64>,

    /// Suppress the timestamp header line for byte-identical output
    #[arg(long)]
    reproducible: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cli(&cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("vlmult: one or more pass rules failed; see {}", cli.out.display());
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("vlmult: {e}");
            ExitCode::from(2)
        }
    }
}

fn run_cli(cli: &Cli) -> Result<bool, Error> {
    let mut cfg = match &cli.config {
        Some(path) => HarnessConfig::load(path)?,
        None => HarnessConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = cli.grid_n {
        cfg.grid.n = n;
    }
    if let Some(l) = cli.grid_l {
        cfg.grid.l = l;
    }
    cfg.validate()?;

    let ids: Vec<&str> = match cli.experiment.as_str() {
        "all" => EXPERIMENT_IDS.to_vec(),
        id if EXPERIMENT_IDS.contains(&id) => vec![id],
        other => {
            return Err(Error::Config(format!(
                "unknown experiment '{other}' (expected e1..e9 or all)"
            )))
        }
    };

    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        reports.push(run(id, &cfg)?);
    }
    let run_report = report::RunReport { seed: cfg.seed, config: cfg, reports };
    report::write_reports(&cli.out, &run_report, cli.reproducible)?;
    Ok(run_report.all_pass())
}
