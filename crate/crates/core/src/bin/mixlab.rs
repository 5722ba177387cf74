use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mixlab::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use mixlab::Error;

#[derive(Parser)]
#[command(
    name = "mixlab",
    version,
    about = "Langevin mixing-time bounds, simulations and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,
    /// Overrides `master_seed` in the config
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (defaults to the config's `output`, then `.`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; output does not depend on this
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate bound calculators
    Bound(RunArgs),
    /// Estimate a mixing curve by simulation
    Simulate(RunArgs),
    /// Check the lower-bound constructions
    Lower(RunArgs),
    /// Run the invariant suite
    Verify(RunArgs),
}

fn run(kind: ExperimentKind, args: &RunArgs) -> Result<bool, (Error, PathBuf)> {
    let fallback = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let text = std::fs::read_to_string(&args.config).map_err(|e| (Error::from(e), fallback.clone()))?;
    let mut cfg = ExperimentConfig::from_json(&text).map_err(|e| (e, fallback.clone()))?;
    match cfg.kind {
        Some(k) if k != kind => {
            let msg = format!("config is for `{}`, not `{}`", k.name(), kind.name());
            return Err((
                Error::Config {
                    field: "kind".into(),
                    message: msg,
                },
                fallback,
            ));
        }
        _ => cfg.kind = Some(kind),
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    let out_dir = args
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let output = run_experiment(&cfg, args.workers).map_err(|e| (e, out_dir.clone()))?;
    output.write_to(&out_dir).map_err(|e| (e, out_dir.clone()))?;
    for row in &output.rows {
        let status = match row.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "    ",
        };
        let t = row.horizon.map(|t| format!(" T={t}")).unwrap_or_default();
        let fmt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into());
        println!(
            "{status} {:<36}{t} theory={} empirical={} {}",
            row.metric,
            fmt(row.theoretical),
            fmt(row.empirical),
            row.params
        );
    }
    Ok(output.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Bound(a) => (ExperimentKind::Bound, a),
        Command::Simulate(a) => (ExperimentKind::Simulate, a),
        Command::Lower(a) => (ExperimentKind::Lower, a),
        Command::Verify(a) => (ExperimentKind::Verify, a),
    };
    match run(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err((e, dir)) => {
            let report = match &e {
                Error::Config { field, message } => {
                    serde_json::json!({"error": "config", "field": field, "message": message})
                }
                other => serde_json::json!({"error": "run", "message": other.to_string()}),
            };
            eprintln!("{report}");
            if std::fs::create_dir_all(&dir).is_ok() {
                let _ = std::fs::write(dir.join("error.json"), report.to_string());
            }
            ExitCode::from(2)
        }
    }
}
