use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info};

use iacache::cli::{self, to_csv, Scenario};

#[derive(Parser)]
#[command(
    name = "iacache",
    version,
    about = "Rate analysis and pair-count optimization for cache-enabled interference alignment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (key = value); built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Total rate against the number of pairs.
    Fig2(Common),
    /// Per-user rate against the steepness factor with regime bounds.
    Fig3(Common),
    /// Maximum total rate against the steepness factor.
    Fig4(Common),
    /// Optimal number of pairs against the CSI backhaul share.
    Fig5(Common),
    /// Pair-count optimization for the scenario.
    Optimize(Common),
    /// Monte Carlo validation of the closed forms.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
}

fn load(common: &Common) -> iacache::Result<Scenario> {
    let mut s = match &common.config {
        Some(p) => Scenario::load(p)?,
        None => Scenario::default(),
    };
    if let Some(seed) = common.seed {
        s.seed = seed;
    }
    Ok(s)
}

fn emit(out: Option<&Path>, csv: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, csv),
        None => std::io::stdout().lock().write_all(csv.as_bytes()),
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    let (common, csv, failed) = match command {
        Command::Fig2(c) => {
            let rows = cli::run_fig2(&load(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            (c, to_csv(&rows), false)
        }
        Command::Fig3(c) => {
            let rows = cli::run_fig3(&load(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            (c, to_csv(&rows), false)
        }
        Command::Fig4(c) => {
            let rows = cli::run_fig4(&load(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            (c, to_csv(&rows), false)
        }
        Command::Fig5(c) => {
            let rows = cli::run_fig5(&load(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            (c, to_csv(&rows), false)
        }
        Command::Optimize(c) => {
            let rows = cli::run_optimize(&load(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            (c, to_csv(&rows), false)
        }
        Command::Validate { common, trials } => {
            let s = load(&common).map_err(|e| e.to_string())?;
            let rows = cli::run_validate(&s, trials, s.seed).map_err(|e| e.to_string())?;
            for r in &rows {
                eprintln!(
                    "{:<28} {} empirical {:>14.6e} reference {:>14.6e} gap {:>9.3}%",
                    r.metric,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.empirical,
                    r.reference,
                    100.0 * r.rel_gap
                );
            }
            let failed = rows.iter().any(|r| !r.pass);
            (common, to_csv(&rows), failed)
        }
    };
    emit(common.out.as_deref(), &csv).map_err(|e| format!("writing output: {e}"))?;
    if let Some(p) = &common.out {
        info!("wrote {}", p.display());
    }
    if failed {
        error!("one or more validation tolerances failed");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(args.command) {
        Ok(code) => code,
        Err(msg) => {
            error!("{msg}");
            ExitCode::from(1)
        }
    }
}
