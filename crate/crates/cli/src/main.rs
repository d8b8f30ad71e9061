//! `vmlbench`: run closed-loop scenarios, sweep a parameter, summarise results.
//!
//! Exits non-zero only for configuration and I/O errors. A diverged filter
//! is a result, not a failure.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use vml_core::bench::{self, output, FilterKind, ScenarioConfig, SweepAxis};

#[derive(Parser)]
#[command(name = "vmlbench", version, about = "Closed-loop benchmark of VML and EKF estimators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fly one scenario with one filter.
    Run {
        /// Scenario TOML file; defaults apply when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Overrides the scenario's filter: ls, brf, prf, ekf, ekf_or, ekf_dh.
        #[arg(long)]
        filter: Option<FilterKind>,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Vary one parameter over several seeds and filters.
    Sweep {
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// detection_frequency, outlier_probability or delay.
        #[arg(long)]
        axis: SweepAxis,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        #[arg(long, value_delimiter = ',', default_value = "ekf,brf,prf")]
        filters: Vec<FilterKind>,
        /// Worker threads. Core times are only comparable with 1.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Tabulate every sweep and run found in a directory.
    Compare {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn load(path: Option<&PathBuf>) -> Result<ScenarioConfig> {
    match path {
        Some(p) => ScenarioConfig::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(ScenarioConfig::default()),
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { scenario, filter, seed, out } => {
            let mut cfg = load(scenario.as_ref())?;
            if let Some(f) = filter {
                cfg.filter = f;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let result = bench::run_scenario(&cfg)?;
            let path = output::write_run(&out, &result)?;
            println!(
                "{} seed {}: gamma {:.4} m, diverged {}, laps {}, predict {:.3} ms, correct {:.3} ms",
                result.filter,
                result.seed,
                result.gamma,
                result.diverged,
                result.laps_completed,
                result.core.predict * 1e3,
                result.core.correct * 1e3,
            );
            if let Some(why) = &result.failure {
                println!("run ended early: {why}");
            }
            println!("wrote {}", path.display());
        }
        Command::Sweep { scenario, axis, values, repeats, filters, jobs, out } => {
            let cfg = load(scenario.as_ref())?;
            let records = bench::sweep(&cfg, axis, &values, repeats, &filters, jobs)?;
            let (csv, json) = output::write_sweep(&out, axis, repeats, &cfg, &records)?;
            print_cells(&bench::summarize(&records), axis.name());
            println!("wrote {} and {}", csv.display(), json.display());
        }
        Command::Compare { out } => {
            let rows = output::compare(&out)?;
            println!(
                "{:<20} {:>8} {:<7} {:>5} {:>10} {:>9} {:>12} {:>12}",
                "axis", "value", "filter", "runs", "gamma [m]", "diverged", "predict [ms]", "correct [ms]"
            );
            for r in &rows {
                println!(
                    "{:<20} {:>8.3} {:<7} {:>5} {:>10.4} {:>9.2} {:>12.3} {:>12.3}",
                    r.axis,
                    r.value,
                    r.filter.name(),
                    r.runs,
                    r.mean_gamma,
                    r.divergence_rate,
                    r.mean_t_predict * 1e3,
                    r.mean_t_correct * 1e3
                );
            }
            println!("wrote {}", out.join("comparison.csv").display());
        }
    }
    Ok(())
}

fn print_cells(cells: &[bench::CellSummary], axis: &str) {
    println!("{:>10} {:<7} {:>10} {:>9} {:>12}", axis, "filter", "gamma [m]", "diverged", "core [ms]");
    for c in cells {
        println!(
            "{:>10.3} {:<7} {:>10.4} {:>9.2} {:>12.3}",
            c.value,
            c.filter.name(),
            c.mean_gamma,
            c.divergence_rate,
            c.mean_core_time * 1e3
        );
    }
}
